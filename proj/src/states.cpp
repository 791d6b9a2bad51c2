#include "omlkit/states.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

#include "omlkit/errors.hpp"
#include "omlkit/simplex.hpp"

namespace omlkit {

namespace {

// m(x) = constant + sign * x_var (var < 0: constant only).
struct Affine {
  int var = -1;
  int sign = 0;
  int constant = 0;
};

Affine value_of(const Oml& L, Oml::Id x) {
  const Element e = L.element(x);
  switch (e.kind) {
    case ElementKind::Zero:
      return {-1, 0, 0};
    case ElementKind::One:
      return {-1, 0, 1};
    case ElementKind::Atom:
      return {e.index, 1, 0};
    case ElementKind::Coatom:
      return {e.index, -1, 1};
  }
  return {};
}

mpq_class eval(const Affine& f, const StateSolution& s) {
  mpq_class v = f.constant;
  if (f.var >= 0) v += f.sign * s[static_cast<std::size_t>(f.var)];
  return v;
}

LinearProgram base_program(const Oml& L) {
  const int n = L.n_atoms();
  LinearProgram lp(n);
  for (const auto& b : L.source().position_blocks()) {
    std::vector<mpq_class> row(static_cast<std::size_t>(n));
    for (int v : b) row[static_cast<std::size_t>(v)] = 1;
    lp.add_equality(std::move(row), 1);
  }
  return lp;
}

// Adds m(a) = value; false when that is impossible for constants.
bool pin(LinearProgram& lp, const Affine& f, int value) {
  if (f.var < 0) return f.constant == value;
  // constant + sign*x = value
  lp.fix(f.var, mpq_class(value - f.constant) / f.sign);
  return true;
}

std::vector<mpq_class> objective(int n, const Affine& f, int scale = 1) {
  std::vector<mpq_class> c(static_cast<std::size_t>(n));
  if (f.var >= 0) c[static_cast<std::size_t>(f.var)] = f.sign * scale;
  return c;
}

// Runs body(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

struct StrongResult {
  std::vector<PairFailure> failures;
  std::size_t lps = 0;
};

// All failures of the strong-set condition for one pinned element a.
StrongResult strong_for(const Oml& L, Oml::Id a, std::vector<StateSolution> pool) {
  StrongResult out;
  const Affine fa = value_of(L, a);
  const int n = L.n_atoms();
  std::vector<Oml::Id> targets;
  for (Oml::Id b = 0; b < L.size(); ++b)
    if (!L.leq(a, b)) targets.push_back(b);
  if (targets.empty()) return out;

  std::erase_if(pool, [&](const StateSolution& s) { return eval(fa, s) != 1; });
  LinearProgram lp = base_program(L);
  const bool possible = pin(lp, fa, 1);
  if (pool.empty()) {
    LpResult r;
    if (possible) {
      r = lp.minimize(std::vector<mpq_class>(static_cast<std::size_t>(n)));
      ++out.lps;
    }
    if (!possible || r.status != LpStatus::Optimal) {
      for (Oml::Id b : targets) out.failures.push_back({a, b, true, 0});
      return out;
    }
    pool.push_back(std::move(r.x));
  }
  for (Oml::Id b : targets) {
    const Affine fb = value_of(L, b);
    const bool known = std::any_of(pool.begin(), pool.end(), [&](const StateSolution& s) { return eval(fb, s) < 1; });
    if (known) continue;
    LpResult r = lp.minimize(objective(n, fb));
    ++out.lps;
    const mpq_class opt = r.value + fb.constant;
    if (opt >= 1) out.failures.push_back({a, b, false, opt});
    pool.push_back(std::move(r.x));
  }
  return out;
}

}  // namespace

bool is_state(const MmpHypergraph& h, const StateSolution& s) {
  if (s.size() != h.vertex_count()) return false;
  for (const auto& v : s)
    if (v < 0 || v > 1) return false;
  for (const auto& b : h.position_blocks()) {
    mpq_class sum = 0;
    for (int x : b) sum += s[static_cast<std::size_t>(x)];
    if (sum != 1) return false;
  }
  return true;
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

int count_state_freedom(const Oml& L) {
  const int n = L.n_atoms();
  const LinearProgram lp = base_program(L);
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& b : L.source().position_blocks()) {
    std::vector<mpq_class> row(static_cast<std::size_t>(n));
    for (int v : b) row[static_cast<std::size_t>(v)] = 1;
    rows.push_back(std::move(row));
  }
  const LpResult any = lp.minimize(std::vector<mpq_class>(static_cast<std::size_t>(n)));
  if (any.status != LpStatus::Optimal) throw PreconditionError("the lattice admits no state");
  std::vector<StateSolution> pool{any.x};
  for (int k = 0; k < n; ++k) {
    const bool positive = std::any_of(pool.begin(), pool.end(), [&](const StateSolution& s) { return sgn(s[static_cast<std::size_t>(k)]) > 0; });
    if (positive) continue;
    std::vector<mpq_class> c(static_cast<std::size_t>(n));
    c[static_cast<std::size_t>(k)] = 1;
    LpResult r = lp.maximize(c);
    if (sgn(r.value) > 0) {
      pool.push_back(std::move(r.x));
      continue;
    }
    // x_k vanishes on the whole polytope.
    std::vector<mpq_class> row(static_cast<std::size_t>(n));
    row[static_cast<std::size_t>(k)] = 1;
    rows.push_back(std::move(row));
  }
  return n - rank(std::move(rows));
}

std::optional<std::vector<int>> two_valued_coloring(const MmpHypergraph& h, const std::vector<int>& pins) {
  const int n = static_cast<int>(h.vertex_count());
  const auto blocks = h.position_blocks();
  const auto& inc = h.incidence();
  std::vector<int> val(static_cast<std::size_t>(n), -1);
  std::vector<int> trail;

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return inc[static_cast<std::size_t>(x)].size() > inc[static_cast<std::size_t>(y)].size(); });

  // Assigns and propagates; false on a conflict (the trail still records
  // everything assigned, for undo).
  std::function<bool(int, int)> assign = [&](int x, int v) -> bool {
    int& cur = val[static_cast<std::size_t>(x)];
    if (cur >= 0) return cur == v;
    cur = v;
    trail.push_back(x);
    for (int bi : inc[static_cast<std::size_t>(x)]) {
      const auto& b = blocks[static_cast<std::size_t>(bi)];
      int ones = 0, open = 0, last_open = -1;
      for (int y : b) {
        const int w = val[static_cast<std::size_t>(y)];
        if (w == 1) ++ones;
        if (w < 0) {
          ++open;
          last_open = y;
        }
      }
      if (ones > 1) return false;
      if (ones == 1) {
        for (int y : b)
          if (val[static_cast<std::size_t>(y)] < 0 && !assign(y, 0)) return false;
      } else if (open == 0) {
        return false;
      } else if (open == 1 && !assign(last_open, 1)) {
        return false;
      }
    }
    return true;
  };
  const auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      val[static_cast<std::size_t>(trail.back())] = -1;
      trail.pop_back();
    }
  };

  for (std::size_t i = 0; i < pins.size() && static_cast<int>(i) < n; ++i)
    if (pins[i] >= 0 && !assign(static_cast<int>(i), pins[i])) return std::nullopt;

  std::function<bool()> search = [&]() -> bool {
    int x = -1;
    for (int y : order)
      if (val[static_cast<std::size_t>(y)] < 0) {
        x = y;
        break;
      }
    if (x < 0) return true;
    for (int v : {1, 0}) {
      const std::size_t mark = trail.size();
      if (assign(x, v) && search()) return true;
      undo(mark);
    }
    return false;
  };
  if (!search()) return std::nullopt;
  return val;
}

StateClassReport solve_states(const Oml& L, unsigned queries, const StateOptions& opts) {
  StateClassReport rep;
  const int n = L.n_atoms();
  const MmpHypergraph& h = L.source();
  const LinearProgram lp = base_program(L);
  const std::vector<mpq_class> zero_obj(static_cast<std::size_t>(n));

  const LpResult any = lp.minimize(zero_obj);
  ++rep.lps_solved;
  rep.admits_state = any.status == LpStatus::Optimal;
  std::vector<StateSolution> pool;
  if (rep.admits_state) {
    rep.witness = any.x;
    pool.push_back(any.x);
  }

  if (queries & QueryUnique) {
    if (!rep.admits_state) {
      rep.exactly_one = false;
    } else {
      // Unique iff every coordinate has min = max.
      bool unique = true;
      const StateSolution& s = pool.front();
      for (int k = 0; k < n && unique; ++k) {
        std::vector<mpq_class> c(static_cast<std::size_t>(n));
        c[static_cast<std::size_t>(k)] = 1;
        const LpResult lo = lp.minimize(c), hi = lp.maximize(c);
        rep.lps_solved += 2;
        if (lo.value != s[static_cast<std::size_t>(k)] || hi.value != s[static_cast<std::size_t>(k)]) {
          unique = false;
          pool.push_back(lo.value != s[static_cast<std::size_t>(k)] ? lo.x : hi.x);
        }
      }
      rep.exactly_one = unique;
      if (unique) rep.unique_state = s;
      rep.dimension = count_state_freedom(L);
    }
  }

  if (queries & QueryStrong) {
    std::vector<Oml::Id> pinned;
    for (Oml::Id a = 1; a < L.size(); ++a) pinned.push_back(a);
    std::vector<StrongResult> parts(pinned.size());
    parallel_for(pinned.size(), opts.threads, [&](std::size_t i) { parts[i] = strong_for(L, pinned[i], pool); });
    for (auto& p : parts) {
      rep.lps_solved += p.lps;
      rep.strong_failures.insert(rep.strong_failures.end(), p.failures.begin(), p.failures.end());
    }
    rep.strong_quantum = rep.admits_state && rep.strong_failures.empty();
  }

  if (queries & QueryOrder) {
    rep.full_order_determining = true;
    for (Oml::Id a = 0; a < L.size() && *rep.full_order_determining; ++a)
      for (Oml::Id b = 0; b < L.size(); ++b) {
        if (L.leq(a, b)) continue;
        const Affine fa = value_of(L, a), fb = value_of(L, b);
        if (std::any_of(pool.begin(), pool.end(), [&](const StateSolution& s) { return eval(fa, s) > eval(fb, s); })) continue;
        if (!rep.admits_state) {
          rep.full_order_determining = false;
          rep.order_failure = PairFailure{a, b, true, 0};
          break;
        }
        std::vector<mpq_class> c(static_cast<std::size_t>(n));
        if (fa.var >= 0) c[static_cast<std::size_t>(fa.var)] += fa.sign;
        if (fb.var >= 0) c[static_cast<std::size_t>(fb.var)] -= fb.sign;
        LpResult r = lp.maximize(c);
        ++rep.lps_solved;
        const mpq_class gap = r.value + fa.constant - fb.constant;
        if (sgn(gap) <= 0) {
          rep.full_order_determining = false;
          rep.order_failure = PairFailure{a, b, false, gap};
          break;
        }
        pool.push_back(std::move(r.x));
      }
  }

  if (queries & QueryColoring) {
    rep.coloring_searched = true;
    rep.two_valued = two_valued_coloring(h);
  }

  if (queries & QueryClassical) {
    std::vector<std::vector<int>> colorings;
    if (rep.two_valued) colorings.push_back(*rep.two_valued);
    else if (!rep.coloring_searched)
      if (auto c = two_valued_coloring(h)) colorings.push_back(*c);
    rep.strong_classical = true;
    const auto m = [&](const std::vector<int>& c, const Affine& f) { return f.constant + (f.var >= 0 ? f.sign * c[static_cast<std::size_t>(f.var)] : 0); };
    for (Oml::Id a = 1; a < L.size() && *rep.strong_classical; ++a)
      for (Oml::Id b = 0; b < L.size(); ++b) {
        if (L.leq(a, b)) continue;
        const Affine fa = value_of(L, a), fb = value_of(L, b);
        if (std::any_of(colorings.begin(), colorings.end(), [&](const auto& c) { return m(c, fa) == 1 && m(c, fb) == 0; })) continue;
        std::vector<int> pins(static_cast<std::size_t>(n), -1);
        bool ok = true;
        for (auto [f, want] : {std::pair{fa, 1}, std::pair{fb, 0}}) {
          if (f.var < 0) {
            ok = ok && f.constant == want;
            continue;
          }
          const int v = f.sign > 0 ? want : 1 - want;
          int& p = pins[static_cast<std::size_t>(f.var)];
          if (p >= 0 && p != v) ok = false;
          p = v;
        }
        std::optional<std::vector<int>> c;
        if (ok) c = two_valued_coloring(h, pins);
        if (!c) {
          rep.strong_classical = false;
          rep.classical_failure = PairFailure{a, b, true, 0};
          break;
        }
        colorings.push_back(std::move(*c));
      }
  }
  return rep;
}

nlohmann::json to_json(const StateClassReport& r, const Oml& L) {
  using nlohmann::json;
  const auto state = [&](const StateSolution& s) {
    json o = json::object();
    for (int i = 0; i < L.n_atoms(); ++i) o[L.name(L.atom(i))] = rational_string(s[static_cast<std::size_t>(i)]);
    return o;
  };
  const auto pair = [&](const PairFailure& f) {
    json o = {{"a", L.name(f.a)}, {"b", L.name(f.b)}, {"pin_infeasible", f.pin_infeasible}};
    if (!f.pin_infeasible) o["optimum"] = rational_string(f.optimum);
    return o;
  };
  json j = json::object();
  j["admits_state"] = r.admits_state;
  if (r.witness) j["witness"] = state(*r.witness);
  if (r.exactly_one) j["exactly_one"] = *r.exactly_one;
  if (r.unique_state) j["unique_state"] = state(*r.unique_state);
  if (r.dimension) j["dimension"] = *r.dimension;
  if (r.strong_quantum) {
    j["strong_quantum"] = *r.strong_quantum;
    json fs = json::array();
    for (const auto& f : r.strong_failures) fs.push_back(pair(f));
    j["strong_failures"] = std::move(fs);
  }
  if (r.strong_classical) {
    j["strong_classical"] = *r.strong_classical;
    j["strong_classical_definition"] = "two-valued states separate every a not below b";
    if (r.classical_failure) j["classical_failure"] = pair(*r.classical_failure);
  }
  if (r.full_order_determining) {
    j["full_order_determining"] = *r.full_order_determining;
    j["full_order_determining_definition"] = "(for all states m: m(a) <= m(b)) implies a <= b";
    if (r.order_failure) j["order_failure"] = pair(*r.order_failure);
  }
  if (r.coloring_searched) {
    if (r.two_valued) {
      json o = json::object();
      for (int i = 0; i < L.n_atoms(); ++i) o[L.name(L.atom(i))] = (*r.two_valued)[static_cast<std::size_t>(i)];
      j["two_valued"] = std::move(o);
    } else {
      j["two_valued"] = nullptr;
    }
  }
  return j;
}

}  // namespace omlkit
