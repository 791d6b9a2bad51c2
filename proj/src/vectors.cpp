#include "omlkit/vectors.hpp"

#include <map>
#include <set>

#include "omlkit/errors.hpp"

namespace omlkit {

Vec3Q::Vec3Q(mpz_class x, mpz_class y, mpz_class z) : c_{std::move(x), std::move(y), std::move(z)} {
  mpz_class g = 0;
  for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g == 0) return;
  for (auto& v : c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  for (const auto& v : c_) {
    if (sgn(v) == 0) continue;
    if (sgn(v) < 0)
      for (auto& w : c_) w = -w;
    break;
  }
}

Vec3Q::Vec3Q(const mpq_class& x, const mpq_class& y, const mpq_class& z) {
  mpz_class l = 1;
  for (const mpq_class* q : {&x, &y, &z}) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
  mpz_class s[3];
  const mpq_class* qs[3] = {&x, &y, &z};
  for (int i = 0; i < 3; ++i) s[i] = qs[i]->get_num() * (l / qs[i]->get_den());
  *this = Vec3Q(s[0], s[1], s[2]);
}

std::string Vec3Q::str() const { return "{" + c_[0].get_str() + "," + c_[1].get_str() + "," + c_[2].get_str() + "}"; }

bool operator<(const Vec3Q& a, const Vec3Q& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

mpz_class dot(const Vec3Q& a, const Vec3Q& b) { return a.x() * b.x() + a.y() * b.y() + a.z() * b.z(); }

Vec3Q cross(const Vec3Q& a, const Vec3Q& b) {
  return Vec3Q(mpz_class(a.y() * b.z() - a.z() * b.y()), mpz_class(a.z() * b.x() - a.x() * b.z()),
               mpz_class(a.x() * b.y() - a.y() * b.x()));
}

// ---------------------------------------------------------------------------
// Subspaces

int Subspace3::dim() const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::Line: return 1;
    case Kind::Plane: return 2;
    case Kind::Full: return 3;
  }
  return 0;
}

std::string Subspace3::str() const {
  switch (kind) {
    case Kind::Zero: return "0";
    case Kind::Line: return "line" + v.str();
    case Kind::Plane: return "plane" + v.str();
    case Kind::Full: return "R3";
  }
  return "?";
}

Subspace3 zero_space() { return {}; }
Subspace3 full_space() { return {Subspace3::Kind::Full, {}}; }
Subspace3 span(const Vec3Q& v) { return v.is_zero() ? zero_space() : Subspace3{Subspace3::Kind::Line, v}; }
Subspace3 plane(const Vec3Q& normal) {
  if (normal.is_zero()) throw PreconditionError("a plane needs a nonzero normal");
  return {Subspace3::Kind::Plane, normal};
}

Subspace3 perp(const Subspace3& s) {
  switch (s.kind) {
    case Subspace3::Kind::Zero: return full_space();
    case Subspace3::Kind::Full: return zero_space();
    case Subspace3::Kind::Line: return {Subspace3::Kind::Plane, s.v};
    case Subspace3::Kind::Plane: return {Subspace3::Kind::Line, s.v};
  }
  return {};
}

Subspace3 sum(const Subspace3& s, const Subspace3& t) {
  using K = Subspace3::Kind;
  if (s.kind == K::Zero) return t;
  if (t.kind == K::Zero) return s;
  if (s.kind == K::Full || t.kind == K::Full) return full_space();
  if (s.kind == K::Line && t.kind == K::Line) return s.v == t.v ? s : plane(cross(s.v, t.v));
  if (s.kind == K::Plane && t.kind == K::Plane) return s.v == t.v ? s : full_space();
  const Subspace3& line = s.kind == K::Line ? s : t;
  const Subspace3& pl = s.kind == K::Plane ? s : t;
  return sgn(dot(line.v, pl.v)) == 0 ? pl : full_space();
}

Subspace3 intersect(const Subspace3& s, const Subspace3& t) {
  using K = Subspace3::Kind;
  if (s.kind == K::Zero || t.kind == K::Zero) return zero_space();
  if (s.kind == K::Full) return t;
  if (t.kind == K::Full) return s;
  if (s.kind == K::Line && t.kind == K::Line) return s.v == t.v ? s : zero_space();
  if (s.kind == K::Plane && t.kind == K::Plane) return s.v == t.v ? s : span(cross(s.v, t.v));
  const Subspace3& line = s.kind == K::Line ? s : t;
  const Subspace3& pl = s.kind == K::Plane ? s : t;
  return sgn(dot(line.v, pl.v)) == 0 ? line : zero_space();
}

bool leq(const Subspace3& s, const Subspace3& t) {
  using K = Subspace3::Kind;
  if (s.kind == K::Zero || t.kind == K::Full) return true;
  if (s.kind == K::Full || t.kind == K::Zero) return false;
  if (s.kind == K::Plane && t.kind == K::Line) return false;
  if (s.kind == t.kind) return s.v == t.v;
  return sgn(dot(s.v, t.v)) == 0;  // line in plane
}

// ---------------------------------------------------------------------------
// Vector realizations

namespace {

class VectorSearch {
 public:
  VectorSearch(const MmpHypergraph& h, const VectorfindOptions& opts) : h_(h), opts_(opts), blocks_(h.position_blocks()) {
    std::set<Vec3Q> cands;
    for (long x : opts.components)
      for (long y : opts.components)
        for (long z : opts.components) {
          Vec3Q v(x, y, z);
          if (!v.is_zero()) cands.insert(v);
        }
    cands_.assign(cands.begin(), cands.end());
    // Blocks in order, preferring ones attached to what is already placed.
    std::vector<char> done(blocks_.size(), 0), placed(h.vertex_count(), 0);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      std::size_t pick = blocks_.size();
      for (std::size_t b = 0; b < blocks_.size() && pick == blocks_.size(); ++b) {
        if (done[b]) continue;
        for (int x : blocks_[b])
          if (placed[static_cast<std::size_t>(x)]) {
            pick = b;
            break;
          }
      }
      if (pick == blocks_.size())
        for (std::size_t b = 0; b < blocks_.size(); ++b)
          if (!done[b]) {
            pick = b;
            break;
          }
      done[pick] = 1;
      for (int x : blocks_[pick]) placed[static_cast<std::size_t>(x)] = 1;
      order_.push_back(static_cast<int>(pick));
    }
  }

  std::optional<VectorAssignment> run() {
    const auto has = [&](long c) { return std::find(opts_.components.begin(), opts_.components.end(), c) != opts_.components.end(); };
    assigned_.assign(h_.vertex_count(), Vec3Q());
    if (!order_.empty() && has(0) && has(1)) {
      const auto& b = blocks_[static_cast<std::size_t>(order_.front())];
      const Vec3Q basis[3] = {Vec3Q(0, 0, 1), Vec3Q(0, 1, 0), Vec3Q(1, 0, 0)};
      for (int i = 0; i < 3; ++i) place(b[static_cast<std::size_t>(i)], basis[i]);
      if (search(1)) return assigned_;
      for (int x : b) unplace(x);
    }
    if (search(0)) return assigned_;
    return std::nullopt;
  }

 private:
  bool free(const Vec3Q& v) const { return !used_.count(v); }
  void place(int atom, const Vec3Q& v) {
    assigned_[static_cast<std::size_t>(atom)] = v;
    used_.insert(v);
  }
  void unplace(int atom) {
    used_.erase(assigned_[static_cast<std::size_t>(atom)]);
    assigned_[static_cast<std::size_t>(atom)] = Vec3Q();
  }
  bool is_placed(int atom) const { return !assigned_[static_cast<std::size_t>(atom)].is_zero(); }
  const Vec3Q& at(int atom) const { return assigned_[static_cast<std::size_t>(atom)]; }

  bool search(std::size_t k) {
    if (opts_.node_budget && ++nodes_ > opts_.node_budget) throw BudgetExceeded("vectorfind node budget exhausted");
    if (k == order_.size()) return true;
    const auto& b = blocks_[static_cast<std::size_t>(order_[k])];
    std::vector<int> fixed, open;
    for (int x : b) (is_placed(x) ? fixed : open).push_back(x);
    for (std::size_t i = 0; i < fixed.size(); ++i)
      for (std::size_t j = i + 1; j < fixed.size(); ++j)
        if (sgn(dot(at(fixed[i]), at(fixed[j]))) != 0) return false;

    if (open.empty()) return search(k + 1);
    if (fixed.size() == 2) return complete(fixed[0], fixed[1], open[0], k);
    if (fixed.size() == 1) {
      for (const Vec3Q& v : cands_) {
        if (!free(v) || sgn(dot(v, at(fixed[0]))) != 0) continue;
        place(open[0], v);
        if (complete(fixed[0], open[0], open[1], k)) return true;
        unplace(open[0]);
      }
      return false;
    }
    for (const Vec3Q& u : cands_) {
      if (!free(u)) continue;
      place(open[0], u);
      for (const Vec3Q& v : cands_) {
        if (!free(v) || sgn(dot(u, v)) != 0) continue;
        place(open[1], v);
        if (complete(open[0], open[1], open[2], k)) return true;
        unplace(open[1]);
      }
      unplace(open[0]);
    }
    return false;
  }

  // Third atom of block k as the cross product of the other two.
  bool complete(int p, int q, int r, std::size_t k) {
    const Vec3Q w = cross(at(p), at(q));
    if (!free(w)) return false;
    place(r, w);
    if (search(k + 1)) return true;
    unplace(r);
    return false;
  }

  const MmpHypergraph& h_;
  const VectorfindOptions& opts_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> order_;
  std::vector<Vec3Q> cands_;
  VectorAssignment assigned_;
  std::set<Vec3Q> used_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<VectorAssignment> vectorfind(const MmpHypergraph& h, const VectorfindOptions& opts) {
  if (!h.is_uniform(3)) throw PreconditionError("vectorfind needs a 3-uniform hypergraph");
  return VectorSearch(h, opts).run();
}

bool is_realization(const MmpHypergraph& h, const VectorAssignment& a) {
  if (a.size() != h.vertex_count()) return false;
  std::set<Vec3Q> seen;
  for (const auto& v : a)
    if (v.is_zero() || !seen.insert(v).second) return false;
  for (const auto& b : h.position_blocks())
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (sgn(dot(a[static_cast<std::size_t>(b[i])], a[static_cast<std::size_t>(b[j])])) != 0) return false;
  return true;
}

nlohmann::json to_json(const MmpHypergraph& h, const VectorAssignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < a.size(); ++i)
    j[vertex_label(h.vertices()[i])] = {a[i].x().get_str(), a[i].y().get_str(), a[i].z().get_str()};
  return j;
}

// ---------------------------------------------------------------------------
// Orthoarguesian inclusion

NoaSubspaceResult check_noa_subspace(int n, const std::vector<Subspace3>& M, const std::vector<Subspace3>& N) {
  if (n < 1 || static_cast<int>(M.size()) != n + 1 || static_cast<int>(N.size()) != n + 1)
    throw PreconditionError("check_noa_subspace needs n >= 1 and n+1 subspaces on each side");
  for (int i = 0; i <= n; ++i)
    if (!leq(M[static_cast<std::size_t>(i)], perp(N[static_cast<std::size_t>(i)])))
      throw PreconditionError("M" + std::to_string(i) + " is not orthogonal to N" + std::to_string(i));

  NoaSubspaceResult res;
  std::map<std::vector<int>, Subspace3> memo;
  const auto label = [](const std::vector<int>& idx) {
    std::string s = "T" + std::to_string(idx.size() - 1) + "(";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s + ")";
  };
  std::function<Subspace3(const std::vector<int>&)> T = [&](const std::vector<int>& idx) -> Subspace3 {
    if (auto it = memo.find(idx); it != memo.end()) return it->second;
    Subspace3 r;
    const auto m = [&](int i) -> const Subspace3& { return M[static_cast<std::size_t>(i)]; };
    const auto nn = [&](int i) -> const Subspace3& { return N[static_cast<std::size_t>(i)]; };
    if (idx.size() == 2) {
      r = intersect(sum(m(idx[0]), m(idx[1])), sum(nn(idx[0]), nn(idx[1])));
    } else {
      const std::vector<int> tail(idx.begin() + 3, idx.end());
      const auto with = [&](int a, int b) {
        std::vector<int> v{a, b};
        v.insert(v.end(), tail.begin(), tail.end());
        return v;
      };
      r = intersect(T(with(idx[0], idx[1])), sum(T(with(idx[0], idx[2])), T(with(idx[1], idx[2]))));
    }
    memo.emplace(idx, r);
    res.trace.emplace_back(label(idx), r);
    return r;
  };

  std::vector<int> all;
  for (int i = 0; i <= n; ++i) all.push_back(i);
  const Subspace3 tn = T(all);
  Subspace3 lhs = full_space();
  for (int i = 0; i <= n; ++i) lhs = intersect(lhs, sum(M[static_cast<std::size_t>(i)], N[static_cast<std::size_t>(i)]));
  const Subspace3 rhs = sum(N[0], intersect(M[0], sum(M[1], tn)));
  res.lhs = lhs;
  res.rhs = rhs;
  res.holds = leq(lhs, rhs);
  res.trace.emplace_back("lhs", lhs);
  res.trace.emplace_back("rhs", rhs);
  return res;
}

}  // namespace omlkit
