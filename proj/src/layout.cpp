#include "omlkit/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <tuple>
#include <set>

#include "omlkit/errors.hpp"

namespace omlkit {

namespace {

using Blocks = std::vector<std::vector<int>>;

// Blocks sharing an atom with each block.
std::vector<std::vector<int>> block_neighbours(const MmpHypergraph& h, const Blocks& pb) {
  std::vector<std::vector<int>> nb(pb.size());
  for (std::size_t b = 0; b < pb.size(); ++b) {
    std::set<int> s;
    for (int a : pb[b])
      for (int c : h.incidence()[static_cast<std::size_t>(a)])
        if (c != static_cast<int>(b)) s.insert(c);
    nb[b].assign(s.begin(), s.end());
  }
  return nb;
}

}  // namespace

std::vector<std::vector<int>> find_independent_sets(const MmpHypergraph& h, std::uint64_t node_budget) {
  if (!h.is_uniform(3)) throw PreconditionError("independent blocks need a 3-uniform hypergraph");
  const Blocks pb = h.position_blocks();
  const auto nb = block_neighbours(h, pb);
  const int B = static_cast<int>(pb.size());

  std::vector<char> covered(h.vertex_count(), 0);
  std::vector<int> hit(pb.size(), 0);
  std::vector<int> cur;
  std::vector<std::vector<int>> best_sets;
  std::size_t best = 0;
  std::uint64_t nodes = 0;

  const auto addable = [&](int b) {
    for (int a : pb[static_cast<std::size_t>(b)])
      if (covered[static_cast<std::size_t>(a)]) return false;
    for (int c : nb[static_cast<std::size_t>(b)])
      if (hit[static_cast<std::size_t>(c)] >= 2) return false;
    return true;
  };
  const auto toggle = [&](int b, int d) {
    for (int a : pb[static_cast<std::size_t>(b)]) covered[static_cast<std::size_t>(a)] = static_cast<char>(d > 0);
    for (int c : nb[static_cast<std::size_t>(b)]) hit[static_cast<std::size_t>(c)] += d;
  };

  std::function<void(int)> rec = [&](int i) {
    if (node_budget && ++nodes > node_budget) throw BudgetExceeded("independent block search budget exhausted");
    // Bound: addable blocks left, and the atoms they could still cover.
    std::size_t count = 0;
    std::set<int> atoms;
    for (int j = i; j < B; ++j)
      if (addable(j)) {
        ++count;
        atoms.insert(pb[static_cast<std::size_t>(j)].begin(), pb[static_cast<std::size_t>(j)].end());
      }
    const std::size_t bound = cur.size() + std::min(count, atoms.size() / 3);
    if (bound < best) return;
    if (count == 0) {
      if (cur.size() > best) {
        best = cur.size();
        best_sets.clear();
      }
      best_sets.push_back(cur);
      return;
    }
    while (!addable(i)) ++i;
    cur.push_back(i);
    toggle(i, 1);
    rec(i + 1);
    toggle(i, -1);
    cur.pop_back();
    rec(i + 1);
  };
  rec(0);
  std::sort(best_sets.begin(), best_sets.end());
  return best_sets;
}

namespace {

struct Edge {
  int block, u, free, v;  // u, v atoms of independent blocks
};

struct Trail {
  int start = -1, end = -1;
  std::vector<int> edges;  // into the edge list
  std::vector<int> blocks;
};

class LevelBuilder {
 public:
  LevelBuilder(const MmpHypergraph& h, const std::vector<int>& independent)
      : h_(h), pb_(h.position_blocks()), indep_(independent) {
    if (!h.is_uniform(3)) throw PreconditionError("levels need a 3-uniform hypergraph");
    owner_.assign(h.vertex_count(), -1);
    for (std::size_t k = 0; k < indep_.size(); ++k) {
      const int b = indep_[k];
      if (b < 0 || b >= static_cast<int>(pb_.size())) throw PreconditionError("independent block index out of range");
      for (int a : pb_[static_cast<std::size_t>(b)]) {
        if (owner_[static_cast<std::size_t>(a)] >= 0) throw PreconditionError("independent blocks share an atom");
        owner_[static_cast<std::size_t>(a)] = static_cast<int>(k);
      }
    }
    in_set_.assign(pb_.size(), 0);
    for (int b : indep_) in_set_[static_cast<std::size_t>(b)] = 1;
    for (std::size_t b = 0; b < pb_.size(); ++b) {
      if (in_set_[b]) continue;
      std::vector<int> ends, frees;
      std::set<int> owners;
      for (int a : pb_[b]) {
        if (owner_[static_cast<std::size_t>(a)] >= 0) {
          ends.push_back(a);
          owners.insert(owner_[static_cast<std::size_t>(a)]);
        } else {
          frees.push_back(a);
        }
      }
      if (owners.size() > 2) throw PreconditionError("block " + std::to_string(b) + " meets three independent blocks");
      if (ends.size() == 2) edges_.push_back({static_cast<int>(b), ends[0], frees[0], ends[1]});
    }
    at_atom_.assign(h.vertex_count(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      at_atom_[static_cast<std::size_t>(edges_[e].u)].push_back(static_cast<int>(e));
      at_atom_[static_cast<std::size_t>(edges_[e].v)].push_back(static_cast<int>(e));
    }
    used_.assign(edges_.size(), 0);
  }

  LayoutPlan build() {
    LayoutPlan plan;
    const std::size_t k = indep_.size();
    if (k >= 2) {
      try {
        if (auto t = shortest_covering_trail()) {
          plan.level1 = to_path(*t);
          mark(*t);
        } else {
          plan.diagnostics.push_back("no cycle of connecting blocks visits all independent blocks");
        }
        if (auto t = longest_return_trail()) {
          plan.level2.push_back(to_path(*t));
          mark(*t);
        }
      } catch (const BudgetExceeded&) {
        plan.level1 = {};
        plan.level2.clear();
        plan.diagnostics.assign(1, "cycle search budget exhausted; all remaining blocks drawn as sequences");
      }
    }
    std::vector<char> taken(pb_.size(), 0);
    for (int b : indep_) taken[static_cast<std::size_t>(b)] = 1;
    for (int b : plan.level1.blocks) taken[static_cast<std::size_t>(b)] = 1;
    for (const auto& p : plan.level2) for (int b : p.blocks) taken[static_cast<std::size_t>(b)] = 1;
    plan.level3 = sequences(taken);
    arrange(plan);
    return plan;
  }

 private:
  int other_end(int e, int a) const { return edges_[static_cast<std::size_t>(e)].u == a ? edges_[static_cast<std::size_t>(e)].v : edges_[static_cast<std::size_t>(e)].u; }
  int owner(int a) const { return owner_[static_cast<std::size_t>(a)]; }

  void check_budget() {
    if (++nodes_ > kNodeBudget) throw BudgetExceeded("layout trail search budget exhausted");
  }

  // Length first, then closed before open, then the least block sequence.
  static bool better(const Trail& a, const Trail& b, bool shorter) {
    if (b.edges.empty()) return true;
    if (a.blocks.size() != b.blocks.size()) return shorter ? a.blocks.size() < b.blocks.size() : a.blocks.size() > b.blocks.size();
    const bool ca = a.start == a.end, cb = b.start == b.end;
    if (ca != cb) return ca;
    return a.blocks < b.blocks;
  }

  // Shortest trail of unused connecting blocks that visits every independent
  // block and ends in the block it started from.
  std::optional<Trail> shortest_covering_trail() {
    Trail best, cur;
    std::vector<int> visits(indep_.size(), 0);
    std::size_t distinct = 0;
    std::function<void(int)> dfs = [&](int a) {
      check_budget();
      if (!best.edges.empty() && cur.blocks.size() > best.blocks.size()) return;
      if (!cur.edges.empty() && distinct == indep_.size() && owner(a) == owner(cur.start)) {
        Trail t = cur;
        t.end = a;
        if (better(t, best, true)) best = t;
        return;
      }
      if (!best.edges.empty() && cur.blocks.size() + (indep_.size() - distinct) > best.blocks.size()) return;
      for (int e : at_atom_[static_cast<std::size_t>(a)]) {
        if (used_[static_cast<std::size_t>(e)]) continue;
        const int b = other_end(e, a);
        used_[static_cast<std::size_t>(e)] = 1;
        cur.edges.push_back(e);
        cur.blocks.push_back(edges_[static_cast<std::size_t>(e)].block);
        if (visits[static_cast<std::size_t>(owner(b))]++ == 0) ++distinct;
        dfs(b);
        if (--visits[static_cast<std::size_t>(owner(b))] == 0) --distinct;
        cur.blocks.pop_back();
        cur.edges.pop_back();
        used_[static_cast<std::size_t>(e)] = 0;
      }
    };
    for (int a = 0; a < static_cast<int>(h_.vertex_count()); ++a) {
      if (owner(a) < 0) continue;
      cur = Trail{};
      cur.start = a;
      std::fill(visits.begin(), visits.end(), 0);
      visits[static_cast<std::size_t>(owner(a))] = 1;
      distinct = 1;
      dfs(a);
    }
    if (best.edges.empty()) return std::nullopt;
    return best;
  }

  // Longest trail of unused connecting blocks that ends in its starting
  // independent block, cut at the first return there.
  std::optional<Trail> longest_return_trail() {
    Trail best, cur;
    std::function<void(int)> dfs = [&](int a) {
      check_budget();
      if (!cur.edges.empty() && owner(a) == owner(cur.start)) {
        Trail t = cur;
        t.end = a;
        if (better(t, best, false)) best = t;
        return;
      }
      for (int e : at_atom_[static_cast<std::size_t>(a)]) {
        if (used_[static_cast<std::size_t>(e)]) continue;
        used_[static_cast<std::size_t>(e)] = 1;
        cur.edges.push_back(e);
        cur.blocks.push_back(edges_[static_cast<std::size_t>(e)].block);
        dfs(other_end(e, a));
        cur.blocks.pop_back();
        cur.edges.pop_back();
        used_[static_cast<std::size_t>(e)] = 0;
      }
    };
    for (int a = 0; a < static_cast<int>(h_.vertex_count()); ++a) {
      if (owner(a) < 0) continue;
      cur = Trail{};
      cur.start = a;
      dfs(a);
    }
    if (best.edges.empty()) return std::nullopt;
    return best;
  }

  LevelPath to_path(const Trail& t) const {
    LevelPath p;
    int a = t.start;
    for (int e : t.edges) {
      const Edge& ed = edges_[static_cast<std::size_t>(e)];
      const int b = other_end(e, a);
      p.blocks.push_back(ed.block);
      p.atoms.push_back({a, ed.free, b});
      a = b;
    }
    p.closed = t.start == t.end;
    return p;
  }

  void mark(const Trail& t) {
    for (int e : t.edges) used_[static_cast<std::size_t>(e)] = 1;
  }

  // Remaining blocks as maximal chains, consecutive blocks sharing an atom
  // of an independent block.
  std::vector<LevelPath> sequences(std::vector<char> taken) const {
    std::vector<LevelPath> out;
    const auto free_blocks_at = [&](int a) {
      std::vector<int> r;
      for (int c : h_.incidence()[static_cast<std::size_t>(a)])
        if (!taken[static_cast<std::size_t>(c)]) r.push_back(c);
      return r;
    };
    // Exit of block b other than `entry`: an atom of an independent block
    // shared with an untaken block, the lowest such block first.
    const auto pick_exit = [&](int b, int entry, int& next) {
      int best_atom = -1;
      next = -1;
      for (int a : pb_[static_cast<std::size_t>(b)]) {
        if (a == entry || owner(a) < 0) continue;
        for (int c : free_blocks_at(a))
          if (next < 0 || c < next) {
            next = c;
            best_atom = a;
          }
      }
      return best_atom;
    };
    for (;;) {
      int start = -1;
      std::size_t fewest = 0;
      for (std::size_t b = 0; b < pb_.size(); ++b) {
        if (taken[b]) continue;
        std::set<int> nb;
        for (int a : pb_[b])
          if (owner(a) >= 0)
            for (int c : free_blocks_at(a))
            if (c != static_cast<int>(b)) nb.insert(c);
        if (start < 0 || nb.size() < fewest) {
          start = static_cast<int>(b);
          fewest = nb.size();
        }
      }
      if (start < 0) break;
      taken[static_cast<std::size_t>(start)] = 1;
      LevelPath p;
      int next = -1;
      int exit = pick_exit(start, -1, next);
      // Entry of the first block: another atom, independent ones first.
      int entry = -1;
      for (int pass = 0; pass < 2 && entry < 0; ++pass)
        for (int a : pb_[static_cast<std::size_t>(start)])
          if (a != exit && (pass == 0) == (owner(a) >= 0)) {
            entry = a;
            break;
          }
      const int first_entry = entry;
      int b = start;
      for (;;) {
        if (exit < 0) {
          // Chain ends here; close it when the last block touches the
          // first entry atom.
          const auto& at = pb_[static_cast<std::size_t>(b)];
          const bool touches = p.blocks.size() >= 2 && entry != first_entry &&
                               std::find(at.begin(), at.end(), first_entry) != at.end();
          exit = touches ? first_entry : -1;
          if (exit < 0)
            for (int pass = 0; pass < 2 && exit < 0; ++pass)
              for (int a : at)
                if (a != entry && (pass == 0) == (owner(a) >= 0)) {
                  exit = a;
                  break;
                }
          p.closed = touches;
        }
        int middle = -1;
        for (int a : pb_[static_cast<std::size_t>(b)])
          if (a != entry && a != exit) middle = a;
        p.blocks.push_back(b);
        p.atoms.push_back({entry, middle, exit});
        if (next < 0) break;
        b = next;
        taken[static_cast<std::size_t>(b)] = 1;
        entry = exit;
        exit = pick_exit(b, entry, next);
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  // Drawing order of independent blocks, their atom slots, and free atoms.
  void arrange(LayoutPlan& plan) const {
    const std::size_t k = indep_.size();
    std::vector<int> order;
    std::vector<char> seen(k, 0);
    const auto visit = [&](int a) {
      const int o = owner(a);
      if (o >= 0 && !seen[static_cast<std::size_t>(o)]) {
        seen[static_cast<std::size_t>(o)] = 1;
        order.push_back(o);
      }
    };
    for (const auto& t : plan.level1.atoms) {
      visit(t[0]);
      visit(t[2]);
    }
    for (std::size_t o = 0; o < k; ++o)
      if (!seen[o]) order.push_back(static_cast<int>(o));

    std::vector<std::array<int, 3>> slots(k, {-1, -1, -1});
    std::vector<char> placed(h_.vertex_count(), 0);
    const auto put = [&](int a, int slot) {
      const int o = owner(a);
      if (o < 0 || placed[static_cast<std::size_t>(a)]) return;
      auto& s = slots[static_cast<std::size_t>(o)];
      if (s[static_cast<std::size_t>(slot)] >= 0) return;
      s[static_cast<std::size_t>(slot)] = a;
      placed[static_cast<std::size_t>(a)] = 1;
    };
    for (const auto& t : plan.level1.atoms) {
      put(t[0], 0);
      put(t[2], 0);
    }
    for (const auto& p : plan.level2)
      for (const auto& t : p.atoms) {
        put(t[0], 1);
        put(t[2], 1);
      }
    for (std::size_t o = 0; o < k; ++o)
      for (int a : pb_[static_cast<std::size_t>(indep_[o])])
        for (int slot = 0; slot < 3; ++slot) {
          if (placed[static_cast<std::size_t>(a)]) break;
          put(a, slot);
        }

    plan.independent_blocks.clear();
    plan.slots.clear();
    for (int o : order) {
      plan.independent_blocks.push_back(indep_[static_cast<std::size_t>(o)]);
      plan.slots.push_back(slots[static_cast<std::size_t>(o)]);
    }

    std::vector<char> listed(h_.vertex_count(), 0);
    const auto add_free = [&](int a) {
      if (a >= 0 && owner(a) < 0 && !listed[static_cast<std::size_t>(a)]) {
        listed[static_cast<std::size_t>(a)] = 1;
        plan.free_atoms.push_back(a);
      }
    };
    std::vector<const LevelPath*> paths{&plan.level1};
    for (const auto& p : plan.level2) paths.push_back(&p);
    for (const auto& p : plan.level3) paths.push_back(&p);
    for (const auto* p : paths)
      for (const auto& t : p->atoms) add_free(t[1]);
    for (const auto* p : paths)
      for (const auto& t : p->atoms)
        for (int a : t) add_free(a);
    for (int a = 0; a < static_cast<int>(h_.vertex_count()); ++a) add_free(a);
  }

  static constexpr std::uint64_t kNodeBudget = 50'000'000;

  const MmpHypergraph& h_;
  Blocks pb_;
  std::vector<int> indep_;
  std::vector<int> owner_;  // atom -> index into indep_, or -1 for free atoms
  std::vector<char> in_set_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> at_atom_;
  std::vector<char> used_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

LayoutPlan build_levels(const MmpHypergraph& h, const std::vector<int>& independent) {
  return LevelBuilder(h, independent).build();
}

// Every maximum set is tried; the one with the shortest first level wins,
// closed before open, ties going to the earlier set.
LayoutPlan plan_layout(const MmpHypergraph& h) {
  const auto sets = find_independent_sets(h);
  std::optional<LayoutPlan> best;
  std::size_t chosen = 0;
  const auto rank = [](const LayoutPlan& p) {
    const bool none = p.level1.blocks.empty();
    return std::make_tuple(none, p.level1.blocks.size(), !p.level1.closed);
  };
  for (std::size_t i = 0; i < sets.size(); ++i) {
    LayoutPlan p = build_levels(h, sets[i]);
    if (!best || rank(p) < rank(*best)) {
      best = std::move(p);
      chosen = i;
    }
  }
  if (sets.size() > 1)
    best->diagnostics.push_back(std::to_string(sets.size()) + " maximum independent sets; set " + std::to_string(chosen + 1) +
                                " gives the shortest first level");
  return *best;
}

nlohmann::json to_json(const MmpHypergraph& h, const LayoutPlan& plan) {
  const auto label = [&](int a) { return a < 0 ? std::string() : vertex_label(h.vertices()[static_cast<std::size_t>(a)]); };
  const auto path_json = [&](const LevelPath& p) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& t : p.atoms) atoms.push_back(label(t[0]) + label(t[1]) + label(t[2]));
    return nlohmann::json{{"blocks", p.blocks}, {"atoms", atoms}, {"closed", p.closed}};
  };
  nlohmann::json j;
  j["independent_blocks"] = plan.independent_blocks;
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : plan.slots) slots.push_back(label(s[0]) + label(s[1]) + label(s[2]));
  j["independent_atoms"] = slots;
  nlohmann::json fa = nlohmann::json::array();
  for (int a : plan.free_atoms) fa.push_back(label(a));
  j["free_atoms"] = fa;
  j["level1"] = plan.level1.blocks.empty() ? nlohmann::json(nullptr) : path_json(plan.level1);
  j["level2"] = nlohmann::json::array();
  for (const auto& p : plan.level2) j["level2"].push_back(path_json(p));
  j["level3"] = nlohmann::json::array();
  for (const auto& p : plan.level3) j["level3"].push_back(path_json(p));
  j["diagnostics"] = plan.diagnostics;
  return j;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Pt {
  double x, y;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '&') r += "&amp;";
    else if (c == '<') r += "&lt;";
    else if (c == '>') r += "&gt;";
    else r += c;
  }
  return r;
}

}  // namespace

std::vector<std::string> render_svg(const MmpHypergraph& h, const LayoutPlan& plan, const SvgStyle& style) {
  const double S = style.size, c = S / 2;
  constexpr double kPi = 3.14159265358979323846;
  std::vector<Pt> pos(h.vertex_count(), Pt{c, c});
  const std::size_t k = plan.independent_blocks.size();
  const double radii[3] = {0.45 * S, 0.36 * S, 0.27 * S};
  for (std::size_t i = 0; i < k; ++i) {
    const double t = -kPi / 2 + 2 * kPi * static_cast<double>(i) / static_cast<double>(k);
    for (int s = 0; s < 3; ++s) {
      const int a = plan.slots[i][static_cast<std::size_t>(s)];
      if (a >= 0) pos[static_cast<std::size_t>(a)] = {c + radii[s] * std::cos(t), c + radii[s] * std::sin(t)};
    }
  }
  const std::size_t m = plan.free_atoms.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double t = -kPi / 2 + 2 * kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    pos[static_cast<std::size_t>(plan.free_atoms[j])] = {c + 0.16 * S * std::cos(t), c + 0.16 * S * std::sin(t)};
  }

  const auto open = [&]() {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(S) +
           "\" height=\"" + num(S) + "\" viewBox=\"0 0 " + num(S) + " " + num(S) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  };
  // Smooth curve through three points (passes p1 at its midpoint).
  const auto curve = [&](const std::array<int, 3>& t, const char* colour) {
    const Pt p0 = pos[static_cast<std::size_t>(t[0])], p1 = pos[static_cast<std::size_t>(t[1])], p2 = pos[static_cast<std::size_t>(t[2])];
    const Pt q{2 * p1.x - (p0.x + p2.x) / 2, 2 * p1.y - (p0.y + p2.y) / 2};
    return "<path d=\"M " + num(p0.x) + " " + num(p0.y) + " Q " + num(q.x) + " " + num(q.y) + " " + num(p2.x) + " " + num(p2.y) +
           "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
  };
  const auto independent = [&]() {
    std::string s;
    for (const auto& sl : plan.slots) {
      std::string pts;
      for (int a : sl) {
        if (a < 0) continue;
        pts += (pts.empty() ? "" : " ") + num(pos[static_cast<std::size_t>(a)].x) + "," + num(pos[static_cast<std::size_t>(a)].y);
      }
      s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>\n";
    }
    return s;
  };
  const auto atoms = [&](const std::vector<char>& shown) {
    std::string s;
    for (std::size_t a = 0; a < pos.size(); ++a) {
      if (!shown[a]) continue;
      s += "<circle cx=\"" + num(pos[a].x) + "\" cy=\"" + num(pos[a].y) + "\" r=\"4\" fill=\"white\" stroke=\"black\"/>\n";
      if (style.labels)
        s += "<text x=\"" + num(pos[a].x + 6) + "\" y=\"" + num(pos[a].y - 6) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
             escape(vertex_label(h.vertices()[a])) + "</text>\n";
    }
    return s;
  };

  const char* colours[3] = {"#c0392b", "#2471a3", "#229954"};
  std::vector<std::vector<const LevelPath*>> levels(3);
  if (!plan.level1.blocks.empty()) levels[0].push_back(&plan.level1);
  for (const auto& p : plan.level2) levels[1].push_back(&p);
  for (const auto& p : plan.level3) levels[2].push_back(&p);

  std::vector<std::string> docs;
  std::vector<char> all(pos.size(), 1);
  std::string combined = open() + independent();
  for (int l = 0; l < 3; ++l)
    for (const auto* p : levels[static_cast<std::size_t>(l)])
      for (const auto& t : p->atoms) combined += curve(t, colours[l]);
  docs.push_back(combined + atoms(all) + "</svg>\n");

  for (int l = 0; l < 3; ++l) {
    if (levels[static_cast<std::size_t>(l)].empty()) continue;
    std::vector<char> shown(pos.size(), 0);
    for (const auto& sl : plan.slots)
      for (int a : sl)
        if (a >= 0) shown[static_cast<std::size_t>(a)] = 1;
    std::string doc = open() + independent();
    for (const auto* p : levels[static_cast<std::size_t>(l)])
      for (const auto& t : p->atoms) {
        doc += curve(t, colours[l]);
        for (int a : t) shown[static_cast<std::size_t>(a)] = 1;
      }
    docs.push_back(doc + atoms(shown) + "</svg>\n");
  }
  return docs;
}

}  // namespace omlkit
