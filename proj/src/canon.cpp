#include "omlkit/canon.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace omlkit {

namespace {

struct Partition {
  std::vector<int> order;     // vertices, grouped by cell
  std::vector<int> cell;      // vertex -> start index of its cell
  std::vector<int> cell_end;  // cell start -> one past its last index
  int cells = 0;

  bool discrete() const { return cells == static_cast<int>(order.size()); }
};

// Equitable refinement driven by a queue of splitter cells. Cells split by
// the number of neighbours in the splitter, fragments ordered by that count,
// so the result does not depend on vertex names.
class Refiner {
 public:
  explicit Refiner(const ColoredGraph& g)
      : g_(g),
        count_(static_cast<std::size_t>(g.size()), 0),
        queued_(static_cast<std::size_t>(g.size()), 0),
        touched_mark_(static_cast<std::size_t>(g.size()), 0) {}

  void refine(Partition& p, const std::vector<int>& splitters) {
    std::deque<int> queue;
    for (int c : splitters) {
      queue.push_back(c);
      queued_[static_cast<std::size_t>(c)] = 1;
    }
    while (!queue.empty() && !p.discrete()) {
      const int s = queue.front();
      queue.pop_front();
      queued_[static_cast<std::size_t>(s)] = 0;
      const int s_end = p.cell_end[static_cast<std::size_t>(s)];
      touched_cells_.clear();
      touched_vertices_.clear();
      for (int i = s; i < s_end; ++i) {
        const int x = p.order[static_cast<std::size_t>(i)];
        for (int v : g_.adj[static_cast<std::size_t>(x)]) {
          if (count_[static_cast<std::size_t>(v)]++ == 0) touched_vertices_.push_back(v);
          const int c = p.cell[static_cast<std::size_t>(v)];
          if (!touched_mark_[static_cast<std::size_t>(c)]) {
            touched_mark_[static_cast<std::size_t>(c)] = 1;
            touched_cells_.push_back(c);
          }
        }
      }
      std::sort(touched_cells_.begin(), touched_cells_.end());
      for (int c : touched_cells_) {
        touched_mark_[static_cast<std::size_t>(c)] = 0;
        const int c_end = p.cell_end[static_cast<std::size_t>(c)];
        if (c_end - c == 1) continue;
        auto first = p.order.begin() + c, last = p.order.begin() + c_end;
        std::sort(first, last, [&](int a, int b) {
          return count_[static_cast<std::size_t>(a)] < count_[static_cast<std::size_t>(b)];
        });
        if (count_[static_cast<std::size_t>(*first)] == count_[static_cast<std::size_t>(*(last - 1))]) continue;
        // Fragments.
        fragments_.clear();
        int fstart = c;
        for (int i = c + 1; i <= c_end; ++i) {
          if (i == c_end || count_[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i)])] !=
                                count_[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i - 1)])]) {
            fragments_.emplace_back(fstart, i);
            fstart = i;
          }
        }
        for (auto [a, b] : fragments_) {
          p.cell_end[static_cast<std::size_t>(a)] = b;
          for (int i = a; i < b; ++i) p.cell[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i)])] = a;
        }
        p.cells += static_cast<int>(fragments_.size()) - 1;
        if (queued_[static_cast<std::size_t>(c)]) {
          for (auto [a, b] : fragments_)
            if (a != c) {
              queue.push_back(a);
              queued_[static_cast<std::size_t>(a)] = 1;
            }
        } else {
          std::size_t largest = 0;
          for (std::size_t k = 1; k < fragments_.size(); ++k)
            if (fragments_[k].second - fragments_[k].first >
                fragments_[largest].second - fragments_[largest].first)
              largest = k;
          for (std::size_t k = 0; k < fragments_.size(); ++k)
            if (k != largest) {
              queue.push_back(fragments_[k].first);
              queued_[static_cast<std::size_t>(fragments_[k].first)] = 1;
            }
        }
      }
      for (int v : touched_vertices_) count_[static_cast<std::size_t>(v)] = 0;
    }
    for (int c : queue) queued_[static_cast<std::size_t>(c)] = 0;
  }

 private:
  const ColoredGraph& g_;
  std::vector<int> count_;
  std::vector<char> queued_;
  std::vector<char> touched_mark_;
  std::vector<int> touched_cells_;
  std::vector<int> touched_vertices_;
  std::vector<std::pair<int, int>> fragments_;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent_[static_cast<std::size_t>(b)] = a;
    else
      parent_[static_cast<std::size_t>(a)] = b;
  }

 private:
  std::vector<int> parent_;
};

void put16(std::string& out, int x) {
  out.push_back(static_cast<char>((x >> 8) & 0xff));
  out.push_back(static_cast<char>(x & 0xff));
}

void put32(std::string& out, int x) {
  put16(out, (x >> 16) & 0xffff);
  put16(out, x & 0xffff);
}

class Search {
 public:
  explicit Search(const ColoredGraph& g) : g_(g), refiner_(g), n_(g.size()) {}

  CanonicalLabeling run() {
    Partition p;
    p.order.resize(static_cast<std::size_t>(n_));
    std::iota(p.order.begin(), p.order.end(), 0);
    std::stable_sort(p.order.begin(), p.order.end(), [&](int a, int b) {
      return g_.color[static_cast<std::size_t>(a)] < g_.color[static_cast<std::size_t>(b)];
    });
    p.cell.assign(static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i) {
      const int v = p.order[static_cast<std::size_t>(i)];
      if (i > 0 && g_.color[static_cast<std::size_t>(v)] ==
                       g_.color[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i - 1)])])
        p.cell[static_cast<std::size_t>(v)] = p.cell[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i - 1)])];
      else
        p.cell[static_cast<std::size_t>(v)] = i;
    }
    p.cells = 0;
    p.cell_end.assign(static_cast<std::size_t>(n_), 0);
    std::vector<int> splitters;
    for (int i = n_ - 1; i >= 0; --i) {
      const int c = p.cell[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i)])];
      if (c == i) {
        ++p.cells;
        splitters.push_back(c);
      }
      if (i == n_ - 1 || p.cell[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i + 1)])] != c)
        p.cell_end[static_cast<std::size_t>(c)] = i + 1;
    }
    std::reverse(splitters.begin(), splitters.end());
    if (n_ > 0) refiner_.refine(p, splitters);

    // Header: size and colour values in canonical order (identical for all
    // leaves, since cells never cross colour classes).
    put32(header_, n_);
    for (int v : p.order) put32(header_, g_.color[static_cast<std::size_t>(v)]);

    std::vector<int> path;
    if (n_ > 0) dfs(p, path);

    CanonicalLabeling out;
    out.position = best_pos_;
    out.certificate = header_ + best_cert_;
    out.generators = std::move(generators_);
    if (n_ == 0) out.certificate = header_;
    return out;
  }

 private:
  // Returns the depth the search should unwind to (a value below the current
  // depth aborts this subtree).
  int dfs(Partition& p, std::vector<int>& path) {
    const int depth = static_cast<int>(path.size());
    if (p.discrete()) return leaf(p, path);

    // First non-singleton cell.
    int start = 0;
    while (p.cell[static_cast<std::size_t>(p.order[static_cast<std::size_t>(start + 1)])] != start) ++start;
    const int end = p.cell_end[static_cast<std::size_t>(start)];
    std::vector<int> members(p.order.begin() + start, p.order.begin() + end);
    std::sort(members.begin(), members.end());

    std::vector<int> explored;
    std::size_t gens_seen = static_cast<std::size_t>(-1);
    std::vector<int> rep;
    for (int w : members) {
      if (!explored.empty()) {
        if (gens_seen != generators_.size()) {
          rep = stabilizer_orbits(path);
          gens_seen = generators_.size();
        }
        bool equivalent = false;
        for (int e : explored)
          if (rep[static_cast<std::size_t>(e)] == rep[static_cast<std::size_t>(w)]) {
            equivalent = true;
            break;
          }
        if (equivalent) continue;
      }
      explored.push_back(w);

      Partition child = p;
      // Individualize w: it takes the cell's first slot.
      auto it = std::find(child.order.begin() + start, child.order.begin() + end, w);
      std::iter_swap(child.order.begin() + start, it);
      for (int i = start + 1; i < end; ++i) child.cell[static_cast<std::size_t>(child.order[static_cast<std::size_t>(i)])] = start + 1;
      child.cell[static_cast<std::size_t>(w)] = start;
      child.cell_end[static_cast<std::size_t>(start)] = start + 1;
      child.cell_end[static_cast<std::size_t>(start + 1)] = end;
      ++child.cells;
      refiner_.refine(child, {start});
      path.push_back(w);
      const int back = dfs(child, path);
      path.pop_back();
      if (back < depth) return back;
    }
    return depth;
  }

  int leaf(const Partition& p, const std::vector<int>& path) {
    std::vector<int> pos(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) pos[static_cast<std::size_t>(p.order[static_cast<std::size_t>(i)])] = i;
    std::string cert = certificate(pos);
    const int depth = static_cast<int>(path.size());

    if (first_path_.empty() && best_pos_.empty()) {
      first_pos_ = pos;
      first_cert_ = cert;
      first_path_ = path;
      best_pos_ = pos;
      best_cert_ = std::move(cert);
      best_path_ = path;
      return depth;
    }
    if (cert == first_cert_) {
      add_automorphism(first_pos_, pos);
      return common_prefix(path, first_path_);
    }
    if (cert == best_cert_) {
      add_automorphism(best_pos_, pos);
      return common_prefix(path, best_path_);
    }
    if (cert < best_cert_) {
      best_pos_ = pos;
      best_cert_ = std::move(cert);
      best_path_ = path;
    }
    return depth;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return static_cast<int>(k);
  }

  // gamma(v) = u with target_pos[u] == pos[v].
  void add_automorphism(const std::vector<int>& target_pos, const std::vector<int>& pos) {
    std::vector<int> inv(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) inv[static_cast<std::size_t>(target_pos[static_cast<std::size_t>(u)])] = u;
    std::vector<int> gamma(static_cast<std::size_t>(n_));
    bool identity = true;
    for (int v = 0; v < n_; ++v) {
      gamma[static_cast<std::size_t>(v)] = inv[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])];
      if (gamma[static_cast<std::size_t>(v)] != v) identity = false;
    }
    if (!identity) generators_.push_back(std::move(gamma));
  }

  std::vector<int> stabilizer_orbits(const std::vector<int>& path) {
    UnionFind uf(n_);
    for (const auto& gamma : generators_) {
      bool fixes = true;
      for (int v : path)
        if (gamma[static_cast<std::size_t>(v)] != v) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      for (int v = 0; v < n_; ++v) uf.unite(v, gamma[static_cast<std::size_t>(v)]);
    }
    std::vector<int> rep(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) rep[static_cast<std::size_t>(v)] = uf.find(v);
    return rep;
  }

  std::string certificate(const std::vector<int>& pos) const {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n_; ++v)
      for (int w : g_.adj[static_cast<std::size_t>(v)]) {
        const int a = pos[static_cast<std::size_t>(v)], b = pos[static_cast<std::size_t>(w)];
        if (a <= b) edges.emplace_back(a, b);
      }
    std::sort(edges.begin(), edges.end());
    std::string out;
    out.reserve(edges.size() * 4 + 4);
    put32(out, static_cast<int>(edges.size()));
    for (auto [a, b] : edges) {
      put16(out, a);
      put16(out, b);
    }
    return out;
  }

  const ColoredGraph& g_;
  Refiner refiner_;
  int n_;
  std::string header_;
  std::vector<int> first_pos_, best_pos_;
  std::string first_cert_, best_cert_;
  std::vector<int> first_path_, best_path_;
  std::vector<std::vector<int>> generators_;
};

}  // namespace

CanonicalLabeling canonical_labeling(const ColoredGraph& g) {
  Search s(g);
  return s.run();
}

std::vector<int> orbit_representatives(const std::vector<std::vector<int>>& generators, int n) {
  UnionFind uf(n);
  for (const auto& gamma : generators)
    for (int v = 0; v < n; ++v) uf.unite(v, gamma[static_cast<std::size_t>(v)]);
  std::vector<int> rep(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) rep[static_cast<std::size_t>(v)] = uf.find(v);
  return rep;
}

}  // namespace omlkit

namespace omlkit {

std::string tree_reduced_certificate(const ColoredGraph& g) {
  const int n = g.size();
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) deg[static_cast<std::size_t>(v)] = static_cast<int>(g.adj[static_cast<std::size_t>(v)].size());
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<std::string>> hanging(static_cast<std::size_t>(n));
  std::vector<std::string> type(static_cast<std::size_t>(n));

  auto describe = [&](int v) {
    auto& kids = hanging[static_cast<std::size_t>(v)];
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + std::to_string(g.color[static_cast<std::size_t>(v)]);
    for (const auto& k : kids) s += k;
    s += ")";
    return s;
  };

  // Rounds: every degree-1 vertex whose neighbour has degree >= 2 at the
  // start of the round is folded into that neighbour.
  while (true) {
    std::vector<std::pair<int, int>> strip;
    for (int v = 0; v < n; ++v) {
      if (removed[static_cast<std::size_t>(v)] || deg[static_cast<std::size_t>(v)] != 1) continue;
      int p = -1;
      for (int w : g.adj[static_cast<std::size_t>(v)])
        if (!removed[static_cast<std::size_t>(w)]) p = w;
      if (deg[static_cast<std::size_t>(p)] >= 2) strip.emplace_back(v, p);
    }
    if (strip.empty()) break;
    for (auto [v, p] : strip) type[static_cast<std::size_t>(v)] = describe(v);
    for (auto [v, p] : strip) {
      removed[static_cast<std::size_t>(v)] = 1;
      --deg[static_cast<std::size_t>(p)];
      hanging[static_cast<std::size_t>(p)].push_back(type[static_cast<std::size_t>(v)]);
    }
  }

  std::vector<int> keep;
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (!removed[static_cast<std::size_t>(v)]) {
      index[static_cast<std::size_t>(v)] = static_cast<int>(keep.size());
      keep.push_back(v);
    }
  std::vector<std::string> labels;
  for (int v : keep) labels.push_back(describe(v));
  std::vector<std::string> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  ColoredGraph core;
  core.adj.resize(keep.size());
  core.color.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int v = keep[i];
    core.color[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
    for (int w : g.adj[static_cast<std::size_t>(v)])
      if (!removed[static_cast<std::size_t>(w)]) core.adj[i].push_back(index[static_cast<std::size_t>(w)]);
  }
  std::string out;
  for (const auto& d : distinct) {
    out += d;
    out.push_back(';');
  }
  out.push_back('|');
  out += canonical_labeling(core).certificate;
  return out;
}

}  // namespace omlkit
