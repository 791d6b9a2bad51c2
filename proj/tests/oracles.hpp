#pragma once

// Independent reference implementations for the test suites. Everything
// here is deliberately naive: no pruning, no interning, no shared code with
// the search routines it checks beyond the data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "omlkit/equations.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/mmp.hpp"

namespace oracle {

using omlkit::Oml;

// ---------------------------------------------------------------------------
// Lattice order straight from the blocks: atoms are incomparable, an atom
// sits below a coatom j' when it shares a block with j.

struct Order {
  int n = 0;  // atoms
  std::vector<std::vector<char>> leq;
};

inline Order pasted_order(const omlkit::MmpHypergraph& h) {
  Order o;
  o.n = static_cast<int>(h.vertex_count());
  const int size = 2 + 2 * o.n;
  o.leq.assign(static_cast<std::size_t>(size), std::vector<char>(static_cast<std::size_t>(size), 0));
  std::vector<std::vector<char>> perp(static_cast<std::size_t>(o.n), std::vector<char>(static_cast<std::size_t>(o.n), 0));
  for (const auto& b : h.position_blocks())
    for (int x : b)
      for (int y : b)
        if (x != y) perp[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;
  const auto atom = [&](int i) { return 2 + i; };
  const auto coatom = [&](int i) { return 2 + o.n + i; };
  for (int x = 0; x < size; ++x) {
    o.leq[0][static_cast<std::size_t>(x)] = 1;
    o.leq[static_cast<std::size_t>(x)][1] = 1;
    o.leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = 1;
  }
  for (int i = 0; i < o.n; ++i)
    for (int j = 0; j < o.n; ++j)
      if (perp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) o.leq[static_cast<std::size_t>(atom(i))][static_cast<std::size_t>(coatom(j))] = 1;
  return o;
}

/// Greatest lower bound by scanning, or -1 when there is none.
inline int glb(const Order& o, int x, int y) {
  const int size = static_cast<int>(o.leq.size());
  int best = -1;
  for (int z = 0; z < size; ++z) {
    if (!o.leq[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)] || !o.leq[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)]) continue;
    bool all_below = true;
    for (int w = 0; w < size && all_below; ++w)
      if (o.leq[static_cast<std::size_t>(w)][static_cast<std::size_t>(x)] && o.leq[static_cast<std::size_t>(w)][static_cast<std::size_t>(y)] &&
          !o.leq[static_cast<std::size_t>(w)][static_cast<std::size_t>(z)])
        all_below = false;
    if (all_below) best = z;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Condition evaluation over every tuple.

class NaiveEvaluator {
 public:
  explicit NaiveEvaluator(const Oml& L) : L_(L) {}

  bool holds(const omlkit::Condition& c) {
    std::map<std::string, int> env;
    return quantify(c, 0, env);
  }

  /// Hypotheses imply the conclusion under a complete assignment.
  bool instance(const omlkit::Condition& c, const std::map<std::string, int>& env) const {
    for (const auto& h : c.hypotheses)
      if (!formula(h, env)) return true;
    return formula(c.conclusion, env);
  }

  int value(const omlkit::TermPtr& t, const std::map<std::string, int>& env) const { return term(*t, env); }

 private:
  int term(const omlkit::Term& t, const std::map<std::string, int>& env) const {
    using omlkit::TermOp;
    switch (t.op) {
      case TermOp::Variable: return env.at(t.name);
      case TermOp::Zero: return L_.zero();
      case TermOp::One: return L_.one();
      case TermOp::Ortho: return L_.ortho(term(*t.args[0], env));
      case TermOp::Meet: return L_.meet(term(*t.args[0], env), term(*t.args[1], env));
      case TermOp::Join: return L_.join(term(*t.args[0], env), term(*t.args[1], env));
      case TermOp::Sasaki: {
        const int a = term(*t.args[0], env), b = term(*t.args[1], env);
        return L_.join(L_.ortho(a), L_.meet(a, b));
      }
      default: {
        const auto e = omlkit::expand(std::make_shared<omlkit::Term>(t));
        return term(*e, env);
      }
    }
  }

  bool formula(const omlkit::Formula& f, const std::map<std::string, int>& env) const {
    using K = omlkit::Formula::Kind;
    switch (f.kind) {
      case K::Rel: {
        const int a = term(*f.rel.lhs, env), b = term(*f.rel.rhs, env);
        switch (f.rel.kind) {
          case omlkit::RelationKind::Leq: return L_.leq(a, b);
          case omlkit::RelationKind::Eq: return a == b;
          case omlkit::RelationKind::Perp: return L_.leq(a, L_.ortho(b));
        }
        return false;
      }
      case K::Not: return !formula(f.args[0], env);
      case K::And:
        for (const auto& g : f.args)
          if (!formula(g, env)) return false;
        return true;
      case K::Or:
        for (const auto& g : f.args)
          if (formula(g, env)) return true;
        return false;
      case K::Implies: return !formula(f.args[0], env) || formula(f.args[1], env);
    }
    return false;
  }

  bool quantify(const omlkit::Condition& c, std::size_t i, std::map<std::string, int>& env) {
    if (i == c.variables.size()) {
      for (const auto& h : c.hypotheses)
        if (!formula(h, env)) return true;
      return formula(c.conclusion, env);
    }
    const auto& v = c.variables[i];
    const bool forall = v.quantifier == omlkit::Quantifier::Forall;
    for (int x = 0; x < L_.size(); ++x) {
      if (v.sort == omlkit::Sort::Atom && !L_.is_atom(x)) continue;
      env[v.name] = x;
      const bool r = quantify(c, i + 1, env);
      if (forall && !r) return false;
      if (!forall && r) return true;
    }
    return forall;
  }

  const Oml& L_;
};

// ---------------------------------------------------------------------------
// Cubic bipartite graphs by exhaustive enumeration.
//
// Rows are white vertices (3-subsets of blacks). Every graph has a doubly
// lexicographic form (rows and columns in nonincreasing order), so
// enumerating rows in nonincreasing order and filtering on columns
// reaches every class; classes are then told apart by trying every black
// permutation.

using Matrix = std::vector<std::vector<int>>;  // rows: sorted black indices

inline int bip_girth(const Matrix& m, int W) {
  const int n = 2 * W;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int w = 0; w < W; ++w)
    for (int b : m[static_cast<std::size_t>(w)]) {
      adj[static_cast<std::size_t>(w)].push_back(W + b);
      adj[static_cast<std::size_t>(W + b)].push_back(w);
    }
  int best = 1 << 30;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1), par(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          par[static_cast<std::size_t>(v)] = u;
          q.push(v);
        } else if (par[static_cast<std::size_t>(u)] != v) {
          best = std::min(best, dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(v)] + 1);
        }
      }
    }
  }
  return best;
}

inline bool bip_connected(const Matrix& m, int W) {
  std::vector<int> parent(static_cast<std::size_t>(2 * W));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
  for (int w = 0; w < W; ++w)
    for (int b : m[static_cast<std::size_t>(w)]) parent[static_cast<std::size_t>(find(w))] = find(W + b);
  for (int x = 0; x < 2 * W; ++x)
    if (find(x) != find(0)) return false;
  return true;
}

inline Matrix transpose(const Matrix& m, int W) {
  Matrix t(static_cast<std::size_t>(W));
  for (int w = 0; w < W; ++w)
    for (int b : m[static_cast<std::size_t>(w)]) t[static_cast<std::size_t>(b)].push_back(w);
  return t;
}

/// Least row-sorted image over all black permutations.
inline Matrix brute_canonical(const Matrix& m, int W) {
  std::vector<int> perm(static_cast<std::size_t>(W));
  std::iota(perm.begin(), perm.end(), 0);
  Matrix best;
  do {
    Matrix r;
    for (const auto& row : m) {
      std::vector<int> x;
      for (int b : row) x.push_back(perm[static_cast<std::size_t>(b)]);
      std::sort(x.begin(), x.end());
      r.push_back(x);
    }
    std::sort(r.begin(), r.end());
    if (best.empty() || r < best) best = r;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct BruteCounts {
  std::size_t colored = 0, uncolored = 0;
};

inline BruteCounts brute_cubic_bipartite(int W, int min_girth) {
  std::vector<std::vector<int>> triples;
  for (int a = 0; a < W; ++a)
    for (int b = a + 1; b < W; ++b)
      for (int c = b + 1; c < W; ++c) triples.push_back({a, b, c});
  std::set<Matrix> colored, uncolored;
  Matrix m;
  std::vector<int> deg(static_cast<std::size_t>(W), 0);
  // Column order check: column j as a bit string over rows must not
  // exceed column j-1 in the order rows were written (row 0 most
  // significant), i.e. columns nonincreasing.
  const auto columns_ok = [&]() {
    for (int j = 1; j < W; ++j) {
      for (std::size_t r = 0; r < m.size(); ++r) {
        const bool a = std::find(m[r].begin(), m[r].end(), j - 1) != m[r].end();
        const bool b = std::find(m[r].begin(), m[r].end(), j) != m[r].end();
        if (a != b) {
          if (b && !a) return false;
          break;
        }
      }
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(m.size()) == W) {
      if (!columns_ok() || !bip_connected(m, W) || bip_girth(m, W) < min_girth) return;
      const Matrix c = brute_canonical(m, W);
      colored.insert(c);
      uncolored.insert(std::min(c, brute_canonical(transpose(m, W), W)));
      return;
    }
    // Rows nonincreasing as bit strings = triples in nondecreasing order.
    for (std::size_t t = from; t < triples.size(); ++t) {
      const auto& tr = triples[t];
      if (std::any_of(tr.begin(), tr.end(), [&](int b) { return deg[static_cast<std::size_t>(b)] >= 3; })) continue;
      for (int b : tr) ++deg[static_cast<std::size_t>(b)];
      m.push_back(tr);
      rec(t);
      m.pop_back();
      for (int b : tr) --deg[static_cast<std::size_t>(b)];
    }
  };
  rec(0);
  return {colored.size(), uncolored.size()};
}

// ---------------------------------------------------------------------------
// Random hypergraphs: connected, 3-atom blocks pairwise sharing at most one
// atom, labels spread over the whole alphabet including '+' prefixes.

inline omlkit::MmpHypergraph random_hypergraph(std::mt19937_64& rng, int max_blocks, int max_label) {
  std::uniform_int_distribution<int> nb(1, max_blocks);
  const int blocks = nb(rng);
  std::vector<std::vector<int>> bl;
  std::vector<int> atoms;
  std::set<std::pair<int, int>> pairs;
  int next = 0;
  std::vector<int> labels(static_cast<std::size_t>(max_label));
  std::iota(labels.begin(), labels.end(), 1);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (int k = 0; k < blocks && next + 3 <= max_label; ++k) {
    std::vector<int> b;
    if (!atoms.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
      b.push_back(atoms[pick(rng)]);
    }
    while (b.size() < 3) b.push_back(labels[static_cast<std::size_t>(next++)]);
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        if (pairs.count({std::min(b[i], b[j]), std::max(b[i], b[j])})) ok = false;
    if (!ok) continue;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) pairs.insert({std::min(b[i], b[j]), std::max(b[i], b[j])});
    for (int x : b)
      if (std::find(atoms.begin(), atoms.end(), x) == atoms.end()) atoms.push_back(x);
    bl.push_back(b);
  }
  std::vector<omlkit::Block> blocks_v;
  for (const auto& b : bl) blocks_v.push_back(omlkit::Block(b.begin(), b.end()));
  return omlkit::MmpHypergraph(blocks_v);
}

}  // namespace oracle
