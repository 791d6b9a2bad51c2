#include "omlkit/bigraph.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "omlkit/canon.hpp"

namespace omlkit {

std::vector<std::vector<int>> BipartiteGraph::black_adjacency() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(black_count));
  for (int w = 0; w < white_count; ++w)
    for (int b : adjacency[static_cast<std::size_t>(w)]) out[static_cast<std::size_t>(b)].push_back(w);
  return out;
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& row : adjacency) e += row.size();
  return e;
}

bool BipartiteGraph::is_cubic() const {
  for (const auto& row : adjacency)
    if (row.size() != 3) return false;
  for (const auto& row : black_adjacency())
    if (row.size() != 3) return false;
  return true;
}

BipartiteGraph mmp_to_graph(const MmpHypergraph& h) {
  if (!h.is_uniform(3) || !h.is_regular(3))
    throw PreconditionError("graph conversion requires a 3-uniform, 3-regular hypergraph");
  BipartiteGraph g;
  g.white_count = static_cast<int>(h.vertex_count());
  g.black_count = static_cast<int>(h.block_count());
  g.adjacency = h.incidence();
  return g;
}

MmpHypergraph graph_to_mmp(const BipartiteGraph& g, AtomColor atom_color) {
  if (!g.is_cubic()) throw PreconditionError("graph_to_mmp requires a cubic graph");
  const auto rows = atom_color == AtomColor::White ? g.black_adjacency() : g.adjacency;
  std::vector<Block> blocks;
  blocks.reserve(rows.size());
  for (const auto& row : rows) {
    Block b;
    for (int a : row) b.push_back(VertexId{a + 1});
    std::sort(b.begin(), b.end());
    blocks.push_back(std::move(b));
  }
  return MmpHypergraph(std::move(blocks));
}

namespace {

std::vector<std::vector<int>> undirected(const BipartiteGraph& g) {
  const int n = g.white_count + g.black_count;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int w = 0; w < g.white_count; ++w)
    for (int b : g.adjacency[static_cast<std::size_t>(w)]) {
      adj[static_cast<std::size_t>(w)].push_back(g.white_count + b);
      adj[static_cast<std::size_t>(g.white_count + b)].push_back(w);
    }
  return adj;
}

ColoredGraph colored(const BipartiteGraph& g, bool respect_colors) {
  ColoredGraph cg;
  cg.adj = undirected(g);
  cg.color.assign(cg.adj.size(), 0);
  if (respect_colors)
    for (int b = 0; b < g.black_count; ++b) cg.color[static_cast<std::size_t>(g.white_count + b)] = 1;
  return cg;
}

}  // namespace

std::optional<int> girth(const BipartiteGraph& g) {
  const auto adj = undirected(g);
  const int n = static_cast<int>(adj.size());
  int best = -1;
  std::vector<int> dist(static_cast<std::size_t>(n)), parent(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    parent[static_cast<std::size_t>(s)] = -1;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      if (best >= 0 && 2 * dist[static_cast<std::size_t>(v)] + 1 >= best) break;
      bool skipped_parent = false;
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (w == parent[static_cast<std::size_t>(v)] && !skipped_parent) {
          skipped_parent = true;  // a parallel edge would be a 2-cycle
          continue;
        }
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(w)] = v;
          q.push_back(w);
        } else {
          const int len = dist[static_cast<std::size_t>(v)] + dist[static_cast<std::size_t>(w)] + 1;
          if (best < 0 || len < best) best = len;
        }
      }
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::string CanonicalCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

CanonicalCode canonical_code(const BipartiteGraph& g, bool respect_colors) {
  return CanonicalCode{canonical_labeling(colored(g, respect_colors)).certificate};
}

namespace {

ColoredGraph incidence_graph(const std::vector<std::vector<int>>& blocks, int atoms) {
  ColoredGraph cg;
  cg.adj.assign(static_cast<std::size_t>(atoms) + blocks.size(), {});
  cg.color.assign(cg.adj.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int bv = atoms + static_cast<int>(b);
    cg.color[static_cast<std::size_t>(bv)] = 1;
    for (int a : blocks[b]) {
      cg.adj[static_cast<std::size_t>(a)].push_back(bv);
      cg.adj[static_cast<std::size_t>(bv)].push_back(a);
    }
  }
  return cg;
}

}  // namespace

CanonicalCode mmp_canonical_code(const MmpHypergraph& h) {
  return CanonicalCode{
      canonical_labeling(incidence_graph(h.position_blocks(), static_cast<int>(h.vertex_count()))).certificate};
}

bool mmp_isomorphic(const MmpHypergraph& a, const MmpHypergraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.block_count() != b.block_count()) return false;
  return mmp_canonical_code(a) == mmp_canonical_code(b);
}

// ---------------------------------------------------------------------------
// Formats

std::string write_graph(const BipartiteGraph& g) {
  std::ostringstream out;
  out << g.white_count << ' ' << g.black_count << '\n';
  for (const auto& row : g.adjacency) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
  return out.str();
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

std::optional<BipartiteGraph> read_one(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) return std::nullopt;
  std::istringstream header(line);
  BipartiteGraph g;
  if (!(header >> g.white_count >> g.black_count) || g.white_count < 0 || g.black_count < 0)
    throw ParseError("graph header must be 'white black'", 0);
  g.adjacency.resize(static_cast<std::size_t>(g.white_count));
  for (int w = 0; w < g.white_count; ++w) {
    if (!std::getline(in, line)) throw ParseError("missing adjacency line for white vertex " + std::to_string(w), 0);
    std::istringstream row(line);
    int b;
    while (row >> b) {
      if (b < 0 || b >= g.black_count) throw ParseError("black index out of range", 0);
      g.adjacency[static_cast<std::size_t>(w)].push_back(b);
    }
    auto& r = g.adjacency[static_cast<std::size_t>(w)];
    std::sort(r.begin(), r.end());
  }
  return g;
}

}  // namespace

BipartiteGraph read_graph(std::istream& in) {
  auto g = read_one(in);
  if (!g) throw ParseError("no graph in input", 0);
  return *g;
}

std::vector<BipartiteGraph> read_graphs(std::istream& in) {
  std::vector<BipartiteGraph> out;
  while (auto g = read_one(in)) out.push_back(std::move(*g));
  return out;
}

std::string to_graph6(const BipartiteGraph& g) {
  const int n = g.white_count + g.black_count;
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(63 + n));
  } else {
    out.push_back('~');
    out.push_back(static_cast<char>(63 + ((n >> 12) & 63)));
    out.push_back(static_cast<char>(63 + ((n >> 6) & 63)));
    out.push_back(static_cast<char>(63 + (n & 63)));
  }
  std::vector<std::vector<char>> m(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int w = 0; w < g.white_count; ++w)
    for (int b : g.adjacency[static_cast<std::size_t>(w)]) {
      m[static_cast<std::size_t>(w)][static_cast<std::size_t>(g.white_count + b)] = 1;
      m[static_cast<std::size_t>(g.white_count + b)][static_cast<std::size_t>(w)] = 1;
    }
  int acc = 0, bits = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (++bits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = bits = 0;
      }
    }
  if (bits) out.push_back(static_cast<char>(63 + (acc << (6 - bits))));
  return out;
}

BipartiteGraph from_graph6(const std::string& line, int white_count) {
  std::size_t p = 0;
  auto byte = [&](std::size_t at) {
    if (at >= line.size()) throw ParseError("graph6 string too short", at);
    const int v = static_cast<unsigned char>(line[at]) - 63;
    if (v < 0 || v > 63) throw ParseError("invalid graph6 character", at);
    return v;
  };
  int n;
  if (!line.empty() && line[0] == '~') {
    if (line.size() > 1 && line[1] == '~') throw ParseError("graph6 sizes above 258047 unsupported", 1);
    n = (byte(1) << 12) | (byte(2) << 6) | byte(3);
    p = 4;
  } else {
    n = byte(0);
    p = 1;
  }
  if (white_count < 0 || white_count > n) throw PreconditionError("white count exceeds graph order");
  BipartiteGraph g;
  g.white_count = white_count;
  g.black_count = n - white_count;
  g.adjacency.resize(static_cast<std::size_t>(white_count));
  int bits = 0, cur = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (bits == 0) {
        cur = byte(p++);
        bits = 6;
      }
      const int bit = (cur >> (--bits)) & 1;
      if (!bit) continue;
      const bool iw = i < white_count, jw = j < white_count;
      if (iw == jw) throw PreconditionError("graph6 edge inside one colour class");
      const int w = iw ? i : j, b = (iw ? j : i) - white_count;
      g.adjacency[static_cast<std::size_t>(w)].push_back(b);
    }
  for (auto& r : g.adjacency) std::sort(r.begin(), r.end());
  return g;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct Bits {
  std::uint64_t w[2] = {0, 0};

  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  int count() const { return __builtin_popcountll(w[0]) + __builtin_popcountll(w[1]); }
  bool any() const { return (w[0] | w[1]) != 0; }
  Bits& operator|=(const Bits& o) {
    w[0] |= o.w[0];
    w[1] |= o.w[1];
    return *this;
  }
  friend Bits operator&(const Bits& a, const Bits& b) { return {{a.w[0] & b.w[0], a.w[1] & b.w[1]}}; }
  friend Bits operator|(const Bits& a, const Bits& b) { return {{a.w[0] | b.w[0], a.w[1] | b.w[1]}}; }
  friend Bits operator~(const Bits& a) { return {{~a.w[0], ~a.w[1]}}; }
  friend Bits andnot(const Bits& a, const Bits& b) { return {{a.w[0] & ~b.w[0], a.w[1] & ~b.w[1]}}; }

  template <class F>
  void for_each(F&& f) const {
    for (int k = 0; k < 2; ++k) {
      std::uint64_t x = w[k];
      while (x) {
        const int i = __builtin_ctzll(x);
        f(k * 64 + i);
        x &= x - 1;
      }
    }
  }
};

class Generator {
 public:
  explicit Generator(const GenerationJob& job) : job_(job) {}

  GenerationResult run() {
    const int W = job_.white_count;
    const int g = job_.min_girth;
    if (g < 4 || g % 2) throw PreconditionError("min_girth must be an even number >= 4");
    if (W < 1 || 2 * W > 128) throw PreconditionError("white_count must be in 1..64");
    W_ = W;
    N_ = 2 * W;
    R_ = g - 2;
    radius_ = g / 2 - 1;
    if (!build_tree()) return finish();

    const std::size_t nn = static_cast<std::size_t>(N_);
    const int max_depth = 3 * W - (tree_edges_) + 1;
    levels_.assign(static_cast<std::size_t>(max_depth + 1), std::vector<Bits>(nn * static_cast<std::size_t>(R_ + 1)));
    init_balls();
    forb_.assign(nn, Bits{});
    counter_at_entry_.assign(static_cast<std::size_t>(max_depth + 1), 0);
    path_.clear();

    if (job_.explored_rejection_edges < 0)
      rejection_total_edges_ = 78;
    else
      rejection_total_edges_ = job_.explored_rejection_edges;

    resume_ = job_.resume;
    if (!resume_.empty()) {
      shard_counter_ = static_cast<std::uint64_t>(resume_.front());
      resume_.erase(resume_.begin());
      resuming_ = true;
    }
    started_ = std::chrono::steady_clock::now();
    dfs(0);
    return finish();
  }

 private:
  struct Interrupt {};

  // --- setup -------------------------------------------------------------

  bool build_tree() {
    // Vertex ids: whites 0..W-1, blacks W..2W-1. Tree vertices first, then
    // the extra vertices of each colour.
    int next_white = 0, next_black = W_;
    adj_.assign(static_cast<std::size_t>(N_), {});
    deg_.assign(static_cast<std::size_t>(N_), 0);
    tree_parent_.assign(static_cast<std::size_t>(N_), -1);
    is_leaf_.assign(static_cast<std::size_t>(N_), 0);
    leaf_first_.assign(static_cast<std::size_t>(N_), -1);
    touched_.assign(static_cast<std::size_t>(N_), 0);
    ancestors_.assign(static_cast<std::size_t>(N_), {});
    auto alloc = [&](bool white) {
      if (white) return next_white < W_ ? next_white++ : -1;
      return next_black < N_ ? next_black++ : -1;
    };
    const int w0 = alloc(true), b0 = alloc(false);
    if (w0 < 0 || b0 < 0) return false;
    add_edge_raw(w0, b0);
    tree_edges_ = 1;
    // Breadth-first per side, recording parents; leaves get DFS order later.
    std::vector<std::pair<int, int>> frontier{{w0, 0}, {b0, 0}};
    std::vector<int> roots{w0, b0};
    bool ok = true;
    for (int depth = 0; depth < radius_; ++depth) {
      std::vector<std::pair<int, int>> next;
      for (auto [v, d] : frontier) {
        (void)d;
        const bool child_white = v >= W_;
        for (int c = 0; c < 2; ++c) {
          const int u = alloc(child_white);
          if (u < 0) {
            ok = false;
            break;
          }
          add_edge_raw(v, u);
          ++tree_edges_;
          tree_parent_[static_cast<std::size_t>(u)] = v;
          next.emplace_back(u, depth + 1);
        }
        if (!ok) break;
      }
      if (!ok) break;
      frontier = std::move(next);
    }
    if (!ok) return false;
    for (auto [v, d] : frontier) {
      (void)d;
      is_leaf_[static_cast<std::size_t>(v)] = 1;
    }
    if (radius_ == 0) {
      is_leaf_[static_cast<std::size_t>(w0)] = is_leaf_[static_cast<std::size_t>(b0)] = 1;
    }
    // Ancestor chains (within a side) and first leaf of every subtree.
    for (int v = 0; v < N_; ++v) {
      if (!is_leaf_[static_cast<std::size_t>(v)]) continue;
      for (int a = tree_parent_[static_cast<std::size_t>(v)]; a >= 0; a = tree_parent_[static_cast<std::size_t>(a)])
        ancestors_[static_cast<std::size_t>(v)].push_back(a);
    }
    // Leaves were allocated in breadth-first order, so the leaves below any
    // vertex form a contiguous id range whose minimum is the first leaf.
    for (int v = 0; v < N_; ++v) {
      if (!is_leaf_[static_cast<std::size_t>(v)]) continue;
      for (int a : ancestors_[static_cast<std::size_t>(v)]) {
        int& f = leaf_first_[static_cast<std::size_t>(a)];
        if (f < 0 || v < f) f = v;
      }
    }
    tree_white_ = next_white;
    tree_black_ = next_black - W_;
    for (int v = 0; v < N_; ++v) {
      const bool white = v < W_;
      const bool extra = white ? v >= tree_white_ : v - W_ >= tree_black_;
      if (extra) extras_.push_back(v);
    }
    for (int v = 0; v < N_; ++v)
      if (deg_[static_cast<std::size_t>(v)] < 3) (v < W_ ? def_white_ : def_black_).set(v);
    return true;
  }

  void add_edge_raw(int a, int b) {
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
    ++deg_[static_cast<std::size_t>(a)];
    ++deg_[static_cast<std::size_t>(b)];
  }

  Bits& ball(int depth, int r, int x) {
    return levels_[static_cast<std::size_t>(depth)][static_cast<std::size_t>(r * N_ + x)];
  }

  void init_balls() {
    // BFS from every vertex over the starting configuration.
    for (int x = 0; x < N_; ++x) {
      std::vector<int> dist(static_cast<std::size_t>(N_), -1);
      dist[static_cast<std::size_t>(x)] = 0;
      std::deque<int> q{x};
      while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        if (dist[static_cast<std::size_t>(v)] == R_) continue;
        for (int w : adj_[static_cast<std::size_t>(v)])
          if (dist[static_cast<std::size_t>(w)] < 0) {
            dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
            q.push_back(w);
          }
      }
      for (int r = 0; r <= R_; ++r) {
        Bits b;
        for (int v = 0; v < N_; ++v)
          if (dist[static_cast<std::size_t>(v)] >= 0 && dist[static_cast<std::size_t>(v)] <= r) b.set(v);
        ball(0, r, x) = b;
      }
    }
  }

  // --- edge updates ------------------------------------------------------

  // Writes the balls after adding u-v at `depth` into depth+1.
  void push_edge(int depth, int u, int v) {
    const std::size_t sz = static_cast<std::size_t>(N_) * static_cast<std::size_t>(R_ + 1);
    auto& src = levels_[static_cast<std::size_t>(depth)];
    auto& dst = levels_[static_cast<std::size_t>(depth + 1)];
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(sz), dst.begin());

    // Distance layers from u and v in the old graph.
    std::vector<int>& du = dist_u_;
    std::vector<int>& dv = dist_v_;
    du.assign(static_cast<std::size_t>(N_), R_ + 1);
    dv.assign(static_cast<std::size_t>(N_), R_ + 1);
    for (int r = R_; r >= 0; --r) {
      ball(depth, r, u).for_each([&](int x) { du[static_cast<std::size_t>(x)] = r; });
      ball(depth, r, v).for_each([&](int x) { dv[static_cast<std::size_t>(x)] = r; });
    }
    const Bits affected = ball(depth, R_ - 1, u) | ball(depth, R_ - 1, v);
    affected.for_each([&](int x) {
      const int a = du[static_cast<std::size_t>(x)], b = dv[static_cast<std::size_t>(x)];
      for (int r = 1; r <= R_; ++r) {
        Bits& t = dst[static_cast<std::size_t>(r * N_ + x)];
        if (r - 1 - a >= 0) t |= ball(depth, r - 1 - a, v);
        if (r - 1 - b >= 0) t |= ball(depth, r - 1 - b, u);
      }
    });

    add_edge_raw(u, v);
    for (int e : {u, v}) {
      const auto ei = static_cast<std::size_t>(e);
      if (deg_[ei] == 3) (e < W_ ? def_white_ : def_black_).reset(e);
      if (is_leaf_[ei] && deg_[ei] == 2)
        for (int a : ancestors_[ei]) ++touched_[static_cast<std::size_t>(a)];
    }
  }

  void pop_edge(int u, int v) {
    for (int e : {u, v}) {
      const auto ei = static_cast<std::size_t>(e);
      if (deg_[ei] == 3) (e < W_ ? def_white_ : def_black_).set(e);
      if (is_leaf_[ei] && deg_[ei] == 2)
        for (int a : ancestors_[ei]) --touched_[static_cast<std::size_t>(a)];
    }
    adj_[static_cast<std::size_t>(u)].pop_back();
    adj_[static_cast<std::size_t>(v)].pop_back();
    --deg_[static_cast<std::size_t>(u)];
    --deg_[static_cast<std::size_t>(v)];
  }

  // --- search ------------------------------------------------------------

  Bits candidates(int depth, int x) const {
    const Bits& opp = x < W_ ? def_black_ : def_white_;
    const Bits& near = levels_[static_cast<std::size_t>(depth)][static_cast<std::size_t>(R_ * N_ + x)];
    return andnot(andnot(opp, near), forb_[static_cast<std::size_t>(x)]);
  }

  // Two new neighbours of one vertex must be at distance >= girth - 2.
  bool compatible_pair(int depth, const Bits& cand, int need) const {
    bool ok = false;
    cand.for_each([&](int u) {
      if (ok) return;
      const Bits& near = levels_[static_cast<std::size_t>(depth)][static_cast<std::size_t>((R_ - 2) * N_ + u)];
      if (andnot(cand, near).count() >= need - 1) ok = true;
    });
    return ok;
  }

  // Representative of u's orbit under the symmetries of the current
  // configuration that fix x.
  int representative(int u) const {
    const auto ui = static_cast<std::size_t>(u);
    if (is_leaf_[ui]) {
      if (deg_[ui] > 1) return u;
      int top = -1;
      for (int a : ancestors_[ui]) {
        if (touched_[static_cast<std::size_t>(a)]) break;
        top = a;
      }
      return top < 0 ? u : leaf_first_[static_cast<std::size_t>(top)];
    }
    if (deg_[ui] == 0) {
      for (int e : extras_)
        if (deg_[static_cast<std::size_t>(e)] == 0 && (e < W_) == (u < W_)) return e;
    }
    return u;
  }

  void check_budget() {
    ++stats_.nodes;
    if (job_.node_budget && stats_.nodes > job_.node_budget) throw Interrupt{};
    if ((stats_.nodes & 4095) == 0) {
      if (job_.progress) job_.progress(stats_.nodes);
      if (job_.seconds_budget > 0) {
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        if (t > job_.seconds_budget) throw Interrupt{};
      }
    }
  }

  void dfs(int depth) {
    counter_at_entry_[static_cast<std::size_t>(depth)] = shard_counter_;
    if (!resuming_) check_budget();

    if (!def_white_.any() && !def_black_.any()) {
      leaf();
      return;
    }

    const bool sharded = job_.shard && job_.shard->count > 1;
    if (job_.shard && depth == job_.shard->depth) {
      const std::uint64_t k = shard_counter_++;
      ++stats_.shard_nodes;
      if (sharded && k % static_cast<std::uint64_t>(job_.shard->count) != static_cast<std::uint64_t>(job_.shard->index))
        return;
    }

    // Pick the deficient vertex with the fewest candidates.
    int best_x = -1, best_count = 1 << 30;
    bool dead = false;
    auto scan = [&](const Bits& set) {
      set.for_each([&](int x) {
        if (dead) return;
        const Bits cand = candidates(depth, x);
        const int c = cand.count();
        const int need = 3 - deg_[static_cast<std::size_t>(x)];
        if (c < need) {
          dead = true;
          return;
        }
        if (need >= 2 && !compatible_pair(depth, cand, need)) {
          dead = true;
          return;
        }
        if (c < best_count) {
          best_count = c;
          best_x = x;
        }
      });
    };
    scan(def_white_);
    scan(def_black_);
    if (dead) return;

    if (!resuming_ && rejection_total_edges_ > 0 && (!job_.shard || depth >= job_.shard->depth) &&
        tree_edges_ + depth <= rejection_total_edges_) {
      if (!explored_.insert(partial_code()).second) {
        ++stats_.rejected_explored;
        return;
      }
    }

    const int x = best_x;
    std::vector<int> children;
    candidates(depth, x).for_each([&](int u) {
      if (representative(u) == u) children.push_back(u);
    });

    const Bits saved_fx = forb_[static_cast<std::size_t>(x)];
    std::size_t first = 0;
    if (resuming_) {
      const std::size_t d = static_cast<std::size_t>(depth);
      if (d < resume_.size()) {
        first = static_cast<std::size_t>(resume_[d]);
        if (first > children.size()) first = children.size();
      }
      if (d + 1 >= resume_.size()) resuming_ = false;  // re-explore this node from `first`
    }
    for (std::size_t i = 0; i < first; ++i) {
      forb_[static_cast<std::size_t>(x)].set(children[i]);
      forb_[static_cast<std::size_t>(children[i])].set(x);
    }
    for (std::size_t i = first; i < children.size(); ++i) {
      const int u = children[i];
      path_.push_back(static_cast<int>(i));
      push_edge(depth, x, u);
      try {
        dfs(depth + 1);
      } catch (Interrupt&) {
        pop_edge(x, u);
        throw;
      }
      pop_edge(x, u);
      path_.pop_back();
      resuming_ = false;
      forb_[static_cast<std::size_t>(x)].set(u);
      forb_[static_cast<std::size_t>(u)].set(x);
    }
    for (int u : children) forb_[static_cast<std::size_t>(u)].reset(x);
    forb_[static_cast<std::size_t>(x)] = saved_fx;
  }

  std::string partial_code() const {
    ColoredGraph cg;
    cg.adj = adj_;
    cg.color.assign(static_cast<std::size_t>(N_), 0);
    for (int v = W_; v < N_; ++v) cg.color[static_cast<std::size_t>(v)] = 1;
    return tree_reduced_certificate(cg);
  }

  void leaf() {
    ++stats_.complete;
    // Connectivity (extra vertices could in principle form their own
    // component).
    std::vector<char> seen(static_cast<std::size_t>(N_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj_[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != N_) return;
    BipartiteGraph g;
    g.white_count = g.black_count = W_;
    g.adjacency.resize(static_cast<std::size_t>(W_));
    for (int w = 0; w < W_; ++w) {
      for (int b : adj_[static_cast<std::size_t>(w)]) g.adjacency[static_cast<std::size_t>(w)].push_back(b - W_);
      std::sort(g.adjacency[static_cast<std::size_t>(w)].begin(), g.adjacency[static_cast<std::size_t>(w)].end());
    }
    auto code = canonical_code(g, true);
    found_.emplace(std::move(code.bytes), std::move(g));
  }

  GenerationResult finish() {
    GenerationResult r;
    std::set<std::string> uncolored;
    for (auto& [code, g] : found_) {
      r.codes.push_back(CanonicalCode{code});
      uncolored.insert(canonical_code(g, false).bytes);
      r.graphs.push_back(g);
    }
    r.uncolored_classes = uncolored.size();
    r.stats = stats_;
    return r;
  }

 public:
  GenerationResult run_catching() {
    try {
      return run();
    } catch (Interrupt&) {
      std::vector<int> resume;
      const std::size_t D = path_.size();  // interrupted node's depth
      std::size_t anchor = D;
      if (job_.shard && static_cast<std::size_t>(job_.shard->depth) < anchor)
        anchor = static_cast<std::size_t>(job_.shard->depth);
      resume.push_back(static_cast<int>(counter_at_entry_[anchor]));
      resume.insert(resume.end(), path_.begin(), path_.end());
      throw GenerationInterrupted(finish(), std::move(resume));
    }
  }

 private:
  const GenerationJob& job_;
  int W_ = 0, N_ = 0, R_ = 0, radius_ = 0;
  int tree_edges_ = 0;
  int tree_white_ = 0, tree_black_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> deg_;
  std::vector<int> tree_parent_;
  std::vector<char> is_leaf_;
  std::vector<int> leaf_first_;
  std::vector<int> touched_;
  std::vector<std::vector<int>> ancestors_;
  std::vector<int> extras_;
  Bits def_white_, def_black_;
  std::vector<std::vector<Bits>> levels_;
  std::vector<Bits> forb_;
  std::vector<int> dist_u_, dist_v_;

  std::vector<int> path_;
  std::vector<std::uint64_t> counter_at_entry_;
  std::uint64_t shard_counter_ = 0;
  std::vector<int> resume_;
  bool resuming_ = false;
  int rejection_total_edges_ = 0;
  std::unordered_set<std::string> explored_;
  std::chrono::steady_clock::time_point started_;

  std::map<std::string, BipartiteGraph> found_;
  GenerationStats stats_;
};

}  // namespace

GenerationResult generate(const GenerationJob& job) {
  Generator g(job);
  return g.run_catching();
}

GenerationResult merge_results(const std::vector<GenerationResult>& parts) {
  std::map<std::string, BipartiteGraph> all;
  GenerationResult r;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.graphs.size(); ++i) all.emplace(p.codes[i].bytes, p.graphs[i]);
    r.stats.nodes += p.stats.nodes;
    r.stats.complete += p.stats.complete;
    r.stats.rejected_explored += p.stats.rejected_explored;
    r.stats.shard_nodes = std::max(r.stats.shard_nodes, p.stats.shard_nodes);
  }
  std::set<std::string> uncolored;
  for (auto& [code, g] : all) {
    r.codes.push_back(CanonicalCode{code});
    r.graphs.push_back(g);
    uncolored.insert(canonical_code(g, false).bytes);
  }
  r.uncolored_classes = uncolored.size();
  return r;
}

// ---------------------------------------------------------------------------
// Small Greechie diagrams by canonical augmentation

namespace {

struct Diagram {
  int atoms = 0;
  std::vector<std::vector<int>> blocks;
};

std::string diagram_code(const Diagram& d, int marked = -1) {
  ColoredGraph cg = incidence_graph(d.blocks, d.atoms);
  if (marked >= 0) cg.color[static_cast<std::size_t>(d.atoms + marked)] = 2;
  return canonical_labeling(cg).certificate;
}

// Removes block b and the atoms only it contained; nothing if the rest is
// disconnected or empty.
std::optional<Diagram> remove_block(const Diagram& d, int b) {
  if (d.blocks.size() <= 1) return std::nullopt;
  std::vector<int> uses(static_cast<std::size_t>(d.atoms), 0);
  for (const auto& blk : d.blocks)
    for (int a : blk) ++uses[static_cast<std::size_t>(a)];
  std::vector<int> remap(static_cast<std::size_t>(d.atoms), -1);
  Diagram out;
  for (int a = 0; a < d.atoms; ++a) {
    const auto& blk = d.blocks[static_cast<std::size_t>(b)];
    const bool only_here = uses[static_cast<std::size_t>(a)] == 1 && std::find(blk.begin(), blk.end(), a) != blk.end();
    if (!only_here) remap[static_cast<std::size_t>(a)] = out.atoms++;
  }
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    if (static_cast<int>(i) == b) continue;
    std::vector<int> nb;
    for (int a : d.blocks[i]) nb.push_back(remap[static_cast<std::size_t>(a)]);
    out.blocks.push_back(std::move(nb));
  }
  // connectivity over blocks
  const std::size_t m = out.blocks.size();
  std::vector<char> seen(m, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (std::size_t y = 0; y < m; ++y) {
      if (seen[y]) continue;
      bool share = false;
      for (int a : out.blocks[static_cast<std::size_t>(x)])
        if (std::find(out.blocks[y].begin(), out.blocks[y].end(), a) != out.blocks[y].end()) share = true;
      if (share) {
        seen[y] = 1;
        ++reached;
        stack.push_back(static_cast<int>(y));
      }
    }
  }
  if (reached != m) return std::nullopt;
  return out;
}

// Atom distances in the incidence graph (atoms only, in block steps x 2).
std::vector<std::vector<int>> atom_distances(const Diagram& d) {
  const int n = d.atoms;
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < d.blocks.size(); ++b)
    for (int a : d.blocks[b]) inc[static_cast<std::size_t>(a)].push_back(static_cast<int>(b));
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    auto& ds = dist[static_cast<std::size_t>(s)];
    ds[static_cast<std::size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int a = q.front();
      q.pop_front();
      for (int b : inc[static_cast<std::size_t>(a)])
        for (int c : d.blocks[static_cast<std::size_t>(b)])
          if (ds[static_cast<std::size_t>(c)] < 0) {
            ds[static_cast<std::size_t>(c)] = ds[static_cast<std::size_t>(a)] + 2;
            q.push_back(c);
          }
    }
  }
  return dist;
}

}  // namespace

std::vector<MmpHypergraph> generate_greechie_small(int max_blocks, int block_size) {
  if (block_size < 2) throw PreconditionError("block size must be at least 2");
  if (max_blocks < 0) throw PreconditionError("max_blocks must be non-negative");
  std::vector<MmpHypergraph> out;
  if (max_blocks == 0) return out;

  std::vector<Diagram> level;
  {
    Diagram first;
    first.atoms = block_size;
    first.blocks.push_back({});
    for (int a = 0; a < block_size; ++a) first.blocks[0].push_back(a);
    level.push_back(first);
  }
  auto emit = [&](const std::vector<Diagram>& ds) {
    std::vector<std::pair<std::string, MmpHypergraph>> sorted;
    for (const auto& d : ds) {
      std::vector<Block> blocks;
      for (const auto& b : d.blocks) {
        Block blk;
        for (int a : b) blk.push_back(VertexId{a + 1});
        blocks.push_back(std::move(blk));
      }
      MmpHypergraph h(std::move(blocks));
      sorted.emplace_back(serialize_mmp(h), std::move(h));
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      return a.first < b.first;
    });
    for (auto& [s, h] : sorted) out.push_back(std::move(h));
  };
  emit(level);

  for (int m = 2; m <= max_blocks; ++m) {
    std::vector<Diagram> next;
    std::set<std::string> seen;
    for (const Diagram& parent : level) {
      const auto dist = atom_distances(parent);
      // Choose 1..block_size existing atoms, pairwise at distance >= 8.
      std::vector<int> chosen;
      std::function<void(int)> pick = [&](int from) {
        if (!chosen.empty()) {
          Diagram child = parent;
          std::vector<int> nb = chosen;
          while (static_cast<int>(nb.size()) < block_size) nb.push_back(child.atoms++);
          child.blocks.push_back(nb);
          const int added = static_cast<int>(child.blocks.size()) - 1;
          // Canonical deletion: the removable block with the least marked code.
          std::string best, mine = diagram_code(child, added);
          for (int b = 0; b <= added; ++b) {
            if (!remove_block(child, b)) continue;
            std::string c = b == added ? mine : diagram_code(child, b);
            if (best.empty() || c < best) best = std::move(c);
          }
          if (mine == best && seen.insert(diagram_code(child)).second) next.push_back(std::move(child));
        }
        if (static_cast<int>(chosen.size()) == block_size) return;
        for (int a = from; a < parent.atoms; ++a) {
          bool ok = true;
          for (int c : chosen) {
            const int dd = dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
            if (dd >= 0 && dd < 8) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          chosen.push_back(a);
          pick(a + 1);
          chosen.pop_back();
        }
      };
      pick(0);
    }
    level = std::move(next);
    emit(level);
  }
  return out;
}

}  // namespace omlkit
