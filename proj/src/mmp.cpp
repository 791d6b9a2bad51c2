#include "omlkit/mmp.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "omlkit/errors.hpp"

namespace omlkit {

namespace {

constexpr std::string_view kAlphabet =
    "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
    "!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~";
static_assert(kAlphabet.size() == 90);

constexpr int kBase = 90;

const std::array<int, 256>& char_ranks() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    for (std::size_t i = 0; i < kAlphabet.size(); ++i)
      t[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
    return t;
  }();
  return table;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

std::string_view mmp_alphabet() { return kAlphabet; }

std::string vertex_label(VertexId v) {
  if (v.index < 1) throw PreconditionError("vertex index must be positive");
  const int k = v.index - 1;
  std::string out(static_cast<std::size_t>(k / kBase), '+');
  out.push_back(kAlphabet[static_cast<std::size_t>(k % kBase)]);
  return out;
}

VertexId parse_vertex_label(std::string_view label) {
  std::size_t pluses = 0;
  while (pluses < label.size() && label[pluses] == '+') ++pluses;
  if (pluses + 1 != label.size())
    throw ParseError("vertex label must be '+'* followed by one base character", pluses);
  const int r = char_ranks()[static_cast<unsigned char>(label.back())];
  if (r < 0) throw ParseError("character outside the MMP alphabet", pluses);
  return VertexId{static_cast<int>(pluses) * kBase + r + 1};
}

// ---------------------------------------------------------------------------

MmpHypergraph::MmpHypergraph(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  std::vector<VertexId> all;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Block& blk = blocks_[b];
    if (blk.empty()) throw PreconditionError("block " + std::to_string(b) + " is empty");
    std::vector<VertexId> sorted = blk;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front().index < 1) throw PreconditionError("vertex index must be positive");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("block " + std::to_string(b) + " repeats a vertex");
    all.insert(all.end(), blk.begin(), blk.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  vertices_ = std::move(all);

  incidence_.assign(vertices_.size(), {});
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (VertexId v : blocks_[b])
      incidence_[static_cast<std::size_t>(vertex_position(v))].push_back(static_cast<int>(b));
}

int MmpHypergraph::vertex_position(VertexId v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return -1;
  return static_cast<int>(it - vertices_.begin());
}

std::vector<std::vector<int>> MmpHypergraph::position_blocks() const {
  std::vector<std::vector<int>> out;
  out.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    std::vector<int> row;
    row.reserve(b.size());
    for (VertexId v : b) row.push_back(vertex_position(v));
    out.push_back(std::move(row));
  }
  return out;
}

bool MmpHypergraph::is_uniform(std::size_t k) const {
  return std::all_of(blocks_.begin(), blocks_.end(), [k](const Block& b) { return b.size() == k; });
}

bool MmpHypergraph::is_regular(std::size_t k) const {
  return std::all_of(incidence_.begin(), incidence_.end(),
                     [k](const std::vector<int>& inc) { return inc.size() == k; });
}

bool MmpHypergraph::is_connected() const {
  if (blocks_.empty()) return true;
  const auto pos = position_blocks();
  std::vector<char> seen_block(blocks_.size(), 0), seen_vertex(vertices_.size(), 0);
  std::vector<int> stack{0};
  seen_block[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int b = stack.back();
    stack.pop_back();
    for (int v : pos[static_cast<std::size_t>(b)]) {
      if (seen_vertex[static_cast<std::size_t>(v)]) continue;
      seen_vertex[static_cast<std::size_t>(v)] = 1;
      for (int nb : incidence_[static_cast<std::size_t>(v)]) {
        if (!seen_block[static_cast<std::size_t>(nb)]) {
          seen_block[static_cast<std::size_t>(nb)] = 1;
          ++reached;
          stack.push_back(nb);
        }
      }
    }
  }
  return reached == blocks_.size();
}

MmpHypergraph MmpHypergraph::normalized() const {
  std::vector<Block> out;
  out.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    Block nb;
    nb.reserve(b.size());
    for (VertexId v : b) nb.push_back(VertexId{vertex_position(v) + 1});
    out.push_back(std::move(nb));
  }
  return MmpHypergraph(std::move(out));
}

// ---------------------------------------------------------------------------
// Codec

MmpHypergraph parse_mmp(std::string_view line) {
  const auto& ranks = char_ranks();
  std::vector<Block> blocks;
  Block current;
  std::set<int> in_block;
  std::size_t i = 0;
  bool terminated = false;

  auto close_block = [&](std::size_t at) {
    if (current.empty()) throw ParseError("empty block", at);
    blocks.push_back(std::move(current));
    current.clear();
    in_block.clear();
  };

  while (i < line.size()) {
    const char c = line[i];
    if (is_blank(c)) {
      ++i;
      continue;
    }
    if (c == ',') {
      close_block(i);
      ++i;
      continue;
    }
    if (c == '.') {
      close_block(i);
      terminated = true;
      ++i;
      break;
    }
    const std::size_t label_start = i;
    int pluses = 0;
    while (i < line.size() && line[i] == '+') {
      ++pluses;
      ++i;
    }
    if (i >= line.size()) throw ParseError("'+' prefix without a base character", label_start);
    const int r = ranks[static_cast<unsigned char>(line[i])];
    if (r < 0) throw ParseError(std::string("character '") + line[i] + "' outside the MMP alphabet", i);
    const int index = pluses * kBase + r + 1;
    if (!in_block.insert(index).second)
      throw ParseError("vertex '" + std::string(line.substr(label_start, i + 1 - label_start)) +
                           "' repeated inside a block",
                       label_start);
    current.push_back(VertexId{index});
    ++i;
  }
  if (!terminated) {
    if (blocks.empty() && current.empty()) throw ParseError("empty MMP line", 0);
    throw ParseError("missing terminal '.'", line.size());
  }
  for (; i < line.size(); ++i)
    if (!is_blank(line[i])) throw ParseError("trailing characters after '.'", i);
  return MmpHypergraph(std::move(blocks));
}

std::string serialize_mmp(const MmpHypergraph& h) {
  std::string out;
  for (std::size_t b = 0; b < h.block_count(); ++b) {
    if (b) out.push_back(',');
    for (VertexId v : h.block(b)) out += vertex_label(v);
  }
  out.push_back('.');
  return out;
}

std::vector<MmpHypergraph> read_mmp_stream(std::istream& in) {
  std::vector<MmpHypergraph> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_mmp(line));
  }
  return out;
}

std::vector<MmpHypergraph> read_mmp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mmp_stream(in);
}

// ---------------------------------------------------------------------------
// Loops

namespace {

// Shared adjacency for the loop searches: blocks as position lists plus a
// per-block atom bitmap.
struct LoopContext {
  explicit LoopContext(const MmpHypergraph& h)
      : blocks(h.position_blocks()), incidence(h.incidence()), atom_count(h.vertex_count()) {}

  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<int>> incidence;
  std::size_t atom_count;
};

// Generic loops (chords allowed): DFS from the smallest block of the loop.
class GenericLoopSearch {
 public:
  GenericLoopSearch(const LoopContext& ctx, int order) : ctx_(ctx), order_(order) {}

  // Visits every loop of the requested order once per (start, direction,
  // atom choice); stops as soon as the callback returns true.
  template <class F>
  bool run(F&& on_loop) {
    block_used_.assign(ctx_.blocks.size(), 0);
    atom_used_.assign(ctx_.atom_count, 0);
    for (std::size_t s = 0; s < ctx_.blocks.size(); ++s) {
      start_ = static_cast<int>(s);
      path_ = {start_};
      block_used_[s] = 1;
      const bool done = extend(on_loop);
      block_used_[s] = 0;
      if (done) return true;
    }
    return false;
  }

 private:
  template <class F>
  bool extend(F& on_loop) {
    const int last = path_.back();
    for (int atom : ctx_.blocks[static_cast<std::size_t>(last)]) {
      if (atom_used_[static_cast<std::size_t>(atom)]) continue;
      for (int next : ctx_.incidence[static_cast<std::size_t>(atom)]) {
        if (next < start_) continue;
        if (next == start_) {
          // closing step
          if (static_cast<int>(path_.size()) == order_ && next != last) {
            if (on_loop(path_)) return true;
          }
          continue;
        }
        if (block_used_[static_cast<std::size_t>(next)]) continue;
        if (static_cast<int>(path_.size()) >= order_) continue;
        atom_used_[static_cast<std::size_t>(atom)] = 1;
        block_used_[static_cast<std::size_t>(next)] = 1;
        path_.push_back(next);
        const bool done = extend(on_loop);
        path_.pop_back();
        block_used_[static_cast<std::size_t>(next)] = 0;
        atom_used_[static_cast<std::size_t>(atom)] = 0;
        if (done) return true;
      }
    }
    return false;
  }

  const LoopContext& ctx_;
  int order_;
  int start_ = 0;
  std::vector<int> path_;
  std::vector<char> block_used_;
  std::vector<char> atom_used_;
};

// Loops whose non-consecutive blocks are disjoint; branch and bound on the
// number of still unused atoms.
class ChordlessLoopSearch {
 public:
  explicit ChordlessLoopSearch(const LoopContext& ctx)
      : ctx_(ctx), global_bound_(static_cast<int>(ctx.atom_count / 2)) {}

  void run() {
    const std::size_t m = ctx_.blocks.size();
    in_first_.assign(ctx_.atom_count, 0);
    in_middle_.assign(ctx_.atom_count, 0);
    block_used_.assign(m, 0);
    for (std::size_t s = 0; s < m && best_ < global_bound_; ++s) {
      start_ = static_cast<int>(s);
      path_ = {start_};
      block_used_[s] = 1;
      for (int a : ctx_.blocks[s]) in_first_[static_cast<std::size_t>(a)] = 1;
      used_atoms_ = static_cast<int>(ctx_.blocks[s].size());
      extend(-1);
      for (int a : ctx_.blocks[s]) in_first_[static_cast<std::size_t>(a)] = 0;
      block_used_[s] = 0;
    }
  }

  int best() const { return best_; }
  const std::vector<int>& witness() const { return witness_; }

 private:
  int shared_with(int b1, int b2, int* atom) const {
    int cnt = 0;
    const auto& other = ctx_.blocks[static_cast<std::size_t>(b2)];
    for (int a : ctx_.blocks[static_cast<std::size_t>(b1)])
      if (std::find(other.begin(), other.end(), a) != other.end()) {
        ++cnt;
        *atom = a;
      }
    return cnt;
  }

  // `entry` is the atom linking the last block to its predecessor.
  void extend(int entry) {
    if (best_ >= global_bound_) return;
    const int k = static_cast<int>(path_.size());
    const int free_atoms = static_cast<int>(ctx_.atom_count) - used_atoms_;
    if (k + (free_atoms + 1) / 2 <= best_) return;

    const int last = path_.back();
    const auto& last_atoms = ctx_.blocks[static_cast<std::size_t>(last)];
    for (int x : last_atoms) {
      if (x == entry || (k >= 2 && in_first_[static_cast<std::size_t>(x)])) continue;
      for (int c : ctx_.incidence[static_cast<std::size_t>(x)]) {
        if (c <= start_ || block_used_[static_cast<std::size_t>(c)]) continue;
        int link = -1;
        if (shared_with(c, last, &link) != 1) continue;
        bool hits_middle = false;
        int first_hits = 0, first_atom = -1;
        int fresh = 0;
        for (int a : ctx_.blocks[static_cast<std::size_t>(c)]) {
          const auto ai = static_cast<std::size_t>(a);
          if (in_middle_[ai]) hits_middle = true;
          if (k >= 2 && in_first_[ai]) {
            ++first_hits;
            first_atom = a;
          }
          if (a != x && !in_middle_[ai] && !in_first_[ai]) ++fresh;
        }
        if (hits_middle) continue;
        if (first_hits > 0) {
          // c can only close the loop.
          if (first_hits == 1 && first_atom != first_link_ && k + 1 > best_) {
            best_ = k + 1;
            witness_ = path_;
            witness_.push_back(c);
          }
          continue;
        }
        // Atoms of `last` other than the first block's become middle atoms.
        if (k >= 2)
          for (int a : last_atoms) ++in_middle_[static_cast<std::size_t>(a)];
        const int saved_link = first_link_;
        if (k == 1) first_link_ = x;
        block_used_[static_cast<std::size_t>(c)] = 1;
        path_.push_back(c);
        used_atoms_ += fresh;
        extend(x);
        used_atoms_ -= fresh;
        path_.pop_back();
        block_used_[static_cast<std::size_t>(c)] = 0;
        first_link_ = saved_link;
        if (k >= 2)
          for (int a : last_atoms) --in_middle_[static_cast<std::size_t>(a)];
        if (best_ >= global_bound_) return;
      }
    }
  }

  const LoopContext& ctx_;
  int global_bound_;
  int best_ = 0;
  int start_ = 0;
  int first_link_ = -1;
  int used_atoms_ = 0;
  std::vector<int> path_;
  std::vector<int> witness_;
  std::vector<char> in_first_;
  std::vector<int> in_middle_;
  std::vector<char> block_used_;
};

// Shortest loop via BFS girth on the incidence graph (atoms 0..n-1, blocks
// n..n+m-1). Returns block indices in loop order.
std::optional<std::vector<int>> shortest_loop(const LoopContext& ctx) {
  const int n = static_cast<int>(ctx.atom_count);
  const int m = static_cast<int>(ctx.blocks.size());
  const int total = n + m;
  auto neighbours = [&](int v) -> const std::vector<int>& {
    return v < n ? ctx.incidence[static_cast<std::size_t>(v)] : ctx.blocks[static_cast<std::size_t>(v - n)];
  };
  auto node_of = [&](int v, int nb) { return v < n ? nb + n : nb; };

  std::optional<std::vector<int>> best;
  std::size_t best_len = SIZE_MAX;
  std::vector<int> dist(static_cast<std::size_t>(total)), parent(static_cast<std::size_t>(total));
  for (int root = n; root < total; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(root)] = 0;
    parent[static_cast<std::size_t>(root)] = -1;
    std::vector<int> queue{root};
    bool found = false;
    for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
      const int v = queue[qi];
      if (2 * static_cast<std::size_t>(dist[static_cast<std::size_t>(v)]) + 1 >= best_len) break;
      for (int raw : neighbours(v)) {
        const int w = node_of(v, raw);
        if (w == parent[static_cast<std::size_t>(v)]) continue;
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
          continue;
        }
        // Cycle closes through edge v-w.
        const std::size_t len =
            static_cast<std::size_t>(dist[static_cast<std::size_t>(v)] + dist[static_cast<std::size_t>(w)] + 1);
        if (len >= best_len) continue;
        std::vector<int> left, right;
        for (int x = v; x != -1; x = parent[static_cast<std::size_t>(x)]) left.push_back(x);
        for (int x = w; x != -1; x = parent[static_cast<std::size_t>(x)]) right.push_back(x);
        // Paths must meet only at the root.
        std::vector<int> a(left.begin(), left.end() - 1), b(right.begin(), right.end() - 1);
        std::vector<int> sa = a, sb = b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        std::vector<int> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
        if (!inter.empty()) continue;
        std::vector<int> cycle(left.rbegin(), left.rend());  // root .. v
        cycle.insert(cycle.end(), right.begin(), right.end() - 1);  // w .. (before root)
        std::vector<int> loop;
        for (int x : cycle)
          if (x >= n) loop.push_back(x - n);
        best_len = len;
        best = loop;
        found = true;
        break;
      }
    }
  }
  return best;
}

}  // namespace

std::optional<std::vector<int>> find_loop(const MmpHypergraph& h, int order) {
  if (order < 2) return std::nullopt;
  LoopContext ctx(h);
  GenericLoopSearch search(ctx, order);
  std::optional<std::vector<int>> found;
  search.run([&](const std::vector<int>& loop) {
    found = loop;
    return true;
  });
  return found;
}

LoopReport loop_analysis(const MmpHypergraph& h) {
  LoopContext ctx(h);
  LoopReport report;
  if (auto s = shortest_loop(ctx)) {
    report.min_loop_order = static_cast<int>(s->size());
    report.min_witness = *s;
  }
  ChordlessLoopSearch search(ctx);
  search.run();
  report.max_loop_order = search.best();
  report.witness = search.witness();
  // A loop of order 2 (two blocks sharing two atoms) is never chordless-
  // searchable as an extension; fall back to the shortest loop when larger
  // ones do not exist.
  if (report.max_loop_order == 0 && report.min_loop_order) {
    report.max_loop_order = *report.min_loop_order;
    report.witness = report.min_witness;
  }
  return report;
}

// ---------------------------------------------------------------------------

ValidationReport validate(const MmpHypergraph& h, ValidationLevel level) {
  ValidationReport rep;
  rep.level = level;
  auto add = [&](std::string rule, std::string msg, std::vector<int> blocks, std::vector<VertexId> verts) {
    rep.valid = false;
    rep.violations.push_back({std::move(rule), std::move(msg), std::move(blocks), std::move(verts)});
  };

  // (i) holds structurally since the vertex set is derived from the blocks,
  // but an empty hypergraph has nothing to check.
  for (std::size_t i = 0; i < h.vertex_count(); ++i)
    if (h.incidence()[i].empty())
      add("mmp.i", "vertex " + vertex_label(h.vertices()[i]) + " lies in no block", {}, {h.vertices()[i]});

  for (std::size_t b = 0; b < h.block_count(); ++b)
    if (h.block(b).size() < 3)
      add("mmp.ii", "block " + std::to_string(b) + " has fewer than 3 vertices", {static_cast<int>(b)},
          h.block(b));

  std::vector<std::vector<VertexId>> sorted;
  for (const Block& b : h.blocks()) {
    auto s = b;
    std::sort(s.begin(), s.end());
    sorted.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      std::vector<VertexId> common;
      std::set_intersection(sorted[i].begin(), sorted[i].end(), sorted[j].begin(), sorted[j].end(),
                            std::back_inserter(common));
      const std::size_t k = common.size();
      if (k == 0) continue;
      if (sorted[i].size() < k + 2 || sorted[j].size() < k + 2)
        add("mmp.iii",
            "blocks " + std::to_string(i) + " and " + std::to_string(j) + " share " + std::to_string(k) +
                " vertices but one has fewer than " + std::to_string(k + 2),
            {static_cast<int>(i), static_cast<int>(j)}, common);
      if (level == ValidationLevel::Greechie && k > 1)
        add("greechie.4",
            "blocks " + std::to_string(i) + " and " + std::to_string(j) + " share " + std::to_string(k) + " atoms",
            {static_cast<int>(i), static_cast<int>(j)}, common);
    }
  }

  if (level == ValidationLevel::Greechie) {
    // Loops of order 2 are reported as greechie.4; list every loop of order
    // 3 and 4 by its block set.
    LoopContext ctx(h);
    for (int order = 3; order <= 4; ++order) {
      std::set<std::vector<int>> seen;
      GenericLoopSearch search(ctx, order);
      search.run([&](const std::vector<int>& loop) {
        std::vector<int> key = loop;
        std::sort(key.begin(), key.end());
        if (seen.insert(key).second)
          add("greechie.5", "loop of order " + std::to_string(order), loop, {});
        return false;
      });
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

MmpHypergraph dualize(const MmpHypergraph& h) {
  if (!h.is_uniform(3) || !h.is_regular(3))
    throw PreconditionError("dualize requires a 3-uniform, 3-regular hypergraph");
  std::vector<Block> out;
  out.reserve(h.vertex_count());
  for (const auto& inc : h.incidence()) {
    Block b;
    for (int blk : inc) b.push_back(VertexId{blk + 1});
    out.push_back(std::move(b));
  }
  return MmpHypergraph(std::move(out));
}

}  // namespace omlkit
