#pragma once

// MMP hypergraphs: the ASCII line encoding, structural validation, duals and
// loop statistics.

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omlkit {

/// 1-based rank of a vertex in the MMP alphabet. Ranks above 90 are spelled
/// with one leading '+' per full pass through the 90 base characters.
struct VertexId {
  int index = 0;

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

/// The 90 base characters in encoding order.
std::string_view mmp_alphabet();

/// Encoding of a single vertex, e.g. 1 -> "1", 91 -> "+1".
std::string vertex_label(VertexId v);

/// Inverse of vertex_label; throws ParseError on anything that is not exactly
/// one label.
VertexId parse_vertex_label(std::string_view label);

using Block = std::vector<VertexId>;

/// Blocks (edges) in input order; the vertex set is derived from them.
class MmpHypergraph {
 public:
  MmpHypergraph() = default;

  /// Throws PreconditionError on an empty block, a non-positive vertex index
  /// or a vertex repeated inside one block.
  explicit MmpHypergraph(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  /// Sorted, distinct vertices.
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }

  /// Position of v inside vertices(), or -1.
  int vertex_position(VertexId v) const;

  /// For every vertex position, the indices of the blocks containing it
  /// (ascending).
  const std::vector<std::vector<int>>& incidence() const noexcept { return incidence_; }

  /// Blocks as lists of vertex positions rather than ids.
  std::vector<std::vector<int>> position_blocks() const;

  bool is_uniform(std::size_t k) const;
  bool is_regular(std::size_t k) const;
  bool is_connected() const;

  /// Same blocks with vertices renumbered 1..n, preserving their order.
  MmpHypergraph normalized() const;

  friend bool operator==(const MmpHypergraph& a, const MmpHypergraph& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  std::vector<VertexId> vertices_;
  std::vector<std::vector<int>> incidence_;
};

/// Parses one line such as "123,345,567,789,9A1.". Spaces and tabs are
/// ignored so that typeset strings ("123, 249, ...") can be read verbatim.
MmpHypergraph parse_mmp(std::string_view line);

std::string serialize_mmp(const MmpHypergraph& h);

/// One hypergraph per non-blank line; lines starting with '#' are comments.
std::vector<MmpHypergraph> read_mmp_stream(std::istream& in);
std::vector<MmpHypergraph> read_mmp_file(const std::string& path);

// ---------------------------------------------------------------------------
// Validation

enum class ValidationLevel { Mmp, Greechie };

struct Violation {
  std::string rule;  // "mmp.i", "mmp.ii", "mmp.iii", "greechie.4", "greechie.5"
  std::string message;
  std::vector<int> blocks;  // block indices (0-based)
  std::vector<VertexId> vertices;
};

struct ValidationReport {
  ValidationLevel level = ValidationLevel::Mmp;
  bool valid = true;
  std::vector<Violation> violations;
};

ValidationReport validate(const MmpHypergraph& h, ValidationLevel level);

// ---------------------------------------------------------------------------
// Duals and loops

/// Transposes the incidence of a 3-uniform, 3-regular hypergraph: vertex i+1
/// of the result is block i of h, block j of the result lists the blocks that
/// contained the j-th vertex of h.
MmpHypergraph dualize(const MmpHypergraph& h);

/// A loop is a cyclic sequence of distinct blocks b_1..b_n chained through
/// distinct atoms a_i in b_i and b_{i+1}. Returns one loop of exactly the
/// given order (block indices in loop order), or nothing.
std::optional<std::vector<int>> find_loop(const MmpHypergraph& h, int order);

struct LoopReport {
  /// Largest loop whose non-consecutive blocks are disjoint, so every block
  /// adds two fresh atoms to the chain.
  int max_loop_order = 0;
  /// Smallest loop of any kind; empty for loop-free hypergraphs.
  std::optional<int> min_loop_order;
  std::vector<int> witness;      // blocks of a maximum loop, in loop order
  std::vector<int> min_witness;  // blocks of a minimum loop, in loop order
};

LoopReport loop_analysis(const MmpHypergraph& h);

}  // namespace omlkit
