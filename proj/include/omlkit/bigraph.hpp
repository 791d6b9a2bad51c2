#pragma once

// Cubic bipartite graphs as the incidence graphs of 3-regular, 3-uniform MMP
// hypergraphs: conversion, girth, canonical codes, file formats, and the
// exhaustive girth-constrained generator.

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omlkit/errors.hpp"
#include "omlkit/mmp.hpp"

namespace omlkit {

struct BipartiteGraph {
  int white_count = 0;
  int black_count = 0;
  /// For every white vertex, its sorted black neighbours.
  std::vector<std::vector<int>> adjacency;

  std::vector<std::vector<int>> black_adjacency() const;
  std::size_t edge_count() const;
  bool is_cubic() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;
};

enum class AtomColor { White, Black };

/// White vertices are atoms, black vertices blocks.
BipartiteGraph mmp_to_graph(const MmpHypergraph& h);

/// Reads the vertices of `atom_color` as atoms; atom i becomes vertex i+1.
MmpHypergraph graph_to_mmp(const BipartiteGraph& g, AtomColor atom_color);

/// Length of the shortest cycle, or nothing for a forest.
std::optional<int> girth(const BipartiteGraph& g);

struct CanonicalCode {
  std::string bytes;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
  std::string hex() const;
};

/// With respect_colors the code separates white from black; without it a
/// graph and its colour swap get the same code.
CanonicalCode canonical_code(const BipartiteGraph& g, bool respect_colors);

/// Isomorphism code of an arbitrary hypergraph (vertex and block labels
/// ignored, block order ignored).
CanonicalCode mmp_canonical_code(const MmpHypergraph& h);
bool mmp_isomorphic(const MmpHypergraph& a, const MmpHypergraph& b);

// ---------------------------------------------------------------------------
// Formats

/// "white black" header, then one line of black neighbours per white vertex.
std::string write_graph(const BipartiteGraph& g);
BipartiteGraph read_graph(std::istream& in);
std::vector<BipartiteGraph> read_graphs(std::istream& in);

/// graph6, whites first (vertex i = white i, vertex W+j = black j).
std::string to_graph6(const BipartiteGraph& g);
/// Needs the white count because graph6 carries no colouring.
BipartiteGraph from_graph6(const std::string& line, int white_count);

// ---------------------------------------------------------------------------
// Generation

struct Shard {
  int index = 0;
  int count = 1;
  int depth = 6;  // search depth at which subtrees are dealt out
};

struct GenerationJob {
  int white_count = 0;
  int min_girth = 10;
  std::optional<Shard> shard;
  std::uint64_t node_budget = 0;   // 0 = unlimited
  double seconds_budget = 0;       // 0 = unlimited
  /// Partial configurations with at most this many edges are checked
  /// against already finished ones. -1 picks the default (78), 0 disables.
  int explored_rejection_edges = -1;
  /// Child-index path from a previous BudgetExceeded; the search restarts
  /// there.
  std::vector<int> resume;
  /// Optional progress sink, called with the running node count.
  std::function<void(std::uint64_t)> progress;
};

struct GenerationStats {
  std::uint64_t nodes = 0;
  std::uint64_t complete = 0;  // completed graphs before deduplication
  std::uint64_t rejected_explored = 0;
  std::uint64_t shard_nodes = 0;  // nodes at shard depth (all shards)
};

struct GenerationResult {
  /// One graph per colour-preserving class (equivalently, per MMP
  /// hypergraph up to isomorphism), sorted by canonical code.
  std::vector<BipartiteGraph> graphs;
  std::vector<CanonicalCode> codes;
  /// Number of classes when colours may be swapped.
  std::size_t uncolored_classes = 0;
  GenerationStats stats;
};

/// Thrown when a budget runs out. The graphs found so far are kept, and
/// `resume` continues the same job.
class GenerationInterrupted : public BudgetExceeded {
 public:
  GenerationInterrupted(GenerationResult partial, std::vector<int> resume)
      : BudgetExceeded("generation budget exhausted"), partial_(std::move(partial)), resume_(std::move(resume)) {}

  const GenerationResult& partial() const noexcept { return partial_; }
  const std::vector<int>& resume() const noexcept { return resume_; }

 private:
  GenerationResult partial_;
  std::vector<int> resume_;
};

/// All connected cubic bipartite graphs with white_count vertices per colour
/// and girth >= min_girth.
GenerationResult generate(const GenerationJob& job);

/// Merges shard results: union by code, recomputing the uncoloured count.
GenerationResult merge_results(const std::vector<GenerationResult>& parts);

/// Connected hypergraphs with 3-atom blocks, blocks pairwise sharing at most
/// one atom and no loops of order below 5, with 1..max_blocks blocks; one per
/// isomorphism class, ordered by block count.
std::vector<MmpHypergraph> generate_greechie_small(int max_blocks, int block_size = 3);

}  // namespace omlkit
