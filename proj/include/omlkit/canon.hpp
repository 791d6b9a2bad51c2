#pragma once

// Canonical labeling of small vertex-colored graphs by individualization and
// refinement. Sized for the graphs in this library (a few hundred vertices).

#include <string>
#include <vector>

namespace omlkit {

struct ColoredGraph {
  std::vector<std::vector<int>> adj;  // undirected, each edge listed from both ends
  std::vector<int> color;             // initial cells, ordered by value

  int size() const { return static_cast<int>(adj.size()); }
};

struct CanonicalLabeling {
  /// position[v] is the canonical index of vertex v.
  std::vector<int> position;
  /// Equal for two graphs iff a color-value-preserving isomorphism exists.
  std::string certificate;
  /// Automorphisms met during the search, as vertex -> vertex maps.
  std::vector<std::vector<int>> generators;
};

CanonicalLabeling canonical_labeling(const ColoredGraph& g);

/// Certificate with the same equality semantics as canonical_labeling, but
/// computed after stripping hanging trees (rounds of removing degree-1
/// vertices) into colour labels. Much cheaper on graphs with large pendant
/// forests.
std::string tree_reduced_certificate(const ColoredGraph& g);

/// Orbit representative (smallest member) of every vertex under the group
/// generated by `generators`.
std::vector<int> orbit_representatives(const std::vector<std::vector<int>>& generators, int n);

}  // namespace omlkit
