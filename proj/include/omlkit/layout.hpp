#pragma once

// Separate-level drawing of hypergraphs with as many blocks as atoms:
// independent blocks on a polygon, free atoms on an inner ring, and the
// remaining blocks split into three levels of cycles and sequences.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "omlkit/mmp.hpp"

namespace omlkit {

/// Blocks (indices into h.blocks()) in visiting order. `atoms[k]` is block
/// k's atoms (vertex positions) permuted for drawing: entry atom, middle,
/// exit atom. For connecting blocks the middle one is the free atom.
struct LevelPath {
  std::vector<int> blocks;
  std::vector<std::array<int, 3>> atoms;
  bool closed = false;
};

struct LayoutPlan {
  std::vector<int> independent_blocks;  // in drawing order
  std::vector<int> free_atoms;          // vertex positions, in drawing order
  LevelPath level1;                     // empty when there is none
  std::vector<LevelPath> level2;
  std::vector<LevelPath> level3;
  /// For every independent block (same order): outer, middle, inner atom.
  std::vector<std::array<int, 3>> slots;
  std::vector<std::string> diagnostics;
};

/// Every maximum set of pairwise disjoint blocks no three of which meet a
/// common block, each sorted, in lexicographic order. Throws
/// PreconditionError unless h is 3-uniform. node_budget 0 means unlimited;
/// running out throws BudgetExceeded.
std::vector<std::vector<int>> find_independent_sets(const MmpHypergraph& h, std::uint64_t node_budget = 0);

/// Throws PreconditionError when `independent` is not an independent set.
LayoutPlan build_levels(const MmpHypergraph& h, const std::vector<int>& independent);

/// Levels for every maximum independent set; keeps the plan with the
/// shortest first level (closed before open, then the least set).
LayoutPlan plan_layout(const MmpHypergraph& h);

/// Block indices per level; atoms by label.
nlohmann::json to_json(const MmpHypergraph& h, const LayoutPlan& plan);

struct SvgStyle {
  double size = 600;
  bool labels = true;
};

/// Combined view first, then one document per nonempty level.
std::vector<std::string> render_svg(const MmpHypergraph& h, const LayoutPlan& plan, const SvgStyle& style = {});

}  // namespace omlkit
