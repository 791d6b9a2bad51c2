#pragma once

// States on pasted lattices, decided with exact rational LPs over the atom
// values (one equation m(a)+m(b)+m(c)=1 per block), and two-valued
// (Kochen-Specker) colourings.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "omlkit/lattice.hpp"
#include "omlkit/mmp.hpp"

namespace omlkit {

/// Value of every atom, in vertex order; extends to the lattice by
/// m(0)=0, m(1)=1, m(a')=1-m(a).
using StateSolution = std::vector<mpq_class>;

enum StateQuery : unsigned {
  QueryAdmits = 1u << 0,
  QueryUnique = 1u << 1,  // exactly_one, unique_state, dimension
  QueryStrong = 1u << 2,  // strong_quantum
  QueryClassical = 1u << 3,
  QueryOrder = 1u << 4,  // full_order_determining
  QueryColoring = 1u << 5,
  QueryAll = 0x3f,
};

/// A pair a, b with a not below b and no state of the required kind:
/// for strong sets, none with m(a)=1 and m(b)<1 (pin_infeasible when no
/// state has m(a)=1 at all, otherwise min m(b) = 1); for the order, none
/// with m(a) > m(b).
struct PairFailure {
  Oml::Id a = 0, b = 0;
  bool pin_infeasible = false;
  mpq_class optimum;
};

struct StateClassReport {
  bool admits_state = false;
  std::optional<bool> exactly_one;
  std::optional<StateSolution> unique_state;
  std::optional<int> dimension;
  std::optional<bool> strong_quantum;
  std::vector<PairFailure> strong_failures;
  /// The two-valued states form a strong set: every a not below b is
  /// separated by a 0/1 state with m(a)=1, m(b)=0.
  std::optional<bool> strong_classical;
  std::optional<PairFailure> classical_failure;
  /// (for all m: m(a) <= m(b)) implies a <= b.
  std::optional<bool> full_order_determining;
  std::optional<PairFailure> order_failure;
  bool coloring_searched = false;
  std::optional<std::vector<int>> two_valued;
  /// Some state, when one exists.
  std::optional<StateSolution> witness;
  std::size_t lps_solved = 0;
};

struct StateOptions {
  int threads = 1;
};

StateClassReport solve_states(const Oml& L, unsigned queries = QueryAll, const StateOptions& opts = {});

/// Affine dimension of the state polytope; throws PreconditionError when
/// there is no state.
int count_state_freedom(const Oml& L);

/// 0/1 values with exactly one 1 per block, or nothing when none exist.
/// `pins` holds required values (-1 for free), indexed by vertex position.
std::optional<std::vector<int>> two_valued_coloring(const MmpHypergraph& h, const std::vector<int>& pins = {});

/// Exact check that every block sums to 1 and values lie in [0,1].
bool is_state(const MmpHypergraph& h, const StateSolution& s);

std::string rational_string(const mpq_class& q);
nlohmann::json to_json(const StateClassReport& r, const Oml& L);

}  // namespace omlkit
