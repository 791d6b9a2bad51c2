#pragma once

// Exact linear programming over the rationals: two-phase primal simplex
// with Bland's rule on a dense tableau.

#include <vector>

#include <gmpxx.h>

namespace omlkit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  mpq_class value;              // objective at the optimum
  std::vector<mpq_class> x;     // an optimal vertex
};

/// minimize c.x subject to A x = b, x >= 0.
class LinearProgram {
 public:
  explicit LinearProgram(int variables) : n_(variables) {}

  int variables() const { return n_; }
  void add_equality(std::vector<mpq_class> row, mpq_class rhs);
  /// Fixes x_j = value.
  void fix(int j, const mpq_class& value);

  LpResult minimize(const std::vector<mpq_class>& c) const;
  LpResult maximize(const std::vector<mpq_class>& c) const;

 private:
  int n_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<mpq_class> rhs_;
};

/// Rank of a rational matrix (Gaussian elimination).
int rank(std::vector<std::vector<mpq_class>> m);

}  // namespace omlkit
