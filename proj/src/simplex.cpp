#include "omlkit/simplex.hpp"

#include <utility>

#include "omlkit/errors.hpp"

namespace omlkit {

void LinearProgram::add_equality(std::vector<mpq_class> row, mpq_class rhs) {
  if (static_cast<int>(row.size()) != n_) throw PreconditionError("constraint width does not match the variable count");
  rows_.push_back(std::move(row));
  rhs_.push_back(std::move(rhs));
}

void LinearProgram::fix(int j, const mpq_class& value) {
  std::vector<mpq_class> row(static_cast<std::size_t>(n_));
  row[static_cast<std::size_t>(j)] = 1;
  add_equality(std::move(row), value);
}

namespace {

class Tableau {
 public:
  // Rows: constraints, then the objective (reduced costs, -value in the
  // last column).
  std::vector<std::vector<mpq_class>> t;
  std::vector<int> basis;
  int cols = 0;  // structural + artificial columns (rhs excluded)

  int m() const { return static_cast<int>(basis.size()); }
  mpq_class& rhs(int i) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)]; }
  std::vector<mpq_class>& obj() { return t.back(); }

  void pivot(int r, int c) {
    auto& pr = t[static_cast<std::size_t>(r)];
    const mpq_class p = pr[static_cast<std::size_t>(c)];
    for (auto& v : pr)
      if (sgn(v) != 0) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      auto& row = t[i];
      const mpq_class f = row[static_cast<std::size_t>(c)];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (sgn(pr[j]) != 0) row[j] -= f * pr[j];
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Bland's rule over columns < limit. Returns false when unbounded.
  bool optimize(int limit) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (sgn(obj()[static_cast<std::size_t>(j)]) < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      mpq_class best;
      for (int i = 0; i < m(); ++i) {
        const mpq_class& a = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (sgn(a) <= 0) continue;
        mpq_class ratio = rhs(i) / a;
        if (leave < 0 || ratio < best || (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult LinearProgram::minimize(const std::vector<mpq_class>& c) const {
  if (static_cast<int>(c.size()) != n_) throw PreconditionError("objective width does not match the variable count");
  const int m = static_cast<int>(rows_.size());
  Tableau tb;
  tb.cols = n_ + m;
  tb.t.assign(static_cast<std::size_t>(m + 1), std::vector<mpq_class>(static_cast<std::size_t>(tb.cols + 1)));
  tb.basis.assign(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    auto& row = tb.t[static_cast<std::size_t>(i)];
    const bool flip = sgn(rhs_[static_cast<std::size_t>(i)]) < 0;
    for (int j = 0; j < n_; ++j) row[static_cast<std::size_t>(j)] = flip ? -rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] : rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(n_ + i)] = 1;
    tb.rhs(i) = flip ? -rhs_[static_cast<std::size_t>(i)] : rhs_[static_cast<std::size_t>(i)];
    tb.basis[static_cast<std::size_t>(i)] = n_ + i;
  }
  // Phase 1: minimize the sum of artificials.
  auto& ob = tb.obj();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= tb.cols; ++j)
      if (j < n_ || j == tb.cols) ob[static_cast<std::size_t>(j)] -= tb.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  tb.optimize(tb.cols);
  LpResult res;
  if (sgn(tb.obj()[static_cast<std::size_t>(tb.cols)]) != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive artificials out of the basis; rows where that is impossible are
  // redundant.
  for (int i = 0; i < tb.m();) {
    if (tb.basis[static_cast<std::size_t>(i)] < n_) {
      ++i;
      continue;
    }
    int j = 0;
    while (j < n_ && sgn(tb.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) == 0) ++j;
    if (j < n_) {
      tb.pivot(i, j);
      ++i;
    } else {
      tb.t.erase(tb.t.begin() + i);
      tb.basis.erase(tb.basis.begin() + i);
    }
  }
  // Phase 2 reduced costs.
  auto& o2 = tb.obj();
  for (auto& v : o2) v = 0;
  for (int j = 0; j < n_; ++j) o2[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  for (int i = 0; i < tb.m(); ++i) {
    const mpq_class& cb = c[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])];
    if (sgn(cb) == 0) continue;
    const auto& row = tb.t[static_cast<std::size_t>(i)];
    for (int j = 0; j <= tb.cols; ++j)
      if (j < n_ || j == tb.cols) o2[static_cast<std::size_t>(j)] -= cb * row[static_cast<std::size_t>(j)];
  }
  if (!tb.optimize(n_)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x.assign(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < tb.m(); ++i) res.x[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])] = tb.rhs(i);
  res.value = 0;
  for (int j = 0; j < n_; ++j) res.value += c[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
  return res;
}

LpResult LinearProgram::maximize(const std::vector<mpq_class>& c) const {
  std::vector<mpq_class> neg(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
  LpResult r = minimize(neg);
  r.value = -r.value;
  return r;
}

int rank(std::vector<std::vector<mpq_class>> m) {
  int r = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    std::size_t p = static_cast<std::size_t>(r);
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[static_cast<std::size_t>(r)]);
    const auto& pr = m[static_cast<std::size_t>(r)];
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < m.size(); ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const mpq_class f = m[i][c] / pr[c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * pr[j];
    }
    ++r;
  }
  return r;
}

}  // namespace omlkit
