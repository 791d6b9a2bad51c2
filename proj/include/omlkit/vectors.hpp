#pragma once

// Exact 3-dim vectors and subspaces: vector realizations of Greechie
// diagrams and the subspace form of the orthoarguesian inclusion.

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "omlkit/mmp.hpp"

namespace omlkit {

/// Projective vector with coprime integer coordinates whose first nonzero
/// coordinate is positive. The zero vector is representable (is_zero) but
/// never names a line.
class Vec3Q {
 public:
  Vec3Q() = default;
  Vec3Q(mpz_class x, mpz_class y, mpz_class z);
  Vec3Q(const mpq_class& x, const mpq_class& y, const mpq_class& z);
  Vec3Q(long x, long y, long z) : Vec3Q(mpz_class(x), mpz_class(y), mpz_class(z)) {}

  const mpz_class& x() const { return c_[0]; }
  const mpz_class& y() const { return c_[1]; }
  const mpz_class& z() const { return c_[2]; }
  const mpz_class& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  bool is_zero() const { return sgn(c_[0]) == 0 && sgn(c_[1]) == 0 && sgn(c_[2]) == 0; }
  std::string str() const;  // "{x,y,z}"

  friend bool operator==(const Vec3Q& a, const Vec3Q& b) { return a.c_[0] == b.c_[0] && a.c_[1] == b.c_[1] && a.c_[2] == b.c_[2]; }
  friend bool operator<(const Vec3Q& a, const Vec3Q& b);

 private:
  mpz_class c_[3];
};

mpz_class dot(const Vec3Q& a, const Vec3Q& b);
Vec3Q cross(const Vec3Q& a, const Vec3Q& b);

struct Subspace3 {
  enum class Kind { Zero, Line, Plane, Full };
  Kind kind = Kind::Zero;
  Vec3Q v;  // direction of a line, normal of a plane

  int dim() const;
  std::string str() const;
  friend bool operator==(const Subspace3&, const Subspace3&) = default;
};

Subspace3 zero_space();
Subspace3 full_space();
Subspace3 span(const Vec3Q& v);  // Zero for the zero vector
Subspace3 plane(const Vec3Q& normal);
Subspace3 sum(const Subspace3& s, const Subspace3& t);
Subspace3 intersect(const Subspace3& s, const Subspace3& t);
Subspace3 perp(const Subspace3& s);
bool leq(const Subspace3& s, const Subspace3& t);

/// Atom position -> vector.
using VectorAssignment = std::vector<Vec3Q>;

struct VectorfindOptions {
  std::vector<long> components{-2, -1, 0, 1, 2};
  std::uint64_t node_budget = 0;  // 0 = unlimited
};

/// Orthogonal triples for every block: blocks are handled in order, each
/// block after the first sharing an atom with those already placed when
/// possible. Two atoms of a block come from the component set (tried in
/// increasing lexicographic order of their normal form) or from earlier
/// blocks; the third is their cross product. The first block is the
/// standard basis (third, second, first unit vector) when the components
/// allow it. Distinct atoms get projectively distinct vectors.
std::optional<VectorAssignment> vectorfind(const MmpHypergraph& h, const VectorfindOptions& opts = {});

/// Block orthogonality and distinctness.
bool is_realization(const MmpHypergraph& h, const VectorAssignment& a);

nlohmann::json to_json(const MmpHypergraph& h, const VectorAssignment& a);

struct NoaSubspaceResult {
  bool holds = false;
  Subspace3 lhs, rhs;
  /// Every T_m(...) computed, labelled like "T2(0,1,2)", then "lhs", "rhs".
  std::vector<std::pair<std::string, Subspace3>> trace;
};

/// (M_0+N_0) ^ ... ^ (M_n+N_n) <= N_0 + (M_0 ^ (M_1 + T_n(0..n))) with
/// T_1(i,j) = (M_i+M_j) ^ (N_i+N_j) and
/// T_m(i_0..i_m) = T_{m-1}(i_0,i_1,i_3..i_m) ^ (T_{m-1}(i_0,i_2,i_3..i_m) + T_{m-1}(i_1,i_2,i_3..i_m)).
/// Throws PreconditionError unless |M| = |N| = n+1 and M_i _|_ N_i.
NoaSubspaceResult check_noa_subspace(int n, const std::vector<Subspace3>& M, const std::vector<Subspace3>& N);

}  // namespace omlkit
