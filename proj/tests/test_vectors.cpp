#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "omlkit/errors.hpp"
#include "omlkit/vectors.hpp"

using namespace omlkit;

namespace {

using Row = std::array<mpq_class, 3>;

int rank_of(std::vector<Row> rows) {
  int rank = 0;
  for (int col = 0; col < 3; ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][static_cast<std::size_t>(col)] == 0) ++piv;
    if (piv >= rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][static_cast<std::size_t>(col)] == 0) continue;
      const mpq_class f = rows[r][static_cast<std::size_t>(col)] / rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
      for (int k = 0; k < 3; ++k) rows[r][static_cast<std::size_t>(k)] -= f * rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k)];
    }
    ++rank;
  }
  return rank;
}

Row row(const Vec3Q& v) { return {mpq_class(v.x()), mpq_class(v.y()), mpq_class(v.z())}; }

// Spanning vectors of a subspace, from its own description.
std::vector<Row> basis(const Subspace3& s) {
  switch (s.kind) {
    case Subspace3::Kind::Zero: return {};
    case Subspace3::Kind::Line: return {row(s.v)};
    case Subspace3::Kind::Full: return {Row{1, 0, 0}, Row{0, 1, 0}, Row{0, 0, 1}};
    case Subspace3::Kind::Plane: {
      // Two independent vectors orthogonal to the normal.
      std::vector<Row> out;
      for (const auto& e : {Vec3Q(1, 0, 0), Vec3Q(0, 1, 0), Vec3Q(0, 0, 1)}) {
        const Vec3Q c = cross(s.v, e);
        if (c.is_zero()) continue;
        auto trial = out;
        trial.push_back(row(c));
        if (rank_of(trial) > static_cast<int>(out.size())) out = trial;
      }
      return out;
    }
  }
  return {};
}

bool contains(const Subspace3& s, const Row& r) {
  auto b = basis(s);
  const int before = rank_of(b);
  b.push_back(r);
  return rank_of(b) == before;
}

Subspace3 random_subspace(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c(-3, 3);
  const Vec3Q v(c(rng), c(rng), c(rng));
  switch (rng() % 5) {
    case 0: return zero_space();
    case 1: return full_space();
    case 2:
    case 3: return span(v);
    default: return v.is_zero() ? zero_space() : plane(v);
  }
}

}  // namespace

TEST_CASE("normal form") {
  CHECK(Vec3Q(2, -4, 6) == Vec3Q(1, -2, 3));
  CHECK(Vec3Q(-2, 4, -6) == Vec3Q(1, -2, 3));
  CHECK(Vec3Q(0, -3, 0) == Vec3Q(0, 1, 0));
  CHECK(Vec3Q(mpq_class(1, 2), mpq_class(1, 3), 0) == Vec3Q(3, 2, 0));
  CHECK(Vec3Q(0, 0, 0).is_zero());
  CHECK(Vec3Q(1, -2, 3).str() == "{1,-2,3}");
  CHECK(dot(Vec3Q(1, 2, 3), Vec3Q(3, 0, -1)) == 0);
  CHECK(cross(Vec3Q(1, 0, 0), Vec3Q(0, 1, 0)) == Vec3Q(0, 0, 1));
}

TEST_CASE("subspace operations against rank computations") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Subspace3 s = random_subspace(rng), t = random_subspace(rng);
    const auto bs = basis(s), bt = basis(t);
    CHECK(s.dim() == rank_of(bs));
    auto both = bs;
    both.insert(both.end(), bt.begin(), bt.end());
    const Subspace3 u = sum(s, t);
    CHECK(u.dim() == rank_of(both));
    for (const auto& r : both) CHECK(contains(u, r));
    const Subspace3 m = intersect(s, t);
    CHECK(m.dim() == s.dim() + t.dim() - u.dim());
    for (const auto& r : basis(m)) {
      CHECK(contains(s, r));
      CHECK(contains(t, r));
    }
    const Subspace3 p = perp(s);
    CHECK(p.dim() == 3 - s.dim());
    for (const auto& a : basis(p))
      for (const auto& b : bs) CHECK(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] == 0);
    CHECK(perp(p) == s);
    bool inside = true;
    for (const auto& r : bs) inside = inside && contains(t, r);
    CHECK(leq(s, t) == inside);
  }
  CHECK_THROWS_AS(plane(Vec3Q(0, 0, 0)), PreconditionError);
  CHECK(span(Vec3Q(0, 0, 0)) == zero_space());
}

TEST_CASE("orthoarguesian inclusion holds for random orthogonal quadruples") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-3, 3);
  int checked = 0;
  while (checked < 1000) {
    std::vector<Subspace3> M, N;
    for (int i = 0; i < 2; ++i) {
      const Vec3Q v(c(rng), c(rng), c(rng));
      if (v.is_zero()) break;
      // M_i a line, N_i a subspace of its orthogonal plane.
      M.push_back(span(v));
      switch (rng() % 3) {
        case 0: N.push_back(plane(v)); break;
        case 1: {
          const Vec3Q w = cross(v, Vec3Q(c(rng), c(rng), c(rng)));
          N.push_back(span(w));
          break;
        }
        default: N.push_back(zero_space());
      }
      if (rng() % 2) std::swap(M.back(), N.back());
    }
    if (M.size() != 2) continue;
    const auto r = check_noa_subspace(1, M, N);
    CHECK(r.holds);
    CHECK(leq(r.lhs, r.rhs) == r.holds);
    ++checked;
  }
  CHECK_THROWS_AS(check_noa_subspace(1, {span(Vec3Q(1, 0, 0))}, {span(Vec3Q(0, 1, 0))}), PreconditionError);
  CHECK_THROWS_AS(check_noa_subspace(0, {span(Vec3Q(1, 0, 0))}, {span(Vec3Q(1, 1, 0))}), PreconditionError);
}

TEST_CASE("the Bub quadruple") {
  const std::vector<Subspace3> M{span(Vec3Q(0, 0, 1)), span(Vec3Q(1, -2, -1))};
  const std::vector<Subspace3> N{span(Vec3Q(1, 0, 0)), span(Vec3Q(1, 1, -1))};
  const auto r = check_noa_subspace(1, M, N);
  CHECK(r.holds);
  CHECK(r.lhs == span(Vec3Q(1, 0, -1)));
  CHECK(r.rhs == plane(Vec3Q(0, 1, 0)));
  CHECK(r.trace.back().first == "rhs");
}

TEST_CASE("higher orders on random lines") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> c(-2, 2);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 100; ++k) {
      std::vector<Subspace3> M, N;
      while (static_cast<int>(M.size()) <= n) {
        const Vec3Q v(c(rng), c(rng), c(rng));
        const Vec3Q w = cross(v, Vec3Q(c(rng), c(rng), c(rng)));
        if (v.is_zero() || w.is_zero()) continue;
        M.push_back(span(v));
        N.push_back(span(w));
      }
      CHECK(check_noa_subspace(n, M, N).holds);
    }
  }
}

TEST_CASE("vectorfind on stars and short chains") {
  const auto star = fixtures::get("star-4");
  const auto a = vectorfind(star);
  REQUIRE(a);
  CHECK(is_realization(star, *a));
  CHECK((*a)[0] == Vec3Q(0, 0, 1));
  CHECK((*a)[1] == Vec3Q(0, 1, 0));
  CHECK((*a)[2] == Vec3Q(1, 0, 0));

  const auto chain = fixtures::get("smallest-nonmodular");
  const auto b = vectorfind(chain);
  REQUIRE(b);
  CHECK(is_realization(chain, *b));

  for (const char* name : {"star-1", "star-2", "star-3", "pentagon", "bub-fragment"}) {
    CAPTURE(name);
    const auto& h = fixtures::get(name);
    const auto r = vectorfind(h);
    REQUIRE(r);
    CHECK(is_realization(h, *r));
    CHECK(to_json(h, *r).size() == h.vertex_count());
  }
}

TEST_CASE("realization checks") {
  const auto h = parse_mmp("123.");
  CHECK(is_realization(h, {Vec3Q(1, 0, 0), Vec3Q(0, 1, 0), Vec3Q(0, 0, 1)}));
  CHECK_FALSE(is_realization(h, {Vec3Q(1, 0, 0), Vec3Q(1, 1, 0), Vec3Q(0, 0, 1)}));
  CHECK_FALSE(is_realization(parse_mmp("123,145."),
                             {Vec3Q(1, 0, 0), Vec3Q(0, 1, 0), Vec3Q(0, 0, 1), Vec3Q(0, 1, 0), Vec3Q(0, 0, 1)}));
}

TEST_CASE("a node budget stops the search") {
  VectorfindOptions opts;
  opts.components = {-1, 0, 1};
  opts.node_budget = 10;
  CHECK_THROWS_AS(vectorfind(fixtures::get("39-39-00"), opts), BudgetExceeded);
}
