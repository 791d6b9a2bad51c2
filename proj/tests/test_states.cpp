#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "omlkit/bigraph.hpp"
#include "omlkit/errors.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/states.hpp"

using namespace omlkit;

namespace {

// Every 0/1 assignment with exactly one 1 per block.
std::vector<std::vector<int>> all_colorings(const MmpHypergraph& h) {
  const int n = static_cast<int>(h.vertex_count());
  const auto pb = h.position_blocks();
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (const auto& b : pb) {
      int ones = 0;
      for (int a : b) ones += (mask >> a) & 1u;
      if (ones != 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1u);
    out.push_back(v);
  }
  return out;
}

// Rank of the block incidence matrix over Q.
int block_rank(const MmpHypergraph& h) {
  const int n = static_cast<int>(h.vertex_count());
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& b : h.position_blocks()) {
    std::vector<mpq_class> r(static_cast<std::size_t>(n), 0);
    for (int a : b) r[static_cast<std::size_t>(a)] = 1;
    rows.push_back(r);
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][static_cast<std::size_t>(col)] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][static_cast<std::size_t>(col)] == 0) continue;
      const mpq_class f = rows[r][static_cast<std::size_t>(col)] / rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
      for (int k = 0; k < n; ++k) rows[r][static_cast<std::size_t>(k)] -= f * rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k)];
    }
    ++rank;
  }
  return rank;
}

// Value of a lattice element under an atom assignment.
int value01(const Oml& L, const std::vector<int>& v, int x) {
  if (x == Oml::zero()) return 0;
  if (x == Oml::one()) return 1;
  if (L.is_atom(x)) return v[static_cast<std::size_t>(x - 2)];
  return 1 - v[static_cast<std::size_t>(x - 2 - L.n_atoms())];
}

std::vector<MmpHypergraph> small_cases() {
  std::vector<MmpHypergraph> out;
  for (const auto& h : generate_greechie_small(5)) out.push_back(h);
  out.push_back(fixtures::get("pentagon"));
  out.push_back(fixtures::get("bub-fragment"));
  return out;
}

}  // namespace

TEST_CASE("coloring search agrees with enumeration, with and without pins") {
  std::mt19937_64 rng(5);
  for (const auto& h : small_cases()) {
    CAPTURE(serialize_mmp(h));
    const auto all = all_colorings(h);
    const auto c = two_valued_coloring(h);
    CHECK(c.has_value() == !all.empty());
    if (c) CHECK(std::find(all.begin(), all.end(), *c) != all.end());
    const int n = static_cast<int>(h.vertex_count());
    for (int k = 0; k < 20; ++k) {
      std::vector<int> pins(static_cast<std::size_t>(n), -1);
      for (int i = 0; i < n; ++i)
        if (rng() % 4 == 0) pins[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
      bool expect = false;
      for (const auto& v : all) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
          ok = pins[static_cast<std::size_t>(i)] < 0 || pins[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(i)];
        expect = expect || ok;
      }
      const auto p = two_valued_coloring(h, pins);
      CHECK(p.has_value() == expect);
      if (p)
        for (int i = 0; i < n; ++i)
          if (pins[static_cast<std::size_t>(i)] >= 0) CHECK((*p)[static_cast<std::size_t>(i)] == pins[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("state space dimension and the strong classical property") {
  for (const auto& h : small_cases()) {
    CAPTURE(serialize_mmp(h));
    const Oml L = paste(h);
    const auto r = solve_states(L);
    CHECK(r.admits_state);
    REQUIRE(r.witness);
    CHECK(is_state(h, *r.witness));
    // 1/3 on every atom is an interior state, so the polytope spans the
    // whole solution space of the block equations.
    REQUIRE(r.dimension);
    CHECK(*r.dimension == static_cast<int>(h.vertex_count()) - block_rank(h));
    CHECK(count_state_freedom(L) == *r.dimension);
    CHECK(*r.exactly_one == (*r.dimension == 0));

    const auto all = all_colorings(h);
    bool strong = true;
    for (int a = 0; a < L.size() && strong; ++a)
      for (int b = 0; b < L.size() && strong; ++b) {
        if (L.leq(a, b)) continue;
        bool sep = false;
        for (const auto& v : all) sep = sep || (value01(L, v, a) == 1 && value01(L, v, b) == 0);
        strong = sep;
      }
    REQUIRE(r.strong_classical);
    CHECK(*r.strong_classical == strong);
    if (strong) {
      CHECK(*r.strong_quantum);
      CHECK(*r.full_order_determining);
    }
    if (*r.strong_quantum) CHECK(*r.full_order_determining);
  }
}

TEST_CASE("is_state") {
  const auto h = parse_mmp("123,345.");
  const mpq_class third(1, 3), half(1, 2);
  CHECK(is_state(h, {1, 0, 0, 0, 1}));
  CHECK(is_state(h, {third, third, third, third, third}));
  CHECK(is_state(h, {half, half, 0, half, half}));
  CHECK_FALSE(is_state(h, {half, half, 0, half, 0}));
  CHECK_FALSE(is_state(h, {2, -1, 0, 0, 1}));
  CHECK_FALSE(is_state(h, {1, 0, 0, 0}));
}

TEST_CASE("a 39-39 lattice with exactly one state, 1/3 on every atom") {
  const Oml L = paste(fixtures::get("39-39-00"));
  const auto r = solve_states(L);
  CHECK(r.admits_state);
  REQUIRE(r.exactly_one);
  CHECK(*r.exactly_one);
  REQUIRE(r.unique_state);
  for (const auto& q : *r.unique_state) CHECK(q == mpq_class(1, 3));
  CHECK(*r.dimension == 0);
  CHECK_FALSE(*r.strong_quantum);
  CHECK_FALSE(*r.full_order_determining);
  CHECK_FALSE(r.two_valued);
}

TEST_CASE("the Conway-Kochen setup admits no two-valued state") {
  const auto& h = fixtures::get("conway-kochen");
  CHECK_FALSE(two_valued_coloring(h));
  const auto r = solve_states(paste(h), QueryColoring | QueryAdmits);
  CHECK(r.coloring_searched);
  CHECK_FALSE(r.two_valued);
  CHECK(r.admits_state);
}

TEST_CASE("rational strings") {
  CHECK(rational_string(mpq_class(1, 3)) == "1/3");
  CHECK(rational_string(mpq_class(0)) == "0");
  mpq_class two(4, 2);
  two.canonicalize();
  CHECK(rational_string(two) == "2");
  CHECK(rational_string(mpq_class(-2, 3)) == "-2/3");
}
