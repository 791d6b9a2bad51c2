#include "omlkit/lattice.hpp"

#include <utility>

#include "omlkit/errors.hpp"

namespace omlkit {

Oml::Oml(OmlTables tables, MmpHypergraph source) : t_(std::move(tables)), source_(std::move(source)), n_(t_.n_atoms) {
  const auto s = static_cast<std::size_t>(size());
  if (t_.meet.size() != s * s || t_.join.size() != s * s || t_.leq.size() != s * s || t_.ortho.size() != s)
    throw PreconditionError("operation tables do not match the atom count");
}

Element Oml::element(Id x) const {
  if (x == 0) return {ElementKind::Zero, -1};
  if (x == 1) return {ElementKind::One, -1};
  if (x < 2 + n_) return {ElementKind::Atom, x - 2};
  return {ElementKind::Coatom, x - 2 - n_};
}

std::string Oml::name(Id x) const {
  const Element e = element(x);
  switch (e.kind) {
    case ElementKind::Zero:
      return "0";
    case ElementKind::One:
      return "1";
    case ElementKind::Atom:
      return vertex_label(source_.vertices()[static_cast<std::size_t>(e.index)]);
    case ElementKind::Coatom:
      return vertex_label(source_.vertices()[static_cast<std::size_t>(e.index)]) + "'";
  }
  return "?";
}

Oml paste(const MmpHypergraph& h) {
  if (h.block_count() == 0 || !h.is_uniform(3)) throw PreconditionError("paste needs a nonempty 3-uniform hypergraph");
  if (!h.is_connected()) throw PreconditionError("paste needs a connected hypergraph");
  const auto report = validate(h, ValidationLevel::Greechie);
  if (!report.valid) throw PreconditionError("not a Greechie diagram: " + report.violations.front().message);

  const int n = static_cast<int>(h.vertex_count());
  const int size = 2 * n + 2;
  const auto S = static_cast<std::size_t>(size);
  // Orthogonality of atoms = sharing a block.
  std::vector<std::vector<char>> orth(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const auto& b : h.position_blocks())
    for (int x : b)
      for (int y : b)
        if (x != y) orth[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = 1;

  OmlTables t;
  t.n_atoms = n;
  t.meet.assign(S * S, 0);
  t.join.assign(S * S, 0);
  t.leq.assign(S * S, 0);
  t.ortho.assign(S, 0);
  const auto atom = [](int i) { return 2 + i; };
  const auto coatom = [n](int i) { return 2 + n + i; };
  const auto at = [S](int a, int b) { return static_cast<std::size_t>(a) * S + static_cast<std::size_t>(b); };

  t.ortho[0] = 1;
  t.ortho[1] = 0;
  for (int i = 0; i < n; ++i) {
    t.ortho[static_cast<std::size_t>(atom(i))] = static_cast<std::uint16_t>(coatom(i));
    t.ortho[static_cast<std::size_t>(coatom(i))] = static_cast<std::uint16_t>(atom(i));
  }

  // Order: 0 below everything, 1 above everything, a_i <= a_j' iff the atoms
  // are orthogonal.
  for (int x = 0; x < size; ++x) {
    t.leq[at(0, x)] = 1;
    t.leq[at(x, 1)] = 1;
    t.leq[at(x, x)] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (orth[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) t.leq[at(atom(i), coatom(j))] = 1;

  // Meet: the greatest common lower bound. Below a coatom a_j' lie 0, a_j'
  // and the atoms orthogonal to a_j; two coatoms therefore meet in their
  // common orthogonal atom, which is unique without loops of order 3.
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y) {
      int m;
      if (t.leq[at(x, y)])
        m = x;
      else if (t.leq[at(y, x)])
        m = y;
      else if (x >= 2 + n && y >= 2 + n) {
        const int i = x - 2 - n, j = y - 2 - n;
        m = 0;
        int found = 0;
        for (int k = 0; k < n; ++k)
          if (orth[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
              orth[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) {
            m = atom(k);
            ++found;
          }
        if (found > 1)
          throw PreconditionError("atoms " + vertex_label(h.vertices()[static_cast<std::size_t>(i)]) + " and " +
                                  vertex_label(h.vertices()[static_cast<std::size_t>(j)]) +
                                  " have more than one common orthogonal atom");
      } else {
        m = 0;
      }
      t.meet[at(x, y)] = static_cast<std::uint16_t>(m);
    }
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y)
      t.join[at(x, y)] = t.ortho[t.meet[at(t.ortho[static_cast<std::size_t>(x)], t.ortho[static_cast<std::size_t>(y)])]];
  return Oml(std::move(t), h);
}

AxiomReport verify_axioms(const Oml& L) {
  const int s = L.size();
  const auto fail = [](std::string law, std::vector<int> w) { return AxiomReport{false, std::move(law), std::move(w)}; };
  for (int a = 0; a < s; ++a) {
    if (L.ortho(L.ortho(a)) != a) return fail("a'' = a", {a});
    for (int b = 0; b < s; ++b) {
      if (L.join(a, b) != L.join(b, a)) return fail("a v b = b v a", {a, b});
      const int bb = L.join(b, L.ortho(b));
      if (L.join(a, bb) != bb) return fail("a v (b v b') = b v b'", {a, b});
      if (L.join(a, L.meet(a, b)) != a) return fail("a v (a ^ b) = a", {a, b});
      if (L.meet(a, b) != L.ortho(L.join(L.ortho(a), L.ortho(b)))) return fail("a ^ b = (a' v b')'", {a, b});
      const bool le = L.leq(a, b);
      if (le != (L.meet(a, b) == a) || le != (L.join(a, b) == b)) return fail("a =< b iff a ^ b = a iff a v b = b", {a, b});
      for (int c = 0; c < s; ++c)
        if (L.join(L.join(a, b), c) != L.join(a, L.join(b, c))) return fail("(a v b) v c = a v (b v c)", {a, b, c});
    }
  }
  for (int a = 0; a < s; ++a) {
    const int na = L.ortho(a);
    for (int b = 0; b < s; ++b) {
      if (!L.leq(b, a)) continue;
      for (int c = 0; c < s; ++c) {
        if (!L.leq(c, na)) continue;
        if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)))
          return fail("b =< a & c =< a' => a ^ (b v c) = (a ^ b) v (a ^ c)", {a, b, c});
      }
    }
  }
  return {};
}

nlohmann::json to_json(const Oml& L) {
  nlohmann::json elements = nlohmann::json::array();
  nlohmann::json order = nlohmann::json::array();
  for (int x = 0; x < L.size(); ++x) {
    elements.push_back(L.name(x));
    for (int y = 0; y < L.size(); ++y)
      if (L.leq(x, y)) order.push_back({x, y});
  }
  return {{"atoms", L.n_atoms()}, {"elements", std::move(elements)}, {"order", std::move(order)}};
}

}  // namespace omlkit
