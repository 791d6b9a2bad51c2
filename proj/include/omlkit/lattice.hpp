#pragma once

// Orthomodular lattices pasted from 3-uniform Greechie diagrams. Every
// element is 0, 1, an atom or the complement of an atom, so the lattice has
// 2n+2 elements and all operations are table lookups.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "omlkit/mmp.hpp"

namespace omlkit {

enum class ElementKind { Zero, One, Atom, Coatom };

struct Element {
  ElementKind kind = ElementKind::Zero;
  int index = -1;  // atom position for Atom / Coatom

  friend bool operator==(const Element&, const Element&) = default;
};

/// Raw operation tables, row-major size x size (ortho and names: size).
struct OmlTables {
  int n_atoms = 0;
  std::vector<std::uint16_t> meet, join, ortho;
  std::vector<std::uint8_t> leq;
};

class Oml {
 public:
  using Id = int;

  /// Tables are taken as given; verify_axioms says whether they form an OML.
  Oml(OmlTables tables, MmpHypergraph source);

  int n_atoms() const noexcept { return n_; }
  int size() const noexcept { return 2 * n_ + 2; }

  static constexpr Id zero() { return 0; }
  static constexpr Id one() { return 1; }
  Id atom(int i) const { return 2 + i; }
  Id coatom(int i) const { return 2 + n_ + i; }
  Element element(Id x) const;
  bool is_atom(Id x) const { return x >= 2 && x < 2 + n_; }

  Id meet(Id a, Id b) const { return t_.meet[static_cast<std::size_t>(a * size() + b)]; }
  Id join(Id a, Id b) const { return t_.join[static_cast<std::size_t>(a * size() + b)]; }
  Id ortho(Id a) const { return t_.ortho[static_cast<std::size_t>(a)]; }
  bool leq(Id a, Id b) const { return t_.leq[static_cast<std::size_t>(a * size() + b)] != 0; }
  bool perp(Id a, Id b) const { return leq(a, ortho(b)); }
  /// a -> b = a' v (a ^ b)
  Id sasaki(Id a, Id b) const { return join(ortho(a), meet(a, b)); }

  /// "0", "1", the atom's MMP label, or the label followed by '.
  std::string name(Id x) const;

  const OmlTables& tables() const noexcept { return t_; }
  const MmpHypergraph& source() const noexcept { return source_; }

 private:
  OmlTables t_;
  MmpHypergraph source_;
  int n_ = 0;
};

/// Requires a connected, 3-uniform hypergraph that passes Greechie
/// validation; throws PreconditionError otherwise.
Oml paste(const MmpHypergraph& h);

struct AxiomReport {
  bool pass = true;
  std::string law;              // failing identity, empty on pass
  std::vector<Oml::Id> witness;  // a, b, c as far as the identity uses them
};

/// Checks the ortholattice identities (commutativity and associativity of
/// join, double complement, a v (b v b') = b v b', absorption, De Morgan),
/// table consistency of the order, and the orthomodular law over all tuples.
AxiomReport verify_axioms(const Oml& L);

/// {"atoms": n, "elements": [names], "order": [[i, j], ...]} where the
/// order lists every pair with elements[i] <= elements[j].
nlohmann::json to_json(const Oml& L);

}  // namespace omlkit
