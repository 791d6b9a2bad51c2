#pragma once

// Lattice terms and conditions, their text syntax, the built-in catalogue of
// equations, and exhaustive evaluation in a pasted lattice.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "omlkit/errors.hpp"
#include "omlkit/lattice.hpp"

namespace omlkit {

enum class TermOp { Variable, Zero, One, Ortho, Meet, Join, Sasaki, GodowskiId, OaId };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermOp op = TermOp::Zero;
  std::string name;  // Variable
  int n = 0;         // OaId order
  /// Operands; for GodowskiId / OaId the variable terms a_1..a_n.
  std::vector<TermPtr> args;
};

TermPtr var(std::string name);
TermPtr zero();
TermPtr one();
TermPtr ortho(TermPtr a);
TermPtr meet(TermPtr a, TermPtr b);
TermPtr join(TermPtr a, TermPtr b);
TermPtr sasaki(TermPtr a, TermPtr b);
/// a_1 =γ= a_n: (a_1->a_2) ^ ... ^ (a_{n-1}->a_n) ^ (a_n->a_1).
TermPtr godowski_id(std::vector<TermPtr> vars);
/// a_1 =(n)= a_2 over a_1..a_n, n >= 3.
TermPtr oa_id(int n, std::vector<TermPtr> vars);

/// Replaces GodowskiId and OaId nodes by their definitions.
TermPtr expand(const TermPtr& t);
std::string to_string(const Term& t);
/// Structural equality.
bool same_term(const Term& a, const Term& b);

enum class RelationKind { Leq, Perp, Eq };

struct Relation {
  RelationKind kind = RelationKind::Eq;
  TermPtr lhs, rhs;
};

/// Propositional combination of relations.
struct Formula {
  enum class Kind { Rel, Not, And, Or, Implies };
  Kind kind = Kind::And;  // an empty And is true
  Relation rel;
  std::vector<Formula> args;

  static Formula of(Relation r);
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
};

enum class Sort { Element, Atom };
enum class Quantifier { Forall, Exists };

struct Variable {
  std::string name;
  Sort sort = Sort::Element;
  Quantifier quantifier = Quantifier::Forall;
};

/// Q_1 x_1 ... Q_k x_k (h_1 & ... & h_m => conclusion). Each hypothesis is a
/// relation or a negated relation.
struct Condition {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Formula> hypotheses;
  Formula conclusion;
};

/// Throws PreconditionError if a variable is used without being declared,
/// declared twice, or a hypothesis is not a (negated) relation.
void check_closed(const Condition& c);

std::string to_string(const Condition& c);

/// Text syntax:
///   [A x | E x | A x:atom ...] [hyp & hyp & ... =>] rel [& rel ...]
/// with relations t =< u, t = u, t _|_ u, optionally preceded by ~, and
/// terms built from identifiers, 0, 1, postfix ', ^ (meet), v (join) and
/// -> (Sasaki implication, right associative); ^ binds tighter than v,
/// which binds tighter than ->. Undeclared variables are universally
/// quantified over all elements, outermost, in order of appearance.
Condition parse_condition(const std::string& text);

/// Names: oml, modular, distributive, noa(n) (also noaN, n >= 3),
/// godowski(n) (also godowskiN), newst1d, e3, e4, oa3_split (3OA with
/// a _|_ b & q _|_ n hypotheses), superposition (atom form) and
/// superposition_prenex (the literal prenex form over all elements).
Condition builtin(const std::string& name);
std::vector<std::string> builtin_names();

enum class Verdict { Holds, Fails };

struct Binding {
  std::string variable;
  Oml::Id element = 0;
  std::string element_name;
};

struct CheckResult {
  Verdict verdict = Verdict::Holds;
  /// Values of the outer universal variables (declaration order).
  std::vector<Binding> counterexample;
  std::uint64_t tuples_examined = 0;
};

struct EvalOptions {
  std::uint64_t tuple_budget = 0;  // 0 = unlimited
  int threads = 1;
  /// Skip this many candidates of the first enumerated variable (resume).
  std::size_t resume_from = 0;
};

class EvaluationInterrupted : public BudgetExceeded {
 public:
  EvaluationInterrupted(std::uint64_t tuples, std::size_t resume_from)
      : BudgetExceeded("evaluation budget exhausted"), tuples_(tuples), resume_from_(resume_from) {}
  std::uint64_t tuples_examined() const noexcept { return tuples_; }
  /// Pass as EvalOptions::resume_from to continue.
  std::size_t resume_from() const noexcept { return resume_from_; }

 private:
  std::uint64_t tuples_;
  std::size_t resume_from_;
};

/// Exhaustive evaluation. The leading universal variables are enumerated
/// with the hypotheses as filters, always binding next the variable with
/// the fewest admissible values (ties by declaration order); remaining
/// quantifiers are evaluated by nested enumeration. A reported
/// counterexample is the first one in this enumeration order.
CheckResult evaluate(const Oml& L, const Condition& c, const EvalOptions& opts = {});

/// For all distinct atoms a, b some atom c other than a and b lies below
/// a v b. Counterexample: the pair a, b.
CheckResult check_superposition(const Oml& L);

}  // namespace omlkit
