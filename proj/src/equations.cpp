#include "omlkit/equations.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace omlkit {

// ---------------------------------------------------------------------------
// Terms

namespace {

TermPtr make(TermOp op, std::vector<TermPtr> args = {}) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->args = std::move(args);
  return t;
}

}  // namespace

TermPtr var(std::string name) {
  auto t = std::make_shared<Term>();
  t->op = TermOp::Variable;
  t->name = std::move(name);
  return t;
}
TermPtr zero() { return make(TermOp::Zero); }
TermPtr one() { return make(TermOp::One); }
TermPtr ortho(TermPtr a) { return make(TermOp::Ortho, {std::move(a)}); }
TermPtr meet(TermPtr a, TermPtr b) { return make(TermOp::Meet, {std::move(a), std::move(b)}); }
TermPtr join(TermPtr a, TermPtr b) { return make(TermOp::Join, {std::move(a), std::move(b)}); }
TermPtr sasaki(TermPtr a, TermPtr b) { return make(TermOp::Sasaki, {std::move(a), std::move(b)}); }

TermPtr godowski_id(std::vector<TermPtr> vars) {
  if (vars.size() < 3) throw PreconditionError("the Godowski identity needs at least 3 variables");
  return make(TermOp::GodowskiId, std::move(vars));
}

TermPtr oa_id(int n, std::vector<TermPtr> vars) {
  if (n < 3 || static_cast<int>(vars.size()) != n) throw PreconditionError("oa_id(n) needs n >= 3 and n variables");
  auto t = std::make_shared<Term>();
  t->op = TermOp::OaId;
  t->n = n;
  t->args = std::move(vars);
  return t;
}

namespace {

// x =(k)= y over the extra variables a_3..a_k.
TermPtr oa_op(int k, const TermPtr& x, const TermPtr& y, const std::vector<TermPtr>& a) {
  if (k == 3) {
    const TermPtr& a3 = a[2];
    return join(meet(sasaki(x, a3), sasaki(y, a3)), meet(sasaki(ortho(x), a3), sasaki(ortho(y), a3)));
  }
  const TermPtr& ak = a[static_cast<std::size_t>(k - 1)];
  return join(oa_op(k - 1, x, y, a), meet(oa_op(k - 1, x, ak, a), oa_op(k - 1, y, ak, a)));
}

}  // namespace

TermPtr expand(const TermPtr& t) {
  switch (t->op) {
    case TermOp::Variable:
    case TermOp::Zero:
    case TermOp::One:
      return t;
    case TermOp::GodowskiId: {
      std::vector<TermPtr> v;
      for (const auto& a : t->args) v.push_back(expand(a));
      TermPtr acc;
      for (std::size_t i = 0; i < v.size(); ++i) {
        TermPtr s = sasaki(v[i], v[(i + 1) % v.size()]);
        acc = acc ? meet(acc, s) : s;
      }
      return acc;
    }
    case TermOp::OaId: {
      std::vector<TermPtr> v;
      for (const auto& a : t->args) v.push_back(expand(a));
      return oa_op(t->n, v[0], v[1], v);
    }
    default: {
      std::vector<TermPtr> args;
      for (const auto& a : t->args) args.push_back(expand(a));
      return make(t->op, std::move(args));
    }
  }
}

std::string to_string(const Term& t) {
  const auto list = [&] {
    std::string s;
    for (std::size_t i = 0; i < t.args.size(); ++i) s += (i ? "," : "") + to_string(*t.args[i]);
    return s;
  };
  switch (t.op) {
    case TermOp::Variable:
      return t.name;
    case TermOp::Zero:
      return "0";
    case TermOp::One:
      return "1";
    case TermOp::Ortho: {
      const Term& a = *t.args[0];
      const bool simple = a.op == TermOp::Variable || a.op == TermOp::Zero || a.op == TermOp::One || a.op == TermOp::Ortho;
      return simple ? to_string(a) + "'" : "(" + to_string(a) + ")'";
    }
    case TermOp::Meet:
      return "(" + to_string(*t.args[0]) + " ^ " + to_string(*t.args[1]) + ")";
    case TermOp::Join:
      return "(" + to_string(*t.args[0]) + " v " + to_string(*t.args[1]) + ")";
    case TermOp::Sasaki:
      return "(" + to_string(*t.args[0]) + " -> " + to_string(*t.args[1]) + ")";
    case TermOp::GodowskiId:
      return "gamma(" + list() + ")";
    case TermOp::OaId:
      return "oa" + std::to_string(t.n) + "(" + list() + ")";
  }
  return "?";
}

bool same_term(const Term& a, const Term& b) {
  if (a.op != b.op || a.name != b.name || a.n != b.n || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_term(*a.args[i], *b.args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Formulas and conditions

Formula Formula::of(Relation r) {
  Formula f;
  f.kind = Kind::Rel;
  f.rel = std::move(r);
  return f;
}
Formula Formula::negation(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.args.push_back(std::move(g));
  return f;
}
Formula Formula::conj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::And;
  f.args = std::move(fs);
  return f;
}
Formula Formula::disj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::Or;
  f.args = std::move(fs);
  return f;
}
Formula Formula::implies(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Implies;
  f.args.push_back(std::move(a));
  f.args.push_back(std::move(b));
  return f;
}

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.op == TermOp::Variable) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(*a, out);
}

void collect_vars(const Formula& f, std::vector<std::string>& out) {
  if (f.kind == Formula::Kind::Rel) {
    collect_vars(*f.rel.lhs, out);
    collect_vars(*f.rel.rhs, out);
    return;
  }
  for (const auto& a : f.args) collect_vars(a, out);
}

bool is_literal(const Formula& f) {
  return f.kind == Formula::Kind::Rel || (f.kind == Formula::Kind::Not && f.args.size() == 1 && f.args[0].kind == Formula::Kind::Rel);
}

std::string rel_string(const Relation& r) {
  const char* op = r.kind == RelationKind::Leq ? " =< " : r.kind == RelationKind::Perp ? " _|_ " : " = ";
  return to_string(*r.lhs) + op + to_string(*r.rhs);
}

std::string formula_string(const Formula& f, bool top) {
  switch (f.kind) {
    case Formula::Kind::Rel:
      return rel_string(f.rel);
    case Formula::Kind::Not:
      // "~ t = u" reads back through the parser; other negations are for display only.
      return f.args[0].kind == Formula::Kind::Rel ? "~ " + rel_string(f.args[0].rel) : "~" + formula_string(f.args[0], false);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      if (f.args.empty()) return f.kind == Formula::Kind::And ? "true" : "false";
      std::string s;
      for (std::size_t i = 0; i < f.args.size(); ++i)
        s += (i ? (f.kind == Formula::Kind::And ? " & " : " | ") : "") + formula_string(f.args[i], false);
      return top || f.args.size() == 1 ? s : "(" + s + ")";
    }
    case Formula::Kind::Implies:
      return "(" + formula_string(f.args[0], false) + " => " + formula_string(f.args[1], false) + ")";
  }
  return "?";
}

}  // namespace

void check_closed(const Condition& c) {
  std::set<std::string> declared;
  for (const auto& v : c.variables)
    if (!declared.insert(v.name).second) throw PreconditionError("variable declared twice: " + v.name);
  std::vector<std::string> used;
  for (const auto& h : c.hypotheses) {
    if (!is_literal(h)) throw PreconditionError("hypotheses must be relations or negated relations");
    collect_vars(h, used);
  }
  collect_vars(c.conclusion, used);
  for (const auto& u : used)
    if (!declared.count(u)) throw PreconditionError("undeclared variable: " + u);
  if (c.variables.size() > 64) throw PreconditionError("at most 64 variables");
}

std::string to_string(const Condition& c) {
  std::string s;
  for (const auto& v : c.variables) {
    s += v.quantifier == Quantifier::Forall ? "A " : "E ";
    s += v.name;
    if (v.sort == Sort::Atom) s += ":atom";
    s += ' ';
  }
  for (std::size_t i = 0; i < c.hypotheses.size(); ++i) s += (i ? " & " : "") + formula_string(c.hypotheses[i], false);
  if (!c.hypotheses.empty()) s += " => ";
  return s + formula_string(c.conclusion, true);
}

// ---------------------------------------------------------------------------
// Text syntax

namespace {

enum class Tok { Ident, Zero, One, LParen, RParen, Quote, Meet, Join, Arrow, Leq, Eq, Perp, And, Implies, Not, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const auto starts = [&](const char* p) { return s.compare(i, std::char_traits<char>::length(p), p) == 0; };
    const std::size_t at = i;
    if (starts("_|_")) {
      out.push_back({Tok::Perp, "_|_", at});
      i += 3;
    } else if (starts("=<")) {
      out.push_back({Tok::Leq, "=<", at});
      i += 2;
    } else if (starts("=>")) {
      out.push_back({Tok::Implies, "=>", at});
      i += 2;
    } else if (starts("->")) {
      out.push_back({Tok::Arrow, "->", at});
      i += 2;
    } else if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word = s.substr(i, j - i);
      out.push_back({word == "v" ? Tok::Join : Tok::Ident, word, at});
      i = j;
    } else {
      Tok k;
      switch (ch) {
        case '0': k = Tok::Zero; break;
        case '1': k = Tok::One; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '\'': k = Tok::Quote; break;
        case '^': k = Tok::Meet; break;
        case '=': k = Tok::Eq; break;
        case '&': k = Tok::And; break;
        case '~': k = Tok::Not; break;
        case ':': k = Tok::Colon; break;
        default:
          throw ParseError(std::string("unexpected character '") + ch + "'", at);
      }
      out.push_back({k, std::string(1, ch), at});
      ++i;
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  Condition run() {
    Condition c;
    std::vector<Variable> declared;
    while (peek().kind == Tok::Ident && (peek().text == "A" || peek().text == "E") && peek(1).kind == Tok::Ident) {
      Variable v;
      v.quantifier = next().text == "A" ? Quantifier::Forall : Quantifier::Exists;
      v.name = next().text;
      if (peek().kind == Tok::Colon) {
        next();
        const Token& s = expect(Tok::Ident, "sort name");
        if (s.text == "atom")
          v.sort = Sort::Atom;
        else if (s.text != "element")
          throw ParseError("unknown sort '" + s.text + "'", s.offset);
      }
      declared.push_back(v);
    }
    std::vector<Formula> first = literals();
    if (peek().kind == Tok::Implies) {
      next();
      c.hypotheses = std::move(first);
      std::vector<Formula> concl = literals();
      c.conclusion = concl.size() == 1 ? std::move(concl.front()) : Formula::conj(std::move(concl));
    } else {
      c.conclusion = first.size() == 1 ? std::move(first.front()) : Formula::conj(std::move(first));
    }
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().offset);

    std::vector<std::string> used;
    for (const auto& h : c.hypotheses) collect_vars(h, used);
    collect_vars(c.conclusion, used);
    for (const auto& u : used) {
      const bool known = std::any_of(declared.begin(), declared.end(), [&](const Variable& v) { return v.name == u; });
      if (!known) c.variables.push_back({u, Sort::Element, Quantifier::Forall});
    }
    c.variables.insert(c.variables.end(), declared.begin(), declared.end());
    check_closed(c);
    return c;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().offset);
    return next();
  }

  std::vector<Formula> literals() {
    std::vector<Formula> out{literal()};
    while (peek().kind == Tok::And) {
      next();
      out.push_back(literal());
    }
    return out;
  }

  Formula literal() {
    if (peek().kind == Tok::Not) {
      next();
      return Formula::negation(literal());
    }
    Relation r;
    r.lhs = term();
    switch (peek().kind) {
      case Tok::Leq: r.kind = RelationKind::Leq; break;
      case Tok::Eq: r.kind = RelationKind::Eq; break;
      case Tok::Perp: r.kind = RelationKind::Perp; break;
      default:
        throw ParseError("expected =<, = or _|_", peek().offset);
    }
    next();
    r.rhs = term();
    return Formula::of(std::move(r));
  }

  TermPtr term() {
    TermPtr a = join_term();
    if (peek().kind == Tok::Arrow) {
      next();
      return sasaki(a, term());
    }
    return a;
  }

  TermPtr join_term() {
    TermPtr a = meet_term();
    while (peek().kind == Tok::Join) {
      next();
      a = join(a, meet_term());
    }
    return a;
  }

  TermPtr meet_term() {
    TermPtr a = postfix();
    while (peek().kind == Tok::Meet) {
      next();
      a = meet(a, postfix());
    }
    return a;
  }

  TermPtr postfix() {
    TermPtr a = primary();
    while (peek().kind == Tok::Quote) {
      next();
      a = ortho(a);
    }
    return a;
  }

  TermPtr primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Ident:
        return var(t.text);
      case Tok::Zero:
        return zero();
      case Tok::One:
        return one();
      case Tok::LParen: {
        TermPtr a = term();
        expect(Tok::RParen, "')'");
        return a;
      }
      default:
        throw ParseError("expected a term", t.offset);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Condition parse_condition(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Catalogue

namespace {

Condition named(std::string name, const std::string& text) {
  Condition c = parse_condition(text);
  c.name = std::move(name);
  return c;
}

std::vector<TermPtr> numbered_vars(int n) {
  std::vector<TermPtr> v;
  for (int i = 1; i <= n; ++i) v.push_back(var("a" + std::to_string(i)));
  return v;
}

Condition declare_all(std::string name, int n, Formula conclusion) {
  Condition c;
  c.name = std::move(name);
  for (int i = 1; i <= n; ++i) c.variables.push_back({"a" + std::to_string(i), Sort::Element, Quantifier::Forall});
  c.conclusion = std::move(conclusion);
  return c;
}

Condition noa(int n) {
  const auto a = numbered_vars(n);
  Relation r{RelationKind::Leq, meet(sasaki(a[0], a[2]), oa_id(n, a)), sasaki(a[1], a[2])};
  return declare_all(std::to_string(n) + "OA", n, Formula::of(std::move(r)));
}

Condition godowski(int n) {
  const auto a = numbered_vars(n);
  std::vector<TermPtr> rev(a.rbegin(), a.rend());
  Relation r{RelationKind::Eq, godowski_id(a), godowski_id(rev)};
  return declare_all(std::to_string(n) + "-Go", n, Formula::of(std::move(r)));
}

Condition superposition_prenex() {
  const auto rel = [](RelationKind k, TermPtr a, TermPtr b) { return Formula::of(Relation{k, std::move(a), std::move(b)}); };
  const auto eq = [&](TermPtr a, TermPtr b) { return rel(RelationKind::Eq, std::move(a), std::move(b)); };
  const auto le = [&](TermPtr a, TermPtr b) { return rel(RelationKind::Leq, std::move(a), std::move(b)); };
  const auto no = [](Formula f) { return Formula::negation(std::move(f)); };
  const auto a = var("a"), b = var("b"), c = var("c"), z = var("z"), w = var("w");
  // x is an atom, with the inner quantifier carried by y
  const auto atomic = [&](const TermPtr& x, const TermPtr& y) {
    return Formula::conj({no(eq(x, zero())), Formula::implies(Formula::conj({no(eq(y, zero())), le(y, x)}), eq(y, x))});
  };
  Formula hyp = Formula::conj({Formula::conj({atomic(a, z), atomic(b, z)}), no(eq(a, b))});
  Formula concl = Formula::conj({atomic(c, w), Formula::conj({Formula::conj({no(eq(c, a)), no(eq(c, b))}), le(c, join(a, b))})});
  Condition cond;
  cond.name = "superposition_prenex";
  cond.variables = {{"a", Sort::Element, Quantifier::Forall},
                    {"b", Sort::Element, Quantifier::Forall},
                    {"c", Sort::Element, Quantifier::Exists},
                    {"z", Sort::Element, Quantifier::Exists},
                    {"w", Sort::Element, Quantifier::Forall}};
  cond.conclusion = Formula::implies(std::move(hyp), std::move(concl));
  return cond;
}

// "noa(4)" / "noa4" -> 4; -1 when the name has another stem.
int order_suffix(const std::string& name, const std::string& stem) {
  if (name.compare(0, stem.size(), stem) != 0) return -1;
  std::string rest = name.substr(stem.size());
  if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    return -1;
  return std::stoi(rest);
}

}  // namespace

Condition builtin(const std::string& name) {
  if (name == "oml" || name == "oml_law") return named("oml", "A a A b A c b =< a & c =< a' => a ^ (b v c) = (a ^ b) v (a ^ c)");
  if (name == "modular" || name == "modular_law") return named("modular", "A a A b A c b =< a => a ^ (b v c) = (a ^ b) v (a ^ c)");
  if (name == "distributive" || name == "distributive_law") return named("distributive", "A a A b A c a ^ (b v c) = (a ^ b) v (a ^ c)");
  if (name == "newst1d" || name == "mge_newst1d")
    return named("newst1d", "A a A b A c ((a -> b) -> (c -> b)) ^ (a -> c) ^ (b -> a) =< c -> a");
  if (name == "e3")
    return named("e3",
                 "A a A b A c A d A e A f "
                 "a _|_ b & a _|_ c & b _|_ c & a _|_ d & b _|_ e & c _|_ f "
                 "=> ((a v b) v c) ^ (((a v d) ^ (b v e)) ^ (c v f)) =< (d v e) v f");
  if (name == "e4")
    return named("e4",
                 "A a A b A c A d A e A f A g A h "
                 "a _|_ b & a _|_ c & a _|_ d & b _|_ c & b _|_ d & c _|_ d & a _|_ e & b _|_ f & c _|_ g & d _|_ h "
                 "=> (((a v b) v c) v d) ^ ((((a v e) ^ (b v f)) ^ (c v g)) ^ (d v h)) =< ((e v f) v g) v h");
  if (name == "oa3_split")
    return named("oa3_split", "A a A b A q A n a _|_ b & q _|_ n => (a v b) ^ (q v n) =< b v (a ^ (q v ((a v q) ^ (b v n))))");
  if (name == "superposition")
    return named("superposition", "A a:atom A b:atom E c:atom ~ a = b => ~ c = a & ~ c = b & c =< a v b");
  if (name == "superposition_prenex") return superposition_prenex();
  if (int n = order_suffix(name, "noa"); n >= 0) {
    if (n < 3) throw PreconditionError("noa(n) needs n >= 3");
    return noa(n);
  }
  if (int n = order_suffix(name, "godowski"); n >= 0) {
    if (n < 3) throw PreconditionError("godowski(n) needs n >= 3");
    return godowski(n);
  }
  throw PreconditionError("unknown equation '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"oml", "modular", "distributive", "noa(n)", "godowski(n)", "newst1d", "e3", "e4", "oa3_split", "superposition", "superposition_prenex"};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Node {
  TermOp op;
  int a = -1, b = -1;  // operand nodes, or the variable index for Variable
  std::uint64_t mask = 0;
};

struct CompiledRelation {
  RelationKind kind;
  int lhs, rhs;
  std::uint64_t mask;
};

struct CompiledFormula {
  Formula::Kind kind;
  int rel = -1;
  std::vector<CompiledFormula> args;
};

struct Program {
  std::vector<Node> nodes;
  std::vector<CompiledRelation> rels;
  std::vector<Variable> vars;
  std::vector<std::vector<int>> nodes_of_var;  // ascending, so operands come first

  // Hypotheses used to filter the outer universal block.
  std::vector<CompiledFormula> directing;
  std::vector<std::uint64_t> directing_mask;
  std::vector<std::vector<int>> directing_of_var;
  // Everything else: (remaining hypotheses) => conclusion.
  CompiledFormula matrix;

  std::vector<int> outer;  // leading universal variables
  std::vector<int> rest;   // the remaining prefix

  int intern(const TermPtr& t, std::map<std::string, int>& index) {
    Node n;
    n.op = t->op;
    std::string key;
    if (t->op == TermOp::Variable) {
      const auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == t->name; });
      n.a = static_cast<int>(it - vars.begin());
      n.mask = std::uint64_t{1} << n.a;
      key = "v" + std::to_string(n.a);
    } else {
      if (!t->args.empty()) n.a = intern(t->args[0], index);
      if (t->args.size() > 1) n.b = intern(t->args[1], index);
      n.mask = (n.a >= 0 ? nodes[static_cast<std::size_t>(n.a)].mask : 0) | (n.b >= 0 ? nodes[static_cast<std::size_t>(n.b)].mask : 0);
      key = std::to_string(static_cast<int>(t->op)) + ":" + std::to_string(n.a) + ":" + std::to_string(n.b);
    }
    auto [it, fresh] = index.emplace(key, static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back(n);
    return it->second;
  }

  CompiledFormula compile(const Formula& f, std::map<std::string, int>& index) {
    CompiledFormula c;
    c.kind = f.kind;
    if (f.kind == Formula::Kind::Rel) {
      const int l = intern(expand(f.rel.lhs), index);
      const int r = intern(expand(f.rel.rhs), index);
      c.rel = static_cast<int>(rels.size());
      rels.push_back({f.rel.kind, l, r, nodes[static_cast<std::size_t>(l)].mask | nodes[static_cast<std::size_t>(r)].mask});
      return c;
    }
    for (const auto& a : f.args) c.args.push_back(compile(a, index));
    return c;
  }

  std::uint64_t mask_of(const CompiledFormula& f) const {
    if (f.kind == Formula::Kind::Rel) return rels[static_cast<std::size_t>(f.rel)].mask;
    std::uint64_t m = 0;
    for (const auto& a : f.args) m |= mask_of(a);
    return m;
  }

  explicit Program(const Condition& c) : vars(c.variables) {
    check_closed(c);
    std::map<std::string, int> index;
    std::size_t k = 0;
    while (k < vars.size() && vars[k].quantifier == Quantifier::Forall) outer.push_back(static_cast<int>(k++));
    for (; k < vars.size(); ++k) rest.push_back(static_cast<int>(k));
    std::uint64_t outer_mask = 0;
    for (int v : outer) outer_mask |= std::uint64_t{1} << v;

    std::vector<CompiledFormula> other;
    for (const auto& h : c.hypotheses) {
      CompiledFormula cf = compile(h, index);
      const std::uint64_t m = mask_of(cf);
      if ((m & ~outer_mask) == 0) {
        directing.push_back(std::move(cf));
        directing_mask.push_back(m);
      } else {
        other.push_back(std::move(cf));
      }
    }
    CompiledFormula concl = compile(c.conclusion, index);
    if (other.empty()) {
      matrix = std::move(concl);
    } else {
      CompiledFormula lhs;
      lhs.kind = Formula::Kind::And;
      lhs.args = std::move(other);
      matrix.kind = Formula::Kind::Implies;
      matrix.args.push_back(std::move(lhs));
      matrix.args.push_back(std::move(concl));
    }

    nodes_of_var.assign(vars.size(), {});
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t v = 0; v < vars.size(); ++v)
        if (nodes[i].mask >> v & 1) nodes_of_var[v].push_back(static_cast<int>(i));
    directing_of_var.assign(vars.size(), {});
    for (std::size_t h = 0; h < directing.size(); ++h)
      for (std::size_t v = 0; v < vars.size(); ++v)
        if (directing_mask[h] >> v & 1) directing_of_var[v].push_back(static_cast<int>(h));
  }
};

struct Stop {};

class Evaluator {
 public:
  Evaluator(const Oml& L, const Program& p, std::atomic<std::uint64_t>& total, std::uint64_t budget, std::atomic<bool>& stop)
      : L_(L), p_(p), total_(total), budget_(budget), stop_(stop), values_(p.nodes.size(), 0), binding_(p.vars.size(), 0) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (p.nodes[i].mask == 0) values_[i] = compute(p.nodes[i]);
  }

  ~Evaluator() { flush(); }

  std::vector<int> domain(int v) const {
    std::vector<int> d;
    if (p_.vars[static_cast<std::size_t>(v)].sort == Sort::Atom) {
      for (int i = 0; i < L_.n_atoms(); ++i) d.push_back(L_.atom(i));
    } else {
      for (int x = 0; x < L_.size(); ++x) d.push_back(x);
    }
    return d;
  }

  // Chooses the next outer variable and its admissible values.
  bool choose(int& best, std::vector<int>& cands) {
    best = -1;
    std::size_t best_size = SIZE_MAX;
    for (int v : p_.outer) {
      if (bound_ >> v & 1) continue;
      const std::uint64_t with = bound_ | std::uint64_t{1} << v;
      bool filtered = false;
      for (int h : p_.directing_of_var[static_cast<std::size_t>(v)])
        if ((p_.directing_mask[static_cast<std::size_t>(h)] & ~with) == 0) filtered = true;
      std::vector<int> d = domain(v);
      if (filtered) {
        std::vector<int> keep;
        for (int e : d)
          if (bind_checked(v, e)) {
            keep.push_back(e);
            unbind(v);
          }
        d = std::move(keep);
      }
      if (d.size() < best_size) {
        best_size = d.size();
        best = v;
        cands = std::move(d);
      }
    }
    return best >= 0;
  }

  /// Binds v = e and checks the directing hypotheses that became closed;
  /// leaves v unbound when one fails.
  bool bind_checked(int v, int e) {
    bind(v, e);
    for (int h : p_.directing_of_var[static_cast<std::size_t>(v)]) {
      if ((p_.directing_mask[static_cast<std::size_t>(h)] & ~bound_) != 0) continue;
      if (!eval(p_.directing[static_cast<std::size_t>(h)])) {
        unbind(v);
        return false;
      }
    }
    return true;
  }

  void bind(int v, int e) {
    binding_[static_cast<std::size_t>(v)] = e;
    bound_ |= std::uint64_t{1} << v;
    for (int i : p_.nodes_of_var[static_cast<std::size_t>(v)]) {
      const Node& n = p_.nodes[static_cast<std::size_t>(i)];
      if ((n.mask & ~bound_) == 0) values_[static_cast<std::size_t>(i)] = compute(n);
    }
  }

  void unbind(int v) { bound_ &= ~(std::uint64_t{1} << v); }

  /// False when a counterexample was found below the current bindings.
  bool outer_search() {
    int v;
    std::vector<int> cands;
    if (!choose(v, cands)) return inner(0);
    for (int e : cands) {
      bind(v, e);
      const bool ok = outer_search();
      unbind(v);
      if (!ok) return false;
    }
    return true;
  }

  std::vector<int> outer_values() const {
    std::vector<int> out;
    for (int v : p_.outer) out.push_back(binding_[static_cast<std::size_t>(v)]);
    return out;
  }

  std::uint64_t tuples() const { return tuples_; }

 private:
  int compute(const Node& n) const {
    const auto val = [&](int i) { return values_[static_cast<std::size_t>(i)]; };
    switch (n.op) {
      case TermOp::Variable:
        return binding_[static_cast<std::size_t>(n.a)];
      case TermOp::Zero:
        return Oml::zero();
      case TermOp::One:
        return Oml::one();
      case TermOp::Ortho:
        return L_.ortho(val(n.a));
      case TermOp::Meet:
        return L_.meet(val(n.a), val(n.b));
      case TermOp::Join:
        return L_.join(val(n.a), val(n.b));
      case TermOp::Sasaki:
        return L_.sasaki(val(n.a), val(n.b));
      default:
        return 0;  // expanded away before compilation
    }
  }

  bool eval(const CompiledFormula& f) const {
    switch (f.kind) {
      case Formula::Kind::Rel: {
        const CompiledRelation& r = p_.rels[static_cast<std::size_t>(f.rel)];
        const int x = values_[static_cast<std::size_t>(r.lhs)], y = values_[static_cast<std::size_t>(r.rhs)];
        if (r.kind == RelationKind::Eq) return x == y;
        if (r.kind == RelationKind::Leq) return L_.leq(x, y);
        return L_.perp(x, y);
      }
      case Formula::Kind::Not:
        return !eval(f.args[0]);
      case Formula::Kind::And:
        for (const auto& a : f.args)
          if (!eval(a)) return false;
        return true;
      case Formula::Kind::Or:
        for (const auto& a : f.args)
          if (eval(a)) return true;
        return false;
      case Formula::Kind::Implies:
        return !eval(f.args[0]) || eval(f.args[1]);
    }
    return false;
  }

  bool inner(std::size_t k) {
    if (k == p_.rest.size()) {
      count();
      return eval(p_.matrix);
    }
    const int v = p_.rest[k];
    const bool forall = p_.vars[static_cast<std::size_t>(v)].quantifier == Quantifier::Forall;
    for (int e : domain(v)) {
      bind(v, e);
      const bool r = inner(k + 1);
      unbind(v);
      if (forall && !r) return false;
      if (!forall && r) return true;
    }
    return forall;
  }

  void count() {
    ++tuples_;
    if (++pending_ == 4096) {
      flush();
      if (stop_.load(std::memory_order_relaxed)) throw Stop{};
    }
  }

  void flush() {
    const std::uint64_t t = total_ += pending_;
    pending_ = 0;
    if (budget_ && t > budget_) stop_ = true;
  }

  const Oml& L_;
  const Program& p_;
  std::atomic<std::uint64_t>& total_;
  std::uint64_t budget_;
  std::atomic<bool>& stop_;
  std::vector<int> values_;
  std::vector<int> binding_;
  std::uint64_t bound_ = 0;
  std::uint64_t tuples_ = 0;
  std::uint64_t pending_ = 0;
};

}  // namespace

CheckResult evaluate(const Oml& L, const Condition& c, const EvalOptions& opts) {
  const Program prog(c);
  std::atomic<std::uint64_t> total{0};
  std::atomic<bool> stop{false};
  CheckResult result;

  auto fill = [&](const std::vector<int>& values) {
    result.verdict = Verdict::Fails;
    for (std::size_t i = 0; i < prog.outer.size(); ++i) {
      const auto& v = prog.vars[static_cast<std::size_t>(prog.outer[i])];
      result.counterexample.push_back({v.name, values[i], L.name(values[i])});
    }
  };

  // The first variable and its candidates do not depend on anything else,
  // so the work is split over them.
  int first;
  std::vector<int> cands;
  {
    Evaluator probe(L, prog, total, 0, stop);
    if (!probe.choose(first, cands)) {
      // No outer universal variables: a closed sentence.
      Evaluator ev(L, prog, total, opts.tuple_budget, stop);
      try {
        if (!ev.outer_search()) result.verdict = Verdict::Fails;
      } catch (Stop&) {
        throw EvaluationInterrupted(total.load(), 0);
      }
      result.tuples_examined = ev.tuples();
      return result;
    }
  }

  const std::size_t count = cands.size();
  const std::size_t start = std::min(opts.resume_from, count);
  std::atomic<std::size_t> next{start};
  std::atomic<std::size_t> first_fail{SIZE_MAX};
  std::mutex mu;
  std::vector<char> done(count, 0);
  std::vector<int> witness;
  std::uint64_t tuples = 0;

  auto worker = [&] {
    Evaluator ev(L, prog, total, opts.tuple_budget, stop);
    try {
      for (;;) {
        const std::size_t i = next++;
        if (i >= count || i > first_fail.load()) break;
        bool ok = true;
        if (ev.bind_checked(first, cands[i])) {
          ok = ev.outer_search();
          ev.unbind(first);
        }
        std::lock_guard<std::mutex> lock(mu);
        done[i] = 1;
        if (!ok && i < first_fail.load()) {
          first_fail = i;
          witness = ev.outer_values();
        }
      }
    } catch (Stop&) {
    }
    std::lock_guard<std::mutex> lock(mu);
    tuples += ev.tuples();
  };

  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(count - start) > 0 ? static_cast<int>(count - start) : 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::size_t f = first_fail.load();
  std::size_t first_open = start;
  while (first_open < count && done[first_open]) ++first_open;
  if (first_open < std::min(f, count)) throw EvaluationInterrupted(total.load(), first_open);
  result.tuples_examined = tuples;
  if (f != SIZE_MAX) fill(witness);
  return result;
}

CheckResult check_superposition(const Oml& L) {
  CheckResult r;
  const int n = L.n_atoms();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      ++r.tuples_examined;
      const int a = L.atom(i), b = L.atom(j), ab = L.join(a, b);
      bool found = false;
      for (int k = 0; k < n && !found; ++k) {
        const int c = L.atom(k);
        found = c != a && c != b && L.leq(c, ab);
      }
      if (!found) {
        r.verdict = Verdict::Fails;
        r.counterexample = {{"a", a, L.name(a)}, {"b", b, L.name(b)}};
        return r;
      }
    }
  return r;
}

}  // namespace omlkit
