// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Abstract syntax for disjunctive programs with aggregate atoms and weak
// constraints. Everything here is a plain value type; nodes are immutable
// after construction by convention. Source locations never take part in
// structural equality.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dlpa {

struct SourceLoc {
  int line = 0;  // 1-based; 0 marks a synthetic node
  int col = 0;
};

// A constant is a natural number or a symbolic constant. The total order
// places numbers (by value) before symbols (lexicographic); eval_builtin and
// the canonical printers rely on it.
struct Constant {
  bool is_number = true;
  uint64_t number = 0;
  std::string symbol;

  static Constant num(uint64_t v) { return {true, v, {}}; }
  static Constant sym(std::string s) { return {false, 0, std::move(s)}; }
};

bool operator==(const Constant& a, const Constant& b);
bool operator<(const Constant& a, const Constant& b);
inline bool operator!=(const Constant& a, const Constant& b) { return !(a == b); }

struct Term {
  enum class Kind { variable, constant };
  Kind kind = Kind::constant;
  std::string var;  // variable name, when kind == variable
  Constant value;   // when kind == constant

  static Term variable(std::string name) {
    return {Kind::variable, std::move(name), {}};
  }
  static Term constant(Constant c) { return {Kind::constant, {}, std::move(c)}; }
  static Term number(uint64_t v) { return constant(Constant::num(v)); }
  static Term symbol(std::string s) { return constant(Constant::sym(std::move(s))); }
  bool is_var() const { return kind == Kind::variable; }
};

bool operator==(const Term& a, const Term& b);
bool operator<(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

struct StandardAtom {
  std::string predicate;
  std::vector<Term> args;

  bool ground() const;
};

bool operator==(const StandardAtom& a, const StandardAtom& b);
bool operator<(const StandardAtom& a, const StandardAtom& b);
inline bool operator!=(const StandardAtom& a, const StandardAtom& b) { return !(a == b); }

// A standard literal: an atom or its negation-as-failure complement. Set
// conjunctions are built from these only (no nested aggregates, no builtins).
struct StandardLiteral {
  bool negated = false;
  StandardAtom atom;
};

bool operator==(const StandardLiteral& a, const StandardLiteral& b);
bool operator<(const StandardLiteral& a, const StandardLiteral& b);

enum class AggrFn { count, sum, times, min, max };
const char* name_of(AggrFn f);

enum class CmpOp { lt, le, gt, ge, eq, ne };  // gt/ge/ne appear in builtins only
const char* name_of(CmpOp op);

// Symbolic set {Vars : Conj}. Vars may mention global variables of the host
// rule; the local substitution ranges over the remaining ones.
struct SymbolicSet {
  std::vector<std::string> vars;
  std::vector<StandardLiteral> conj;
};

bool operator==(const SymbolicSet& a, const SymbolicSet& b);

// One element <t1,...,tn : conj> of a ground set. An empty conjunction is
// vacuously true; partial evaluation produces such elements when it folds
// decided-true conjunctions into the set.
struct GroundSetElement {
  std::vector<Constant> tuple;
  std::vector<StandardLiteral> conj;  // ground
};

bool operator==(const GroundSetElement& a, const GroundSetElement& b);
bool operator<(const GroundSetElement& a, const GroundSetElement& b);

// Ground sets are sets of elements: construction sorts and deduplicates.
struct GroundSet {
  std::vector<GroundSetElement> elements;

  static GroundSet of(std::vector<GroundSetElement> elems);
};

bool operator==(const GroundSet& a, const GroundSet& b);

// Aggregate guard. `delta` is added to the term after substitution; the
// standardizer uses it to fold strict comparisons on variable guards
// (Y < f(S) becomes Y+1 <= f(S)). `plus_inf` marks the dedicated +infinity
// right guard. Defaulted guards are left = 0 <= and right = +infinity.
struct Guard {
  Term term;
  int delta = 0;
  bool plus_inf = false;

  static Guard zero() { return {Term::number(0), 0, false}; }
  static Guard infinity() { return {Term::number(0), 0, true}; }
  bool is_default_left() const;
  bool is_default_right() const { return plus_inf; }
};

bool operator==(const Guard& a, const Guard& b);

// Aggregate atom Lg <1 f(S) <2 Rg, guard-defaulted on construction. Ops are
// restricted to lt/le/eq by the parser; after standardization both ops are le
// and `normalized` is set.
struct AggregateAtom {
  AggrFn fn = AggrFn::count;
  std::variant<SymbolicSet, GroundSet> set;
  Guard left = Guard::zero();
  CmpOp left_op = CmpOp::le;
  Guard right = Guard::infinity();
  CmpOp right_op = CmpOp::le;
  bool normalized = false;

  bool has_symbolic_set() const { return std::holds_alternative<SymbolicSet>(set); }
  const SymbolicSet& symbolic() const { return std::get<SymbolicSet>(set); }
  const GroundSet& ground_set() const { return std::get<GroundSet>(set); }
};

bool operator==(const AggregateAtom& a, const AggregateAtom& b);

// Builtin atom: `lhs rel rhs` or, with arith != none, `lhs = rhs (+|*) rhs2`.
struct BuiltinAtom {
  enum class Arith { none, plus, times };
  CmpOp rel = CmpOp::eq;
  Term lhs;
  Term rhs;
  Arith arith = Arith::none;
  Term rhs2;
};

bool operator==(const BuiltinAtom& a, const BuiltinAtom& b);

struct BodyLiteral {
  bool negated = false;
  std::variant<StandardAtom, AggregateAtom, BuiltinAtom> atom;

  bool is_standard() const { return std::holds_alternative<StandardAtom>(atom); }
  bool is_aggregate() const { return std::holds_alternative<AggregateAtom>(atom); }
  bool is_builtin() const { return std::holds_alternative<BuiltinAtom>(atom); }
  const StandardAtom& standard() const { return std::get<StandardAtom>(atom); }
  const AggregateAtom& aggregate() const { return std::get<AggregateAtom>(atom); }
  AggregateAtom& aggregate() { return std::get<AggregateAtom>(atom); }
  const BuiltinAtom& builtin() const { return std::get<BuiltinAtom>(atom); }
};

bool operator==(const BodyLiteral& a, const BodyLiteral& b);

// Disjunctive rule; an empty head is an integrity constraint.
struct Rule {
  std::vector<StandardAtom> head;
  std::vector<BodyLiteral> body;
  SourceLoc loc;

  bool is_constraint() const { return head.empty(); }
  bool is_fact() const { return head.size() == 1 && body.empty(); }
};

bool operator==(const Rule& a, const Rule& b);  // ignores loc

// Weak constraint :~ body. [weight:level], defaults 1:1.
struct WeakConstraint {
  std::vector<BodyLiteral> body;
  Term weight = Term::number(1);
  Term level = Term::number(1);
  SourceLoc loc;
};

bool operator==(const WeakConstraint& a, const WeakConstraint& b);  // ignores loc

struct Program {
  std::vector<Rule> rules;
  std::vector<WeakConstraint> weaks;
};

bool operator==(const Program& a, const Program& b);

// Interpretations at the syntax level are plain sets of ground atoms. The
// solver keeps its own indexed representation; this one serves the
// declarative definitions and the tests.
using AtomSet = std::set<StandardAtom>;

// All constants occurring in p (terms, guards, set tuples, weights). `extra`
// accounts for universe enrichment by assignment aggregate results.
std::vector<Constant> herbrand_universe(const Program& p,
                                        const std::vector<Constant>& extra = {});

// All atoms constructible from p's non-builtin predicates over
// herbrand_universe(p, extra). Finite; grows as prod |U|^arity per predicate.
std::vector<StandardAtom> herbrand_base(const Program& p,
                                        const std::vector<Constant>& extra = {});

// Truth of a ground conjunction of standard literals: every positive member
// in `interp`, every negated member absent. Empty conjunctions are true.
bool truth_of_conjunction(const std::vector<StandardLiteral>& conj,
                          const AtomSet& interp);

// Collects the variable names occurring in a term / atom / whole literal.
void collect_vars(const Term& t, std::set<std::string>& out);
void collect_vars(const StandardAtom& a, std::set<std::string>& out);
void collect_vars(const BuiltinAtom& a, std::set<std::string>& out);

}  // namespace dlpa
