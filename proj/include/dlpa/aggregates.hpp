// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// The declarative semantics of ground programs: set valuation, aggregate
// function application, and truth of ground literals, rules and weak
// constraints against a plain interpretation. The solver re-derives all of
// this incrementally; everything it emits is re-checked against this layer.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dlpa/diagnostics.hpp"
#include "dlpa/syntax.hpp"

namespace dlpa {

// Multiset of constants as a sorted sequence; equality is order-insensitive
// by construction.
struct Multiset {
  std::vector<Constant> values;

  static Multiset of(std::vector<Constant> vals);
  size_t size() const { return values.size(); }
};

bool operator==(const Multiset& a, const Multiset& b);

// An aggregate function value: a natural number or bottom (undefined).
// Bottom compares unequal to every number, so a bottom-valued atom is false.
struct AggregateValue {
  bool bottom = true;
  uint64_t value = 0;
  bool saturated = false;  // #times product capped at maxint + 1

  static AggregateValue bot() { return {}; }
  static AggregateValue of(uint64_t v, bool sat = false) { return {false, v, sat}; }
};

bool operator==(const AggregateValue& a, const AggregateValue& b);

// S_I projected to first components: a tuple contributes once when at least
// one of its element conjunctions is true (the set is a set of tuples, so
// <1 : p> and <1 : q> collapse under an interpretation satisfying both).
Multiset valuate_set(const GroundSet& s, const AtomSet& interp);

// count accepts any constants; sum/times/min/max are defined on natural
// multisets only and yield bottom otherwise, as does min/max of the empty
// multiset. A #times product beyond maxint saturates at maxint + 1 (greater
// than every finite guard, smaller than +infinity) and reports a warning.
AggregateValue apply_function(AggrFn fn, const Multiset& m, uint64_t maxint,
                              std::vector<Diagnostic>* warnings = nullptr);

// Rewrites the guards of one atom into the canonical two-sided <= form:
// strict bounds shift by one (on variables via the guard delta), '=' expands
// to a two-sided bound, missing guards default to 0 and +infinity. A right
// guard pushed below zero becomes the unsatisfiable interval [1,0].
void normalize_aggregate_guards(AggregateAtom& a);

// Folds pending guard deltas into numeric guard terms after substitution.
// A right guard pushed below zero becomes the unsatisfiable interval [1,0];
// non-numeric guard terms are left alone (evaluation treats them as out of
// the natural domain).
void fold_numeric_guards(AggregateAtom& a);

// Truth of a ground aggregate atom (normalized on the fly when needed):
// value defined, left guard <= value <= right guard. A non-natural guard
// constant makes the atom false; the validating pipeline rejects such atoms
// before they reach evaluation, so this path only serves the exhaustive
// grounding used in tests.
bool eval_aggregate_atom(const AggregateAtom& a, const AtomSet& interp, uint64_t maxint,
                         std::vector<Diagnostic>* warnings = nullptr);

// Comparison and bounded arithmetic over constants: numbers order before
// symbols, symbols compare lexicographically, and X = Y + D / X = Y * D hold
// only when all three values are numbers within [0, maxint].
bool eval_builtin(const BuiltinAtom& b, uint64_t maxint);

// Ground body literal / body / rule / weak constraint truth w.r.t. interp.
bool eval_body_literal(const BodyLiteral& lit, const AtomSet& interp, uint64_t maxint);
bool body_true(const std::vector<BodyLiteral>& body, const AtomSet& interp, uint64_t maxint);
bool satisfies(const Rule& r, const AtomSet& interp, uint64_t maxint);
bool violates(const WeakConstraint& w, const AtomSet& interp, uint64_t maxint);

}  // namespace dlpa
