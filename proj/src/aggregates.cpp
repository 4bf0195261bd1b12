// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/aggregates.hpp"

#include <algorithm>

namespace dlpa {

Multiset Multiset::of(std::vector<Constant> vals) {
  std::sort(vals.begin(), vals.end());
  return Multiset{std::move(vals)};
}

bool operator==(const Multiset& a, const Multiset& b) { return a.values == b.values; }

bool operator==(const AggregateValue& a, const AggregateValue& b) {
  if (a.bottom || b.bottom) return a.bottom == b.bottom;
  return a.value == b.value && a.saturated == b.saturated;
}

Multiset valuate_set(const GroundSet& s, const AtomSet& interp) {
  // Elements are sorted by (tuple, conj), so equal tuples are adjacent; each
  // run contributes its first component at most once.
  std::vector<Constant> projected;
  size_t i = 0;
  while (i < s.elements.size()) {
    size_t j = i;
    bool in = false;
    while (j < s.elements.size() && s.elements[j].tuple == s.elements[i].tuple) {
      in = in || truth_of_conjunction(s.elements[j].conj, interp);
      ++j;
    }
    if (in && !s.elements[i].tuple.empty()) projected.push_back(s.elements[i].tuple.front());
    i = j;
  }
  return Multiset::of(std::move(projected));
}

AggregateValue apply_function(AggrFn fn, const Multiset& m, uint64_t maxint,
                              std::vector<Diagnostic>* warnings) {
  if (fn == AggrFn::count) return AggregateValue::of(m.size());

  for (const Constant& c : m.values)
    if (!c.is_number) return AggregateValue::bot();

  switch (fn) {
    case AggrFn::sum: {
      uint64_t total = 0;
      for (const Constant& c : m.values) {
        if (__builtin_add_overflow(total, c.number, &total))
          throw FatalError(make_error("capacity", {}, "#sum value exceeds 64 bits"));
      }
      return AggregateValue::of(total);
    }
    case AggrFn::times: {
      for (const Constant& c : m.values)
        if (c.number == 0) return AggregateValue::of(0);
      uint64_t cap = maxint < UINT64_MAX ? maxint + 1 : UINT64_MAX;
      uint64_t product = 1;
      bool capped = false;
      for (const Constant& c : m.values) {
        if (__builtin_mul_overflow(product, c.number, &product) || product > cap) {
          product = cap;
          capped = true;
        }
      }
      if (capped && warnings)
        warnings->push_back(make_warning(
            "overflow", {}, "#times product exceeds maxint; comparing as maxint + 1"));
      return AggregateValue::of(product, capped);
    }
    case AggrFn::min:
      if (m.values.empty()) return AggregateValue::bot();
      return AggregateValue::of(m.values.front().number);
    case AggrFn::max:
      if (m.values.empty()) return AggregateValue::bot();
      return AggregateValue::of(m.values.back().number);
    case AggrFn::count:
      break;
  }
  return AggregateValue::bot();
}

void normalize_aggregate_guards(AggregateAtom& a) {
  if (a.normalized) return;

  // '=' expands to a two-sided bound; it can sit on either side.
  if (a.left_op == CmpOp::eq || a.right_op == CmpOp::eq) {
    Guard g = a.left_op == CmpOp::eq ? a.left : a.right;
    a.left = g;
    a.right = g;
    a.left_op = a.right_op = CmpOp::le;
    a.normalized = true;
    return;
  }

  // Strict bounds fold into the numeric value when the guard is a number
  // constant, and into the delta otherwise (variables, and symbolic constants
  // that evaluation rejects as non-natural either way).
  if (a.left_op == CmpOp::lt) {  // t < f(S)  ==>  t + 1 <= f(S)
    if (!a.left.term.is_var() && a.left.term.value.is_number) {
      a.left.term = Term::number(a.left.term.value.number + 1);
    } else {
      a.left.delta += 1;
    }
    a.left_op = CmpOp::le;
  }
  if (a.right_op == CmpOp::lt) {  // f(S) < t  ==>  f(S) <= t - 1
    if (!a.right.term.is_var() && a.right.term.value.is_number) {
      if (a.right.term.value.number > 0) {
        a.right.term = Term::number(a.right.term.value.number - 1);
      } else {
        // f(S) < 0 cannot hold: fold to the unsatisfiable interval [1,0].
        a.left = Guard{Term::number(1), 0, false};
        a.left_op = CmpOp::le;
        a.right = Guard{Term::number(0), 0, false};
      }
    } else {
      a.right.delta -= 1;
    }
    a.right_op = CmpOp::le;
  }
  a.normalized = true;
}

void fold_numeric_guards(AggregateAtom& a) {
  if (a.left.delta != 0 && !a.left.term.is_var() && a.left.term.value.is_number) {
    int64_t v = static_cast<int64_t>(a.left.term.value.number) + a.left.delta;
    a.left.term = Term::number(v < 0 ? 0 : static_cast<uint64_t>(v));
    a.left.delta = 0;
  }
  if (!a.right.plus_inf && a.right.delta != 0 && !a.right.term.is_var() &&
      a.right.term.value.is_number) {
    int64_t v = static_cast<int64_t>(a.right.term.value.number) + a.right.delta;
    if (v < 0) {
      a.left = Guard{Term::number(1), 0, false};
      a.right = Guard{Term::number(0), 0, false};
    } else {
      a.right.term = Term::number(static_cast<uint64_t>(v));
      a.right.delta = 0;
    }
  }
}

namespace {

// A ground guard value after delta application; nullopt marks a non-natural
// guard (symbolic constant, or a variable that escaped grounding).
std::optional<uint64_t> guard_value(const Guard& g) {
  if (g.term.is_var() || !g.term.value.is_number) return std::nullopt;
  int64_t v = static_cast<int64_t>(g.term.value.number) + g.delta;
  if (v < 0) return std::nullopt;
  return static_cast<uint64_t>(v);
}

}  // namespace

bool eval_aggregate_atom(const AggregateAtom& a, const AtomSet& interp, uint64_t maxint,
                         std::vector<Diagnostic>* warnings) {
  AggregateAtom atom = a;
  normalize_aggregate_guards(atom);
  if (!atom.has_symbolic_set()) {
    AggregateValue v =
        apply_function(atom.fn, valuate_set(atom.ground_set(), interp), maxint, warnings);
    if (v.bottom) return false;
    std::optional<uint64_t> left = guard_value(atom.left);
    if (!left || *left > v.value) return false;
    if (atom.right.plus_inf) return true;
    std::optional<uint64_t> right = guard_value(atom.right);
    return right && v.value <= *right;
  }
  return false;  // symbolic sets have no truth value; grounding removes them
}

bool eval_builtin(const BuiltinAtom& b, uint64_t maxint) {
  auto value = [](const Term& t) { return t.value; };
  if (b.arith == BuiltinAtom::Arith::none) {
    const Constant& l = value(b.lhs);
    const Constant& r = value(b.rhs);
    switch (b.rel) {
      case CmpOp::lt: return l < r;
      case CmpOp::le: return l < r || l == r;
      case CmpOp::gt: return r < l;
      case CmpOp::ge: return r < l || l == r;
      case CmpOp::eq: return l == r;
      case CmpOp::ne: return !(l == r);
    }
    return false;
  }
  // lhs = rhs (+|*) rhs2 over naturals bounded by maxint.
  const Constant& x = value(b.lhs);
  const Constant& y = value(b.rhs);
  const Constant& z = value(b.rhs2);
  if (!x.is_number || !y.is_number || !z.is_number) return false;
  if (x.number > maxint || y.number > maxint || z.number > maxint) return false;
  uint64_t result = 0;
  if (b.arith == BuiltinAtom::Arith::plus) {
    if (__builtin_add_overflow(y.number, z.number, &result)) return false;
  } else {
    if (__builtin_mul_overflow(y.number, z.number, &result)) return false;
  }
  return result <= maxint && result == x.number;
}

bool eval_body_literal(const BodyLiteral& lit, const AtomSet& interp, uint64_t maxint) {
  bool atom_true;
  if (lit.is_standard()) {
    atom_true = interp.count(lit.standard()) > 0;
  } else if (lit.is_builtin()) {
    atom_true = eval_builtin(lit.builtin(), maxint);
  } else {
    atom_true = eval_aggregate_atom(lit.aggregate(), interp, maxint);
  }
  return lit.negated ? !atom_true : atom_true;
}

bool body_true(const std::vector<BodyLiteral>& body, const AtomSet& interp, uint64_t maxint) {
  for (const BodyLiteral& lit : body)
    if (!eval_body_literal(lit, interp, maxint)) return false;
  return true;
}

bool satisfies(const Rule& r, const AtomSet& interp, uint64_t maxint) {
  if (!body_true(r.body, interp, maxint)) return true;
  for (const StandardAtom& h : r.head)
    if (interp.count(h)) return true;
  return false;
}

bool violates(const WeakConstraint& w, const AtomSet& interp, uint64_t maxint) {
  return body_true(w.body, interp, maxint);
}

}  // namespace dlpa
