// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/syntax.hpp"

#include <algorithm>
#include <map>

namespace dlpa {

bool operator==(const Constant& a, const Constant& b) {
  if (a.is_number != b.is_number) return false;
  return a.is_number ? a.number == b.number : a.symbol == b.symbol;
}

bool operator<(const Constant& a, const Constant& b) {
  if (a.is_number != b.is_number) return a.is_number;  // numbers first
  return a.is_number ? a.number < b.number : a.symbol < b.symbol;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  return a.is_var() ? a.var == b.var : a.value == b.value;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.is_var() ? a.var < b.var : a.value < b.value;
}

bool StandardAtom::ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const Term& t) { return t.is_var(); });
}

bool operator==(const StandardAtom& a, const StandardAtom& b) {
  return a.predicate == b.predicate && a.args == b.args;
}

bool operator<(const StandardAtom& a, const StandardAtom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return std::lexicographical_compare(a.args.begin(), a.args.end(),
                                      b.args.begin(), b.args.end());
}

bool operator==(const StandardLiteral& a, const StandardLiteral& b) {
  return a.negated == b.negated && a.atom == b.atom;
}

bool operator<(const StandardLiteral& a, const StandardLiteral& b) {
  if (a.negated != b.negated) return !a.negated;
  return a.atom < b.atom;
}

const char* name_of(AggrFn f) {
  switch (f) {
    case AggrFn::count: return "#count";
    case AggrFn::sum: return "#sum";
    case AggrFn::times: return "#times";
    case AggrFn::min: return "#min";
    case AggrFn::max: return "#max";
  }
  return "#count";
}

const char* name_of(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
  }
  return "=";
}

bool operator==(const SymbolicSet& a, const SymbolicSet& b) {
  return a.vars == b.vars && a.conj == b.conj;
}

bool operator==(const GroundSetElement& a, const GroundSetElement& b) {
  return a.tuple == b.tuple && a.conj == b.conj;
}

bool operator<(const GroundSetElement& a, const GroundSetElement& b) {
  if (a.tuple != b.tuple)
    return std::lexicographical_compare(a.tuple.begin(), a.tuple.end(),
                                        b.tuple.begin(), b.tuple.end());
  return std::lexicographical_compare(a.conj.begin(), a.conj.end(),
                                      b.conj.begin(), b.conj.end());
}

GroundSet GroundSet::of(std::vector<GroundSetElement> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return GroundSet{std::move(elems)};
}

bool operator==(const GroundSet& a, const GroundSet& b) {
  return a.elements == b.elements;
}

bool Guard::is_default_left() const {
  return !plus_inf && delta == 0 && !term.is_var() && term.value.is_number &&
         term.value.number == 0;
}

bool operator==(const Guard& a, const Guard& b) {
  if (a.plus_inf != b.plus_inf) return false;
  if (a.plus_inf) return true;
  return a.delta == b.delta && a.term == b.term;
}

bool operator==(const AggregateAtom& a, const AggregateAtom& b) {
  return a.fn == b.fn && a.set == b.set && a.left == b.left &&
         a.left_op == b.left_op && a.right == b.right &&
         a.right_op == b.right_op;
}

bool operator==(const BuiltinAtom& a, const BuiltinAtom& b) {
  if (a.rel != b.rel || a.arith != b.arith) return false;
  if (!(a.lhs == b.lhs) || !(a.rhs == b.rhs)) return false;
  return a.arith == BuiltinAtom::Arith::none || a.rhs2 == b.rhs2;
}

bool operator==(const BodyLiteral& a, const BodyLiteral& b) {
  return a.negated == b.negated && a.atom == b.atom;
}

bool operator==(const Rule& a, const Rule& b) {
  return a.head == b.head && a.body == b.body;
}

bool operator==(const WeakConstraint& a, const WeakConstraint& b) {
  return a.body == b.body && a.weight == b.weight && a.level == b.level;
}

bool operator==(const Program& a, const Program& b) {
  return a.rules == b.rules && a.weaks == b.weaks;
}

namespace {

void collect_constants(const Term& t, std::set<Constant>& out) {
  if (!t.is_var()) out.insert(t.value);
}

void collect_constants(const StandardAtom& a, std::set<Constant>& out) {
  for (const Term& t : a.args) collect_constants(t, out);
}

void collect_constants(const AggregateAtom& agg, std::set<Constant>& out) {
  if (!agg.left.plus_inf) collect_constants(agg.left.term, out);
  if (!agg.right.plus_inf) collect_constants(agg.right.term, out);
  if (agg.has_symbolic_set()) {
    for (const StandardLiteral& l : agg.symbolic().conj)
      collect_constants(l.atom, out);
  } else {
    for (const GroundSetElement& e : agg.ground_set().elements) {
      for (const Constant& c : e.tuple) out.insert(c);
      for (const StandardLiteral& l : e.conj) collect_constants(l.atom, out);
    }
  }
}

void collect_constants(const BodyLiteral& l, std::set<Constant>& out) {
  if (l.is_standard()) {
    collect_constants(l.standard(), out);
  } else if (l.is_aggregate()) {
    collect_constants(l.aggregate(), out);
  } else {
    const BuiltinAtom& b = l.builtin();
    collect_constants(b.lhs, out);
    collect_constants(b.rhs, out);
    if (b.arith != BuiltinAtom::Arith::none) collect_constants(b.rhs2, out);
  }
}

}  // namespace

std::vector<Constant> herbrand_universe(const Program& p,
                                        const std::vector<Constant>& extra) {
  std::set<Constant> out(extra.begin(), extra.end());
  for (const Rule& r : p.rules) {
    for (const StandardAtom& h : r.head) collect_constants(h, out);
    for (const BodyLiteral& l : r.body) collect_constants(l, out);
  }
  for (const WeakConstraint& w : p.weaks) {
    for (const BodyLiteral& l : w.body) collect_constants(l, out);
    collect_constants(w.weight, out);
    collect_constants(w.level, out);
  }
  return {out.begin(), out.end()};
}

namespace {

void collect_predicates(const Program& p, std::map<std::string, size_t>& out) {
  auto add = [&out](const StandardAtom& a) { out.emplace(a.predicate, a.args.size()); };
  auto add_lit = [&add](const BodyLiteral& l) {
    if (l.is_standard()) {
      add(l.standard());
    } else if (l.is_aggregate()) {
      const AggregateAtom& agg = l.aggregate();
      if (agg.has_symbolic_set()) {
        for (const StandardLiteral& s : agg.symbolic().conj) add(s.atom);
      } else {
        for (const GroundSetElement& e : agg.ground_set().elements)
          for (const StandardLiteral& s : e.conj) add(s.atom);
      }
    }
  };
  for (const Rule& r : p.rules) {
    for (const StandardAtom& h : r.head) add(h);
    for (const BodyLiteral& l : r.body) add_lit(l);
  }
  for (const WeakConstraint& w : p.weaks)
    for (const BodyLiteral& l : w.body) add_lit(l);
}

}  // namespace

std::vector<StandardAtom> herbrand_base(const Program& p,
                                        const std::vector<Constant>& extra) {
  std::vector<Constant> universe = herbrand_universe(p, extra);
  std::map<std::string, size_t> preds;
  collect_predicates(p, preds);

  std::vector<StandardAtom> out;
  for (const auto& [name, arity] : preds) {
    if (arity > 0 && universe.empty()) continue;
    std::vector<size_t> idx(arity, 0);
    while (true) {
      StandardAtom a{name, {}};
      a.args.reserve(arity);
      for (size_t i = 0; i < arity; ++i)
        a.args.push_back(Term::constant(universe[idx[i]]));
      out.push_back(std::move(a));
      if (arity == 0) break;
      size_t k = arity;
      while (k > 0) {
        if (++idx[k - 1] < universe.size()) break;
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }
  return out;
}

bool truth_of_conjunction(const std::vector<StandardLiteral>& conj,
                          const AtomSet& interp) {
  for (const StandardLiteral& l : conj) {
    bool in = interp.count(l.atom) > 0;
    if (l.negated == in) return false;
  }
  return true;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.var);
}

void collect_vars(const StandardAtom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

void collect_vars(const BuiltinAtom& a, std::set<std::string>& out) {
  collect_vars(a.lhs, out);
  collect_vars(a.rhs, out);
  if (a.arith != BuiltinAtom::Arith::none) collect_vars(a.rhs2, out);
}

}  // namespace dlpa
