// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/printer.hpp"

#include <sstream>

namespace dlpa {

namespace {

template <typename It, typename F>
void join(std::ostringstream& out, It begin, It end, const char* sep, F item) {
  for (It it = begin; it != end; ++it) {
    if (it != begin) out << sep;
    item(*it);
  }
}

}  // namespace

std::string to_string(const Constant& c) {
  return c.is_number ? std::to_string(c.number) : c.symbol;
}

std::string to_string(const Term& t) {
  return t.is_var() ? t.var : to_string(t.value);
}

std::string to_string(const StandardAtom& a) {
  std::ostringstream out;
  out << a.predicate;
  if (!a.args.empty()) {
    out << '(';
    join(out, a.args.begin(), a.args.end(), ",",
         [&out](const Term& t) { out << to_string(t); });
    out << ')';
  }
  return out.str();
}

std::string to_string(const StandardLiteral& l) {
  return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

std::string to_string(const BuiltinAtom& b) {
  std::ostringstream out;
  out << to_string(b.lhs) << ' ' << name_of(b.rel) << ' ' << to_string(b.rhs);
  if (b.arith == BuiltinAtom::Arith::plus) out << " + " << to_string(b.rhs2);
  if (b.arith == BuiltinAtom::Arith::times) out << " * " << to_string(b.rhs2);
  return out.str();
}

std::string to_string(const SymbolicSet& s) {
  std::ostringstream out;
  out << '{';
  join(out, s.vars.begin(), s.vars.end(), ", ",
       [&out](const std::string& v) { out << v; });
  out << " : ";
  join(out, s.conj.begin(), s.conj.end(), ", ",
       [&out](const StandardLiteral& l) { out << to_string(l); });
  out << '}';
  return out.str();
}

std::string to_string(const GroundSetElement& e) {
  std::ostringstream out;
  out << '<';
  join(out, e.tuple.begin(), e.tuple.end(), ",",
       [&out](const Constant& c) { out << to_string(c); });
  out << ':';
  join(out, e.conj.begin(), e.conj.end(), ", ",
       [&out](const StandardLiteral& l) { out << to_string(l); });
  out << '>';
  return out.str();
}

std::string to_string(const GroundSet& s) {
  std::ostringstream out;
  out << '{';
  join(out, s.elements.begin(), s.elements.end(), ", ",
       [&out](const GroundSetElement& e) { out << to_string(e); });
  out << '}';
  return out.str();
}

namespace {

// Strict-delta folding: a +1 delta on the left (or -1 on the right) of a <=
// guard is printed back as the strict source form.
void print_left_guard(std::ostringstream& out, const Guard& g, CmpOp op) {
  if (g.delta == 1 && op == CmpOp::le) {
    out << to_string(g.term) << " < ";
    return;
  }
  out << to_string(g.term) << ' ' << name_of(op) << ' ';
}

void print_right_guard(std::ostringstream& out, const Guard& g, CmpOp op) {
  if (g.delta == -1 && op == CmpOp::le) {
    out << " < " << to_string(g.term);
    return;
  }
  out << ' ' << name_of(op) << ' ' << to_string(g.term);
}

}  // namespace

std::string to_string(const AggregateAtom& a) {
  std::ostringstream out;
  bool left_visible = a.left_op != CmpOp::le || !a.left.is_default_left();
  bool right_visible = !a.right.plus_inf;
  if (!left_visible && !right_visible) left_visible = true;  // keep it parseable
  if (left_visible) print_left_guard(out, a.left, a.left_op);
  out << name_of(a.fn);
  out << (a.has_symbolic_set() ? to_string(a.symbolic())
                               : to_string(a.ground_set()));
  if (right_visible) print_right_guard(out, a.right, a.right_op);
  return out.str();
}

std::string to_string(const BodyLiteral& l) {
  std::string body = l.is_standard()    ? to_string(l.standard())
                     : l.is_aggregate() ? to_string(l.aggregate())
                                        : to_string(l.builtin());
  return l.negated ? "not " + body : body;
}

std::string to_string(const Rule& r) {
  std::ostringstream out;
  join(out, r.head.begin(), r.head.end(), " v ",
       [&out](const StandardAtom& a) { out << to_string(a); });
  if (!r.body.empty() || r.head.empty()) {
    if (!r.head.empty()) out << ' ';
    out << ":- ";
    join(out, r.body.begin(), r.body.end(), ", ",
         [&out](const BodyLiteral& l) { out << to_string(l); });
  }
  out << '.';
  return out.str();
}

std::string to_string(const WeakConstraint& w) {
  std::ostringstream out;
  out << ":~ ";
  join(out, w.body.begin(), w.body.end(), ", ",
       [&out](const BodyLiteral& l) { out << to_string(l); });
  out << ". [" << to_string(w.weight) << ':' << to_string(w.level) << ']';
  return out.str();
}

std::string to_string(const Program& p) {
  std::ostringstream out;
  for (const Rule& r : p.rules) out << to_string(r) << '\n';
  for (const WeakConstraint& w : p.weaks) out << to_string(w) << '\n';
  return out.str();
}

std::string to_string(const AtomSet& interp) {
  std::ostringstream out;
  out << '{';
  join(out, interp.begin(), interp.end(), ", ",
       [&out](const StandardAtom& a) { out << to_string(a); });
  out << '}';
  return out.str();
}

}  // namespace dlpa
