// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Both grounding modes. The intelligent grounder processes predicate
// components bottom-up over the full dependency graph; within a component it
// iterates semi-naively, evaluates every literal that is already decided,
// and keeps residual rules over potentially-true atoms only. Deterministic
// subprograms (non-disjunctive, no unresolved negation, decided inputs)
// thereby collapse into facts without a dedicated evaluation path. The naive
// grounder instantiates every statement over the enriched constant universe
// and keeps everything; it is the semantic reference, not a fast path.

#include "dlpa/grounder.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dlpa/aggregates.hpp"
#include "dlpa/analysis.hpp"
#include "dlpa/printer.hpp"

namespace dlpa {

namespace {

using Subst = std::map<std::string, Constant>;

Term subst_term(const Term& t, const Subst& s) {
  if (!t.is_var()) return t;
  auto it = s.find(t.var);
  return it == s.end() ? t : Term::constant(it->second);
}

StandardAtom subst_atom(const StandardAtom& a, const Subst& s) {
  StandardAtom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(subst_term(t, s));
  return out;
}

BuiltinAtom subst_builtin(const BuiltinAtom& b, const Subst& s) {
  BuiltinAtom out = b;
  out.lhs = subst_term(b.lhs, s);
  out.rhs = subst_term(b.rhs, s);
  if (b.arith != BuiltinAtom::Arith::none) out.rhs2 = subst_term(b.rhs2, s);
  return out;
}

std::vector<Constant> const_args(const StandardAtom& a) {
  std::vector<Constant> out;
  out.reserve(a.args.size());
  for (const Term& t : a.args) {
    if (t.is_var()) throw std::logic_error("non-ground atom where a ground one is required");
    out.push_back(t.value);
  }
  return out;
}

StandardAtom atom_of(const std::string& pred, const std::vector<Constant>& args) {
  StandardAtom a{pred, {}};
  a.args.reserve(args.size());
  for (const Constant& c : args) a.args.push_back(Term::constant(c));
  return a;
}

std::set<std::string> vars_of_symbolic_set(const SymbolicSet& s) {
  std::set<std::string> out(s.vars.begin(), s.vars.end());
  for (const StandardLiteral& l : s.conj) collect_vars(l.atom, out);
  return out;
}

// Variables of a conjunction in first-occurrence order; the argument list of
// the replacement atom.
std::vector<std::string> conj_vars_in_order(const std::vector<StandardLiteral>& conj) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const StandardLiteral& l : conj)
    for (const Term& t : l.atom.args)
      if (t.is_var() && seen.insert(t.var).second) out.push_back(t.var);
  return out;
}

// Replays the host body's binding fixpoint and keeps the subsequence of
// positive literals and builtins needed to bind `needed`. `bound` starts
// from the variables the conjunction itself binds.
std::vector<BodyLiteral> binding_support(const std::vector<BodyLiteral>& host,
                                         std::set<std::string> needed,
                                         std::set<std::string> bound) {
  struct Step {
    const BodyLiteral* lit;
    std::set<std::string> binds;
    std::set<std::string> prereq;  // builtin operands that must be bound first
  };
  std::vector<Step> steps;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const BodyLiteral& lit : host) {
      if (lit.negated) continue;
      if (lit.is_standard()) {
        std::set<std::string> vars;
        collect_vars(lit.standard(), vars);
        std::set<std::string> fresh;
        for (const std::string& v : vars)
          if (!bound.count(v)) fresh.insert(v);
        if (fresh.empty()) continue;
        bound.insert(fresh.begin(), fresh.end());
        steps.push_back({&lit, std::move(fresh), {}});
        changed = true;
      } else if (lit.is_builtin()) {
        const BuiltinAtom& b = lit.builtin();
        bool arith = b.arith != BuiltinAtom::Arith::none;
        if (!arith && b.rel != CmpOp::eq) continue;
        std::vector<const Term*> terms{&b.lhs, &b.rhs};
        if (arith) terms.push_back(&b.rhs2);
        const Term* open = nullptr;
        int unbound = 0;
        std::set<std::string> prereq;
        for (const Term* t : terms) {
          if (!t->is_var()) continue;
          if (bound.count(t->var)) {
            prereq.insert(t->var);
          } else {
            ++unbound;
            open = t;
          }
        }
        if (unbound != 1) continue;
        bound.insert(open->var);
        steps.push_back({&lit, {open->var}, std::move(prereq)});
        changed = true;
      }
    }
  }
  std::vector<bool> keep(steps.size(), false);
  for (size_t i = steps.size(); i-- > 0;) {
    bool used = false;
    for (const std::string& v : steps[i].binds) used = used || needed.count(v) > 0;
    if (!used) continue;
    keep[i] = true;
    for (const std::string& v : steps[i].binds) needed.erase(v);
    needed.insert(steps[i].prereq.begin(), steps[i].prereq.end());
  }
  std::vector<BodyLiteral> out;
  for (size_t i = 0; i < steps.size(); ++i)
    if (keep[i]) out.push_back(*steps[i].lit);
  return out;
}

}  // namespace

Program standardize(const Program& p) {
  Program out = p;

  std::set<std::string> preds;
  auto note_body = [&preds](const std::vector<BodyLiteral>& body) {
    for (const BodyLiteral& lit : body) {
      if (lit.is_standard()) {
        preds.insert(lit.standard().predicate);
      } else if (lit.is_aggregate()) {
        const AggregateAtom& a = lit.aggregate();
        if (a.has_symbolic_set()) {
          for (const StandardLiteral& l : a.symbolic().conj) preds.insert(l.atom.predicate);
        } else {
          for (const GroundSetElement& e : a.ground_set().elements)
            for (const StandardLiteral& l : e.conj) preds.insert(l.atom.predicate);
        }
      }
    }
  };
  for (const Rule& r : p.rules) {
    for (const StandardAtom& h : r.head) preds.insert(h.predicate);
    note_body(r.body);
  }
  for (const WeakConstraint& w : p.weaks) note_body(w.body);

  int counter = 0;
  auto fresh_pred = [&]() {
    std::string name;
    do {
      name = "#aux" + std::to_string(counter++);
    } while (preds.count(name));
    preds.insert(name);
    return name;
  };

  std::vector<Rule> definitions;
  auto rewrite_body = [&](std::vector<BodyLiteral>& body, SourceLoc loc) {
    for (BodyLiteral& lit : body) {
      if (!lit.is_aggregate()) continue;
      AggregateAtom& a = lit.aggregate();
      if (a.has_symbolic_set() && a.symbolic().conj.size() > 1) {
        const SymbolicSet s = a.symbolic();
        std::vector<std::string> args = conj_vars_in_order(s.conj);

        StandardAtom head{fresh_pred(), {}};
        for (const std::string& v : args) head.args.push_back(Term::variable(v));

        Rule def;
        def.loc = loc;
        def.head.push_back(head);
        for (const StandardLiteral& l : s.conj) def.body.push_back({l.negated, l.atom});

        // Variables the conjunction leaves unbound (they occur only under
        // negation) are bound by copying the host's binding literals; the
        // host body implies them wherever the aggregate matters, so the
        // visible answer sets are unchanged.
        std::set<std::string> bound;
        for (const StandardLiteral& l : s.conj)
          if (!l.negated) collect_vars(l.atom, bound);
        std::set<std::string> needed(args.begin(), args.end());
        for (const std::string& v : bound) needed.erase(v);
        if (!needed.empty())
          for (const BodyLiteral& b : binding_support(body, needed, bound))
            def.body.push_back(b);
        definitions.push_back(std::move(def));

        a.set = SymbolicSet{s.vars, {StandardLiteral{false, head}}};
      }
      normalize_aggregate_guards(a);
    }
  };
  for (Rule& r : out.rules) rewrite_body(r.body, r.loc);
  for (WeakConstraint& w : out.weaks) rewrite_body(w.body, w.loc);
  out.rules.insert(out.rules.end(), definitions.begin(), definitions.end());
  return out;
}

namespace {

enum class St { fact, potential, absent };

// One ground instance awaiting the end of its component: partial evaluation
// against atoms of the still-open component happens when the component
// closes and their statuses are final.
struct Record {
  size_t statement = 0;
  bool weak = false;
  bool alive = true;
  std::vector<StandardAtom> head;
  std::vector<BodyLiteral> body;
  uint64_t weight = 1;
  uint64_t level = 1;
};

struct Extension {
  std::map<std::vector<Constant>, bool> atoms;  // args -> decided true
  std::vector<std::vector<Constant>> delta;     // additions of the last round
  std::vector<std::vector<Constant>> fresh;     // additions of this round
};

class Grounder {
 public:
  Grounder(const Program& p, const GroundOptions& opts) : prog_(p), opts_(opts) {}

  GroundResult run() { return opts_.naive ? run_naive() : run_intelligent(); }

 private:
  struct Ctx {
    size_t statement = 0;
    bool weak = false;
    SourceLoc loc;
    const std::vector<StandardAtom>* head = nullptr;
    const std::vector<BodyLiteral>* body = nullptr;
    const Term* weight = nullptr;
    const Term* level = nullptr;
    int delta_pos = -1;  // body position joined against the delta list
  };

  // ---- shared bookkeeping ----

  const VariableClasses& classes(size_t statement) {
    if (classes_.empty()) {
      for (const Rule& r : prog_.rules) classes_.push_back(classify_variables(r));
      for (const WeakConstraint& w : prog_.weaks) classes_.push_back(classify_variables(w));
    }
    return classes_[statement];
  }

  Ctx context(size_t statement, int delta_pos = -1) {
    Ctx c;
    c.statement = statement;
    c.delta_pos = delta_pos;
    if (statement < prog_.rules.size()) {
      const Rule& r = prog_.rules[statement];
      c.head = &r.head;
      c.body = &r.body;
      c.loc = r.loc;
    } else {
      const WeakConstraint& w = prog_.weaks[statement - prog_.rules.size()];
      static const std::vector<StandardAtom> no_head;
      c.weak = true;
      c.head = &no_head;
      c.body = &w.body;
      c.weight = &w.weight;
      c.level = &w.level;
      c.loc = w.loc;
    }
    return c;
  }

  void bump_statement_stats(size_t statement, size_t footprint) {
    StatementStats& s = statement < prog_.rules.size()
                            ? stats_.per_rule[statement]
                            : stats_.per_weak[statement - prog_.rules.size()];
    s.instances += 1;
    s.footprint += footprint;
  }

  void charge(size_t n = 1) {
    charged_ += n;
    if (charged_ > opts_.instance_cap)
      throw FatalError(make_error("capacity", {},
                                  "ground program exceeds " +
                                      std::to_string(opts_.instance_cap) + " instances"));
  }

  void tick_iteration() {
    if (++iterations_ > iteration_budget_)
      throw FatalError(make_error("capacity", {},
                                  "instantiation abandoned after " +
                                      std::to_string(iteration_budget_) + " join steps"));
  }

  static size_t footprint_of(const Record& rec) {
    size_t n = 0;
    for (const BodyLiteral& lit : rec.body) {
      if (lit.is_standard()) {
        n += 1;
      } else if (lit.is_aggregate()) {
        n += lit.aggregate().ground_set().elements.size();
      }
    }
    return n;
  }

  // Textual identity. Literal order is kept: two instances count as
  // duplicates only when they are the same derivation printed again, not
  // when different substitutions happen to produce set-equal bodies.
  static std::string canonical_key(const Record& rec) {
    std::string key = rec.weak ? "~" : "";
    for (const StandardAtom& h : rec.head) key += to_string(h) + "|";
    key += ":-";
    for (const BodyLiteral& l : rec.body) key += to_string(l) + "|";
    if (rec.weak) key += "[" + std::to_string(rec.weight) + ":" + std::to_string(rec.level) + "]";
    return key;
  }

  void emit(const Record& rec) {
    if (opts_.dedup && !emitted_keys_.insert(canonical_key(rec)).second) return;
    bump_statement_stats(rec.statement, footprint_of(rec));
    if (rec.weak) {
      out_.weaks.push_back(WeakConstraint{rec.body, Term::number(rec.weight),
                                          Term::number(rec.level), SourceLoc{}});
    } else {
      out_.rules.push_back(Rule{rec.head, rec.body, SourceLoc{}});
    }
  }

  // ---- status ----

  St status(const StandardAtom& ground) {
    auto pit = ext_.find(ground.predicate);
    if (pit == ext_.end()) return St::absent;
    auto it = pit->second.atoms.find(const_args(ground));
    if (it == pit->second.atoms.end()) return St::absent;
    return it->second ? St::fact : St::potential;
  }

  // Whether the atom's component is still being iterated (its absence is not
  // yet a decision).
  bool open(const std::string& pred) const {
    if (current_comp_ < 0) return false;
    int n = graph_.node(pred);
    return n >= 0 && comps_.component_of[n] == current_comp_;
  }

  void set_fact(const StandardAtom& ground) {
    Extension& e = ext_[ground.predicate];
    std::vector<Constant> args = const_args(ground);
    auto [it, fresh] = e.atoms.emplace(args, true);
    if (!fresh && it->second) return;
    it->second = true;
    e.fresh.push_back(std::move(args));
  }

  void set_potential(const StandardAtom& ground) {
    Extension& e = ext_[ground.predicate];
    std::vector<Constant> args = const_args(ground);
    auto [it, fresh] = e.atoms.emplace(std::move(args), false);
    if (fresh) e.fresh.push_back(it->first);
  }

  // ---- joining ----

  static bool unify(const StandardAtom& lit, const std::vector<Constant>& args, Subst& s) {
    if (lit.args.size() != args.size()) return false;
    for (size_t i = 0; i < args.size(); ++i) {
      const Term& t = lit.args[i];
      if (!t.is_var()) {
        if (!(t.value == args[i])) return false;
        continue;
      }
      auto [it, fresh] = s.emplace(t.var, args[i]);
      if (!fresh && !(it->second == args[i])) return false;
    }
    return true;
  }

  static int bound_args(const StandardAtom& a, const Subst& s) {
    int n = 0;
    for (const Term& t : a.args)
      if (!t.is_var() || s.count(t.var)) ++n;
    return n;
  }

  // Values of the single unbound argument of a builtin. Usually zero or one;
  // the inverse of a multiplication by zero is the whole integer range.
  std::vector<Constant> builtin_bindings(const BuiltinAtom& b, const Subst& s,
                                         std::string* var) {
    std::vector<const Term*> terms{&b.lhs, &b.rhs};
    if (b.arith != BuiltinAtom::Arith::none) terms.push_back(&b.rhs2);
    int open = -1;
    for (size_t i = 0; i < terms.size(); ++i)
      if (terms[i]->is_var() && !s.count(terms[i]->var)) open = static_cast<int>(i);
    *var = terms[open]->var;

    if (b.arith == BuiltinAtom::Arith::none) {
      // lhs = rhs with one side open binds it to the other side's value.
      const Term& other = subst_term(*terms[1 - open], s);
      return {other.value};
    }

    auto value = [&](int i) { return subst_term(*terms[i], s).value; };
    std::vector<uint64_t> v(3, 0);
    for (int i = 0; i < 3; ++i) {
      if (i == open) continue;
      Constant c = value(i);
      if (!c.is_number || c.number > opts_.maxint) return {};
      v[i] = c.number;
    }
    bool times = b.arith == BuiltinAtom::Arith::times;
    auto result = [&](uint64_t r) -> std::vector<Constant> {
      if (r > opts_.maxint) return {};
      return {Constant::num(r)};
    };
    if (open == 0) return result(times ? v[1] * v[2] : v[1] + v[2]);
    int known = open == 1 ? 2 : 1;  // the other operand
    uint64_t x = v[0], y = v[known];
    if (!times) return x >= y ? result(x - y) : std::vector<Constant>{};
    if (y == 0) {
      if (x != 0) return {};
      std::vector<Constant> all;  // 0 = 0 * V holds for the whole range
      for (uint64_t i = 0; i <= opts_.maxint; ++i) all.push_back(Constant::num(i));
      return all;
    }
    if (x % y != 0) return {};
    return result(x / y);
  }

  bool assignment_ready(const AggregateAtom& a, size_t statement, const Subst& s) {
    if (!a.has_symbolic_set()) return true;
    const VariableClasses& cls = classes(statement);
    for (const std::string& v : vars_of_symbolic_set(a.symbolic()))
      if (cls.global.count(v) && !s.count(v)) return false;
    return true;
  }

  const Term& assignment_guard(const AggregateAtom& a) {
    return a.left.term.is_var() ? a.left.term : a.right.term;
  }

  // Ground elements of a symbolic set under the global substitution, reading
  // the current extensions. Decided-true conjunctions fold into elements
  // with an empty conjunction so that coinciding tuples still collapse;
  // decided-false ones drop their element.
  std::vector<GroundSetElement> instantiate_elements(const SymbolicSet& s, const Subst& sigma,
                                                     bool* undecided) {
    std::vector<GroundSetElement> elems;
    if (s.conj.size() != 1)
      throw std::logic_error("set conjunction not standardized before grounding");
    const StandardLiteral& conj = s.conj.front();

    auto tuple_of = [&](const Subst& full) {
      std::vector<Constant> tuple;
      for (const std::string& v : s.vars) {
        auto it = full.find(v);
        if (it == full.end())
          throw std::logic_error("unbound set variable " + v + " at instantiation");
        tuple.push_back(it->second);
      }
      return tuple;
    };

    if (!conj.negated) {
      auto pit = ext_.find(conj.atom.predicate);
      if (pit != ext_.end()) {
        for (const auto& [args, fact] : pit->second.atoms) {
          Subst full = sigma;
          if (!unify(conj.atom, args, full)) continue;
          tick_iteration();
          GroundSetElement e;
          e.tuple = tuple_of(full);
          if (!fact) {
            e.conj.push_back({false, atom_of(conj.atom.predicate, args)});
            *undecided = true;
          }
          elems.push_back(std::move(e));
        }
      }
      return elems;
    }

    // Negated conjunctions carry globals only; a single candidate element.
    StandardAtom g = subst_atom(conj.atom, sigma);
    GroundSetElement e;
    e.tuple = tuple_of(sigma);
    switch (status(g)) {
      case St::fact: return elems;  // conjunction false, element gone
      case St::potential:
        e.conj.push_back({true, g});
        *undecided = true;
        break;
      case St::absent: break;  // nested components are closed: decided true
    }
    elems.push_back(std::move(e));
    return elems;
  }

  // Partial evaluation of a source-level ground set: decided literals leave
  // the element conjunctions, false ones remove their element.
  std::vector<GroundSetElement> fold_ground_set(const GroundSet& gs, bool* undecided) {
    std::vector<GroundSetElement> elems;
    for (const GroundSetElement& e : gs.elements) {
      GroundSetElement out;
      out.tuple = e.tuple;
      bool dead = false;
      for (const StandardLiteral& l : e.conj) {
        St st = status(l.atom);
        bool openp = open(l.atom.predicate);
        if (!l.negated) {
          if (st == St::fact) continue;
          if (st == St::potential || openp) {
            out.conj.push_back(l);
          } else {
            dead = true;
          }
        } else {
          if (st == St::fact) {
            dead = true;
          } else if (st == St::potential || openp) {
            out.conj.push_back(l);
          }
        }
        if (dead) break;
      }
      if (dead) continue;
      if (!out.conj.empty()) *undecided = true;
      elems.push_back(std::move(out));
    }
    return elems;
  }

  // The decided value of an assignment aggregate; nullopt for bottom.
  std::optional<Constant> eval_assignment(const AggregateAtom& a, const Subst& sigma) {
    bool undecided = false;
    std::vector<GroundSetElement> elems =
        a.has_symbolic_set() ? instantiate_elements(a.symbolic(), sigma, &undecided)
                             : fold_ground_set(a.ground_set(), &undecided);
    if (undecided)
      throw std::logic_error("assignment aggregate over an undecided extension");
    GroundSet gs = GroundSet::of(std::move(elems));
    AggregateValue v =
        apply_function(a.fn, valuate_set(gs, {}), opts_.maxint, &warnings_);
    if (v.bottom) return std::nullopt;
    return Constant::num(v.value);
  }

  // Grounds one non-binding aggregate literal. Returns a decided truth value
  // or stores the residual atom through `residual`.
  std::optional<bool> ground_aggregate(const BodyLiteral& lit, const Subst& sigma,
                                       SourceLoc loc, AggregateAtom* residual) {
    AggregateAtom a = lit.aggregate();
    a.left.term = subst_term(a.left.term, sigma);
    if (!a.right.plus_inf) a.right.term = subst_term(a.right.term, sigma);
    for (const Guard* g : {&a.left, &a.right}) {
      if (g == &a.right && a.right.plus_inf) continue;
      if (g->term.is_var())
        throw std::logic_error("unbound aggregate guard at instantiation");
      if (!g->term.value.is_number)
        throw FatalError(make_error("guard", loc,
                                    "aggregate guard is not a number: " +
                                        to_string(g->term.value)));
    }
    fold_numeric_guards(a);

    bool undecided = false;
    std::vector<GroundSetElement> elems =
        a.has_symbolic_set() ? instantiate_elements(a.symbolic(), sigma, &undecided)
                             : fold_ground_set(a.ground_set(), &undecided);
    a.set = GroundSet::of(std::move(elems));
    if (!undecided) {
      bool truth = eval_aggregate_atom(a, {}, opts_.maxint, &warnings_);
      return lit.negated ? !truth : truth;
    }
    *residual = std::move(a);
    return std::nullopt;
  }

  // Produces the record for one complete global substitution, evaluating
  // whatever the current statuses decide. Literals over atoms of the open
  // component stay put; the close pass owns them.
  void finalize(const Ctx& ctx, const Subst& sigma) {
    tick_iteration();
    Record rec;
    rec.statement = ctx.statement;
    rec.weak = ctx.weak;

    for (const BodyLiteral& lit : *ctx.body) {
      if (lit.is_standard()) {
        StandardAtom g = subst_atom(lit.standard(), sigma);
        St st = status(g);
        if (!lit.negated) {
          if (st == St::fact) continue;
          if (st == St::absent && !open(g.predicate)) return;
          rec.body.push_back({false, std::move(g)});
        } else {
          if (st == St::fact) return;
          if (st == St::absent && !open(g.predicate)) continue;
          rec.body.push_back({true, std::move(g)});
        }
      } else if (lit.is_builtin()) {
        bool v = eval_builtin(subst_builtin(lit.builtin(), sigma), opts_.maxint);
        if (lit.negated) v = !v;
        if (!v) return;
      } else {
        AggregateAtom residual;
        std::optional<bool> decided = ground_aggregate(lit, sigma, ctx.loc, &residual);
        if (decided) {
          if (!*decided) return;
          continue;
        }
        rec.body.push_back(BodyLiteral{lit.negated, std::move(residual)});
      }
    }

    if (ctx.weak) {
      Term w = subst_term(*ctx.weight, sigma);
      Term l = subst_term(*ctx.level, sigma);
      for (const Term* t : {&w, &l}) {
        if (t->is_var() || !t->value.is_number)
          throw FatalError(make_error("guard", ctx.loc,
                                      "weak constraint weight and level must be numbers"));
      }
      if (l.value.number == 0)
        throw FatalError(make_error("guard", ctx.loc,
                                    "weak constraint level must be positive"));
      rec.weight = w.value.number;
      rec.level = l.value.number;
    }

    for (const StandardAtom& h : *ctx.head) {
      StandardAtom g = subst_atom(h, sigma);
      if (status(g) == St::fact) return;  // already satisfied
      rec.head.push_back(std::move(g));
    }

    stats_.instances_total += 1;
    charge();

    if (!ctx.weak && rec.body.empty() && rec.head.size() == 1) {
      set_fact(rec.head.front());
      return;
    }
    for (const StandardAtom& h : rec.head) set_potential(h);
    if (opts_.dedup && !record_keys_.insert(canonical_key(rec)).second) return;
    records_.push_back(std::move(rec));
  }

  // Depth-first join: exhaust deterministic bindings (builtins, assignment
  // aggregates), then branch over the extension of the most-bound positive
  // literal.
  void solve(const Ctx& ctx, std::vector<size_t> pos, std::vector<size_t> bis,
             std::vector<size_t> asg, Subst sigma) {
    tick_iteration();
    const std::vector<BodyLiteral>& body = *ctx.body;

    bool progress = true;
    while (progress) {
      progress = false;
      for (auto it = bis.begin(); it != bis.end();) {
        const BodyLiteral& lit = body[*it];
        const BuiltinAtom& b = lit.builtin();
        std::vector<const Term*> terms{&b.lhs, &b.rhs};
        if (b.arith != BuiltinAtom::Arith::none) terms.push_back(&b.rhs2);
        int unbound = 0;
        for (const Term* t : terms)
          if (t->is_var() && !sigma.count(t->var)) ++unbound;
        if (unbound == 0) {
          bool v = eval_builtin(subst_builtin(b, sigma), opts_.maxint);
          if (lit.negated) v = !v;
          if (!v) return;
          it = bis.erase(it);
          progress = true;
        } else if (unbound == 1 && !lit.negated &&
                   (b.arith != BuiltinAtom::Arith::none || b.rel == CmpOp::eq)) {
          std::string var;
          std::vector<Constant> values = builtin_bindings(b, sigma, &var);
          if (values.empty()) return;
          if (values.size() == 1) {
            sigma[var] = values.front();
            it = bis.erase(it);
            progress = true;
          } else {
            std::vector<size_t> rest(bis.begin(), bis.end());
            rest.erase(std::find(rest.begin(), rest.end(), *it));
            for (const Constant& c : values) {
              Subst s2 = sigma;
              s2[var] = c;
              solve(ctx, pos, rest, asg, std::move(s2));
            }
            return;
          }
        } else {
          ++it;
        }
      }
      for (auto it = asg.begin(); it != asg.end();) {
        const AggregateAtom& a = body[*it].aggregate();
        if (!assignment_ready(a, ctx.statement, sigma)) {
          ++it;
          continue;
        }
        std::optional<Constant> v = eval_assignment(a, sigma);
        if (!v) return;
        const Term& guard = assignment_guard(a);
        auto f = sigma.find(guard.var);
        if (f != sigma.end()) {
          if (!(f->second == *v)) return;
        } else {
          sigma[guard.var] = *v;
        }
        it = asg.erase(it);
        progress = true;
      }
    }

    if (!pos.empty()) {
      size_t pick = 0;
      int best = -1;
      for (size_t k = 0; k < pos.size(); ++k) {
        int n = bound_args(body[pos[k]].standard(), sigma);
        if (n > best) {
          best = n;
          pick = k;
        }
      }
      size_t position = pos[pick];
      std::vector<size_t> rest = pos;
      rest.erase(rest.begin() + pick);
      const StandardAtom& lit = body[position].standard();
      Extension& e = ext_[lit.predicate];
      if (static_cast<int>(position) == ctx.delta_pos) {
        for (const std::vector<Constant>& args : e.delta) {
          tick_iteration();
          Subst s2 = sigma;
          if (unify(lit, args, s2)) solve(ctx, rest, bis, asg, std::move(s2));
        }
      } else {
        for (const auto& [args, fact] : e.atoms) {
          tick_iteration();
          Subst s2 = sigma;
          if (unify(lit, args, s2)) solve(ctx, rest, bis, asg, std::move(s2));
        }
      }
      return;
    }

    finalize(ctx, sigma);
  }

  void join(const Ctx& ctx) {
    const std::vector<BodyLiteral>& body = *ctx.body;
    std::vector<size_t> pos, bis, asg;
    for (size_t i = 0; i < body.size(); ++i) {
      const BodyLiteral& lit = body[i];
      if (lit.is_standard() && !lit.negated) {
        pos.push_back(i);
      } else if (lit.is_builtin()) {
        bis.push_back(i);
      } else if (lit.is_aggregate() && !lit.negated &&
                 assignment_sites_[ctx.statement].count(i)) {
        asg.push_back(i);
      }
    }
    solve(ctx, std::move(pos), std::move(bis), std::move(asg), {});
  }

  // ---- intelligent mode ----

  void process_component(int comp, const std::vector<size_t>& rule_indices) {
    current_comp_ = comp;
    records_.clear();
    record_keys_.clear();
    for (auto& [pred, e] : ext_) {
      e.delta.clear();
      e.fresh.clear();
    }

    std::vector<std::vector<int>> recursive(rule_indices.size());
    for (size_t k = 0; k < rule_indices.size(); ++k) {
      const Rule& r = prog_.rules[rule_indices[k]];
      for (size_t i = 0; i < r.body.size(); ++i) {
        const BodyLiteral& lit = r.body[i];
        if (lit.is_standard() && !lit.negated && open(lit.standard().predicate))
          recursive[k].push_back(static_cast<int>(i));
      }
    }

    for (size_t k = 0; k < rule_indices.size(); ++k) join(context(rule_indices[k]));
    while (true) {
      bool any = false;
      for (auto& [pred, e] : ext_) {
        e.delta = std::move(e.fresh);
        e.fresh.clear();
        any = any || !e.delta.empty();
      }
      if (!any) break;
      for (size_t k = 0; k < rule_indices.size(); ++k)
        for (int p : recursive[k]) join(context(rule_indices[k], p));
    }

    close_component(comp);
    current_comp_ = -1;
  }

  // Final partial evaluation of the component's records now that absence is
  // a decision. Iterated because dropping a negated literal can complete a
  // body, promote its head to a fact, and invalidate other records, and a
  // dead record can strand the potential atoms it supported.
  void close_component(int comp) {
    current_comp_ = -1;
    bool changed = true;
    while (changed) {
      changed = false;

      std::map<std::string, std::set<std::vector<Constant>>> live;
      for (const Record& rec : records_) {
        if (!rec.alive) continue;
        for (const StandardAtom& h : rec.head) live[h.predicate].insert(const_args(h));
      }
      for (auto& [pred, e] : ext_) {
        int n = graph_.node(pred);
        if (n < 0 || comps_.component_of[n] != comp) continue;
        for (auto it = e.atoms.begin(); it != e.atoms.end();) {
          if (!it->second && !live[pred].count(it->first)) {
            it = e.atoms.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
      }

      for (Record& rec : records_) {
        if (!rec.alive) continue;
        std::vector<BodyLiteral> kept;
        bool dead = false;
        for (BodyLiteral& lit : rec.body) {
          if (!lit.is_standard()) {
            kept.push_back(std::move(lit));
            continue;
          }
          St st = status(lit.standard());
          if (!lit.negated) {
            if (st == St::fact) {
              changed = true;
            } else if (st == St::absent) {
              dead = true;
              break;
            } else {
              kept.push_back(std::move(lit));
            }
          } else {
            if (st == St::fact) {
              dead = true;
              break;
            }
            if (st == St::absent) {
              changed = true;
            } else {
              kept.push_back(std::move(lit));
            }
          }
        }
        if (dead) {
          rec.alive = false;
          changed = true;
          continue;
        }
        rec.body = std::move(kept);
        for (const StandardAtom& h : rec.head) {
          if (status(h) == St::fact) {
            rec.alive = false;
            changed = true;
            break;
          }
        }
        if (!rec.alive) continue;
        if (!rec.weak && rec.body.empty() && rec.head.size() == 1) {
          set_fact(rec.head.front());
          rec.alive = false;
          changed = true;
        }
      }
    }

    for (const Record& rec : records_) {
      if (rec.alive) emit(rec);
    }
  }

  GroundResult run_intelligent() {
    graph_ = DependencyGraph::of(prog_);
    comps_ = condensation(graph_);
    stats_.per_rule.resize(prog_.rules.size());
    stats_.per_weak.resize(prog_.weaks.size());
    for (const AssignmentSite& s : detect_assignment_aggregates(prog_))
      assignment_sites_[s.statement].insert(s.body_position);

    std::map<int, std::vector<size_t>> by_comp;
    std::vector<size_t> constraints;
    for (size_t i = 0; i < prog_.rules.size(); ++i) {
      const Rule& r = prog_.rules[i];
      if (r.head.empty()) {
        constraints.push_back(i);
        continue;
      }
      int comp = comps_.component_of[graph_.node(r.head.front().predicate)];
      for (const StandardAtom& h : r.head) {
        if (comps_.component_of[graph_.node(h.predicate)] != comp)
          throw std::logic_error("head atoms split across components");
      }
      by_comp[comp].push_back(i);
    }

    for (int comp : comps_.topo_order) {
      auto it = by_comp.find(comp);
      process_component(comp, it == by_comp.end() ? std::vector<size_t>{} : it->second);
    }

    // Constraints and weak constraints consume only; every extension is
    // final, so their records need no close pass.
    records_.clear();
    record_keys_.clear();
    current_comp_ = -1;
    for (size_t i : constraints) join(context(i));
    for (size_t w = 0; w < prog_.weaks.size(); ++w) join(context(prog_.rules.size() + w));
    for (const Record& rec : records_)
      if (rec.alive) emit(rec);

    for (const auto& [pred, e] : ext_)
      for (const auto& [args, fact] : e.atoms)
        if (fact) out_.facts.insert(atom_of(pred, args));

    refresh_program_stats(out_, stats_);
    return {std::move(out_), std::move(stats_), std::move(warnings_)};
  }

  // ---- naive mode ----

  // The exhaustive universe: program constants, closed under the bounded
  // arithmetic when arithmetic builtins occur, plus every constant the
  // evaluating grounder derives (assignment aggregate values live only
  // there).
  std::vector<Constant> naive_universe() {
    bool arith = false;
    auto scan = [&arith](const std::vector<BodyLiteral>& body) {
      for (const BodyLiteral& lit : body)
        arith = arith || (lit.is_builtin() && lit.builtin().arith != BuiltinAtom::Arith::none);
    };
    for (const Rule& r : prog_.rules) scan(r.body);
    for (const WeakConstraint& w : prog_.weaks) scan(w.body);

    std::vector<Constant> extra;
    if (arith) {
      std::set<uint64_t> nums;
      for (const Constant& c : herbrand_universe(prog_))
        if (c.is_number && c.number <= opts_.maxint) nums.insert(c.number);
      bool grow = true;
      while (grow) {
        grow = false;
        std::vector<uint64_t> snapshot(nums.begin(), nums.end());
        for (uint64_t a : snapshot) {
          for (uint64_t b : snapshot) {
            uint64_t cands[4];
            size_t n = 0;
            if (a + b <= opts_.maxint) cands[n++] = a + b;
            if (b != 0 && a <= opts_.maxint / b) cands[n++] = a * b;
            if (a >= b) cands[n++] = a - b;
            if (b != 0 && a % b == 0) cands[n++] = a / b;
            for (size_t i = 0; i < n; ++i) grow = nums.insert(cands[i]).second || grow;
          }
        }
      }
      for (uint64_t v : nums) extra.push_back(Constant::num(v));
    }

    if (!detect_assignment_aggregates(prog_).empty()) {
      try {
        Grounder evaluating(prog_, GroundOptions{opts_.maxint, opts_.instance_cap, false});
        GroundResult r = evaluating.run();
        auto note_atom = [&extra](const StandardAtom& a) {
          for (const Term& t : a.args)
            if (!t.is_var()) extra.push_back(t.value);
        };
        for (const StandardAtom& a : r.program.facts) note_atom(a);
        for (const Rule& rule : r.program.rules) {
          for (const StandardAtom& h : rule.head) note_atom(h);
          for (const BodyLiteral& lit : rule.body) {
            if (lit.is_standard()) {
              note_atom(lit.standard());
            } else if (lit.is_aggregate()) {
              const AggregateAtom& a = lit.aggregate();
              if (!a.left.term.is_var()) extra.push_back(a.left.term.value);
              if (!a.right.plus_inf && !a.right.term.is_var())
                extra.push_back(a.right.term.value);
              for (const GroundSetElement& e : a.ground_set().elements) {
                for (const Constant& c : e.tuple) extra.push_back(c);
                for (const StandardLiteral& l : e.conj) note_atom(l.atom);
              }
            }
          }
        }
        for (const WeakConstraint& w : r.program.weaks) {
          if (!w.weight.is_var()) extra.push_back(w.weight.value);
          if (!w.level.is_var()) extra.push_back(w.level.value);
        }
      } catch (const FatalError&) {
        // The evaluating pass failing (capacity, domain errors) leaves the
        // base universe; the exhaustive grounding stays well-defined.
      }
    }
    return extra;
  }

  void naive_statement(size_t statement, const std::vector<Constant>& universe) {
    Ctx ctx = context(statement);
    const VariableClasses& cls = classes(statement);
    std::vector<std::string> globals(cls.global.begin(), cls.global.end());
    if (!globals.empty() && universe.empty()) return;

    Subst sigma;
    std::vector<size_t> odometer(globals.size(), 0);
    while (true) {
      tick_iteration();
      for (size_t i = 0; i < globals.size(); ++i) sigma[globals[i]] = universe[odometer[i]];
      naive_instance(ctx, sigma);

      size_t i = 0;
      for (; i < globals.size(); ++i) {
        if (++odometer[i] < universe.size()) break;
        odometer[i] = 0;
      }
      if (i == globals.size()) break;
    }
  }

  void naive_instance(const Ctx& ctx, const Subst& sigma) {
    Record rec;
    rec.statement = ctx.statement;
    rec.weak = ctx.weak;

    for (const BodyLiteral& lit : *ctx.body) {
      if (lit.is_standard()) {
        rec.body.push_back({lit.negated, subst_atom(lit.standard(), sigma)});
      } else if (lit.is_builtin()) {
        bool v = eval_builtin(subst_builtin(lit.builtin(), sigma), opts_.maxint);
        if (lit.negated) v = !v;
        if (!v) return;
      } else {
        rec.body.push_back({lit.negated, naive_aggregate(lit.aggregate(), sigma)});
      }
    }

    if (ctx.weak) {
      Term w = subst_term(*ctx.weight, sigma);
      Term l = subst_term(*ctx.level, sigma);
      // Substitutions of symbols into weight or level positions name
      // instances no answer set can make fire; skip them silently.
      if (w.is_var() || l.is_var() || !w.value.is_number || !l.value.is_number) return;
      if (l.value.number == 0)
        throw FatalError(make_error("guard", ctx.loc,
                                    "weak constraint level must be positive"));
      rec.weight = w.value.number;
      rec.level = l.value.number;
    }
    for (const StandardAtom& h : *ctx.head) rec.head.push_back(subst_atom(h, sigma));

    stats_.instances_total += 1;
    charge();
    if (opts_.dedup && !emitted_keys_.insert(canonical_key(rec)).second) return;
    bump_statement_stats(rec.statement, footprint_of(rec));
    if (rec.weak) {
      out_.weaks.push_back(WeakConstraint{rec.body, Term::number(rec.weight),
                                          Term::number(rec.level), SourceLoc{}});
    } else {
      out_.rules.push_back(Rule{rec.head, rec.body, SourceLoc{}});
    }
  }

  AggregateAtom naive_aggregate(const AggregateAtom& src, const Subst& sigma) {
    AggregateAtom a = src;
    normalize_aggregate_guards(a);
    a.left.term = subst_term(a.left.term, sigma);
    if (!a.right.plus_inf) a.right.term = subst_term(a.right.term, sigma);
    fold_numeric_guards(a);
    if (!a.has_symbolic_set()) return a;

    const SymbolicSet s = a.symbolic();
    std::vector<std::string> locals;
    for (const std::string& v : vars_of_symbolic_set(s))
      if (!sigma.count(v)) locals.push_back(v);

    std::vector<GroundSetElement> elems;
    if (locals.empty() || !universe_.empty()) {
      std::vector<size_t> odometer(locals.size(), 0);
      while (true) {
        tick_iteration();
        Subst full = sigma;
        for (size_t i = 0; i < locals.size(); ++i) full[locals[i]] = universe_[odometer[i]];
        GroundSetElement e;
        for (const std::string& v : s.vars) e.tuple.push_back(full.at(v));
        for (const StandardLiteral& l : s.conj)
          e.conj.push_back({l.negated, subst_atom(l.atom, full)});
        charge();
        elems.push_back(std::move(e));
        size_t i = 0;
        for (; i < locals.size(); ++i) {
          if (++odometer[i] < universe_.size()) break;
          odometer[i] = 0;
        }
        if (i == locals.size()) break;
      }
    }
    a.set = GroundSet::of(std::move(elems));
    return a;
  }

  GroundResult run_naive() {
    stats_.per_rule.resize(prog_.rules.size());
    stats_.per_weak.resize(prog_.weaks.size());
    universe_ = herbrand_universe(prog_, naive_universe());

    for (size_t i = 0; i < prog_.rules.size(); ++i) naive_statement(i, universe_);
    for (size_t w = 0; w < prog_.weaks.size(); ++w)
      naive_statement(prog_.rules.size() + w, universe_);

    refresh_program_stats(out_, stats_);
    return {std::move(out_), std::move(stats_), std::move(warnings_)};
  }

  const Program& prog_;
  GroundOptions opts_;

  DependencyGraph graph_;
  Components comps_;
  std::vector<VariableClasses> classes_;
  std::map<size_t, std::set<size_t>> assignment_sites_;
  std::map<std::string, Extension> ext_;
  int current_comp_ = -1;

  std::vector<Record> records_;
  std::set<std::string> record_keys_;
  std::set<std::string> emitted_keys_;
  std::vector<Constant> universe_;  // naive mode

  GroundProgram out_;
  GroundStats stats_;
  std::vector<Diagnostic> warnings_;
  size_t charged_ = 0;
  size_t iterations_ = 0;
  size_t iteration_budget_ = 100000000;
};

}  // namespace

GroundResult ground(const Program& p, const GroundOptions& opts) {
  Grounder g(p, opts);
  return g.run();
}

}  // namespace dlpa
