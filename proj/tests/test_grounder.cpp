// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "dlpa/analysis.hpp"
#include "dlpa/grounder.hpp"
#include "dlpa/parser.hpp"
#include "dlpa/printer.hpp"
#include "support.hpp"

using namespace dlpa;
using test::atom;
using test::corpus;
using test::ground_text;
using test::parse_ok;

namespace {

bool is_aux(const StandardAtom& a) { return a.predicate.rfind("#aux", 0) == 0; }

const Rule* rule_with_head(const GroundProgram& g, const std::string& head) {
  for (const Rule& r : g.rules)
    if (!r.head.empty() && to_string(r.head[0]) == head) return &r;
  return nullptr;
}

GroundSetElement elem(std::vector<Constant> tuple, const std::string& conj_atom,
                      bool negated = false) {
  return {std::move(tuple), {StandardLiteral{negated, atom(conj_atom)}}};
}

}  // namespace

TEST_CASE("standardization rewrites conjunctions and normalizes guards") {
  Program p = parse_ok("p(X) :- q(X), 1 < #count{Y : a(X,Y), not b(Y)}.");
  Program s = standardize(p);
  REQUIRE(s.rules.size() == 2);

  const AggregateAtom& agg = s.rules[0].body[1].aggregate();
  CHECK(agg.normalized);
  CHECK(agg.left.term == Term::number(2));
  CHECK(agg.left_op == CmpOp::le);
  CHECK(agg.right.is_default_right());
  REQUIRE(agg.has_symbolic_set());
  CHECK(agg.symbolic().vars == std::vector<std::string>{"Y"});
  REQUIRE(agg.symbolic().conj.size() == 1);
  const StandardAtom& aux = agg.symbolic().conj[0].atom;
  CHECK(is_aux(aux));
  CHECK(aux.args == std::vector<Term>{Term::variable("X"), Term::variable("Y")});

  const Rule& def = s.rules[1];
  REQUIRE(def.head.size() == 1);
  CHECK(def.head[0] == aux);
  REQUIRE(def.body.size() == 2);
  CHECK(def.body[0].standard().predicate == "a");
  CHECK(def.body[1].negated);

  SUBCASE("idempotent") {
    CHECK(standardize(s) == s);
    Program tb = parse_ok(corpus("team_building.dlv"));
    CHECK(standardize(standardize(tb)) == standardize(tb));
  }
}

TEST_CASE("standardization details") {
  SUBCASE("equality expands to a closed interval") {
    Program s = standardize(parse_ok("t :- #sum{X : p(X), q(X)} = 3."));
    const AggregateAtom& a = s.rules[0].body[0].aggregate();
    CHECK(a.left.term == Term::number(3));
    CHECK(a.right.term == Term::number(3));
    CHECK(a.left_op == CmpOp::le);
    CHECK(a.right_op == CmpOp::le);
  }
  SUBCASE("single-literal conjunctions stay put") {
    Program s = standardize(parse_ok("t(X) :- q(X), #sum{Y : p(X,Y)} > 1."));
    REQUIRE(s.rules.size() == 1);
    CHECK(s.rules[0].body[1].aggregate().symbolic().conj[0].atom.predicate == "p");
  }
  SUBCASE("host bindings are copied when the conjunction cannot bind a global") {
    Program s = standardize(parse_ok("p(X) :- q(X), #count{Y : r(Y), not s(X,Y)} > 0."));
    REQUIRE(s.rules.size() == 2);
    const Rule& def = s.rules[1];
    REQUIRE(def.body.size() == 3);
    CHECK(def.body[2].standard().predicate == "q");
    CHECK(check_safety(s, true).safe());
  }
  SUBCASE("weak constraint bodies standardize too") {
    Program s = standardize(parse_ok(":~ #count{Y : a(Y), b(Y)} > 0. a(1). b(1)."));
    REQUIRE(s.weaks.size() == 1);
    CHECK(is_aux(s.weaks[0].body[0].aggregate().symbolic().conj[0].atom));
  }
}

TEST_CASE("exhaustive instantiation of the two-fact sum program") {
  GroundResult gr = ground_text(corpus("p1.dlv"), /*naive=*/true);
  const GroundProgram& g = gr.program;
  CHECK(g.facts.empty());
  REQUIRE(g.rules.size() == 4);
  CHECK(g.weaks.empty());

  CHECK(rule_with_head(g, "q(1)") != nullptr);
  CHECK(rule_with_head(g, "q(2)") != nullptr);
  CHECK(rule_with_head(g, "q(1)")->head.size() == 2);

  const Rule* t1 = rule_with_head(g, "t(1)");
  const Rule* t2 = rule_with_head(g, "t(2)");
  REQUIRE(t1 != nullptr);
  REQUIRE(t2 != nullptr);
  REQUIRE(t1->body.size() == 2);
  CHECK(t1->body[0].standard() == atom("q(1)"));
  const AggregateAtom& a1 = t1->body[1].aggregate();
  CHECK(a1.fn == AggrFn::sum);
  CHECK(a1.left.term == Term::number(2));  // 1 < f folded
  CHECK(a1.right.is_default_right());
  CHECK(a1.ground_set() ==
        GroundSet::of({elem({Constant::num(1)}, "p(1,1)"),
                       elem({Constant::num(2)}, "p(1,2)")}));
  CHECK(t2->body[1].aggregate().ground_set() ==
        GroundSet::of({elem({Constant::num(1)}, "p(2,1)"),
                       elem({Constant::num(2)}, "p(2,2)")}));

  SUBCASE("grounding an already-ground program leaves it alone") {
    GroundResult again = ground_text(to_string(g), /*naive=*/true);
    CHECK(again.program.rules.size() == 4);
    CHECK(to_string(again.program) == to_string(g));
  }
}

TEST_CASE("intelligent instantiation keeps only potentially-true set entries") {
  GroundResult gr = ground_text(
      "q(1). q(2).\n"
      "a(1,a). a(1,b). a(2,c).\n"
      "dom(a). dom(b). dom(c).\n"
      "b(Y) v c(Y) :- dom(Y).\n"
      "p(X) :- q(X), 1 < #count{Y : a(X,Y), not b(Y)}.\n");
  const GroundProgram& g = gr.program;

  const Rule* p1 = rule_with_head(g, "p(1)");
  const Rule* p2 = rule_with_head(g, "p(2)");
  REQUIRE(p1 != nullptr);
  REQUIRE(p2 != nullptr);

  // The decided-true q(X) literal is evaluated away.
  REQUIRE(p1->body.size() == 1);
  REQUIRE(p2->body.size() == 1);

  const AggregateAtom& agg1 = p1->body[0].aggregate();
  CHECK(agg1.left.term == Term::number(2));
  CHECK(agg1.right.is_default_right());
  REQUIRE(agg1.ground_set().elements.size() == 2);
  for (const GroundSetElement& e : agg1.ground_set().elements) {
    REQUIRE(e.tuple.size() == 1);
    REQUIRE(e.conj.size() == 1);
    CHECK(is_aux(e.conj[0].atom));
    CHECK(e.conj[0].atom.args[0] == Term::number(1));
    CHECK(Term::constant(e.tuple[0]) == e.conj[0].atom.args[1]);
  }
  CHECK(agg1.ground_set().elements[0].tuple[0] == Constant::sym("a"));
  CHECK(agg1.ground_set().elements[1].tuple[0] == Constant::sym("b"));

  REQUIRE(p2->body[0].aggregate().ground_set().elements.size() == 1);
  CHECK(p2->body[0].aggregate().ground_set().elements[0].tuple[0] == Constant::sym("c"));

  SUBCASE("aux definitions shrink to their undecided part") {
    size_t aux_rules = 0;
    for (const Rule& r : g.rules)
      if (!r.head.empty() && is_aux(r.head[0])) {
        ++aux_rules;
        REQUIRE(r.body.size() == 1);
        CHECK(r.body[0].negated);
        CHECK(r.body[0].standard().predicate == "b");
      }
    CHECK(aux_rules == 3);
  }
}

TEST_CASE("assignment aggregates are evaluated during grounding") {
  GroundResult gr = ground_text(corpus("assignment_count.dlv"));
  CHECK(gr.program.rules.empty());
  CHECK(gr.program.facts == test::atoms({"p(1)", "p(2)", "cardinality_p(2)"}));

  SUBCASE("the result value enriches the constant universe") {
    GroundResult g2 = ground_text("p(7). p(8). c(N) :- N = #count{X : p(X)}.");
    CHECK(g2.program.facts.count(atom("c(2)")) == 1);
  }
  SUBCASE("downstream rules see the assigned value") {
    GroundResult g2 = ground_text(
        "p(7). p(8). c(N) :- N = #count{X : p(X)}. d(M) :- c(N), M = N + 1.");
    CHECK(g2.program.facts.count(atom("d(3)")) == 1);
  }
}

TEST_CASE("builtins are evaluated away") {
  GroundResult gr = ground_text("q(1). q(2). r(2). p(X,Y) :- q(X), r(Y), X < Y.");
  CHECK(gr.program.rules.empty());
  CHECK(gr.program.facts.count(atom("p(1,2)")) == 1);
  CHECK(gr.program.facts.count(atom("p(2,2)")) == 0);

  SUBCASE("arithmetic instantiates result variables") {
    GroundResult g2 = ground_text("q(1). q(2). s(D) :- q(X), q(Y), D = X + Y.");
    CHECK(g2.program.facts.count(atom("s(2)")) == 1);
    CHECK(g2.program.facts.count(atom("s(3)")) == 1);
    CHECK(g2.program.facts.count(atom("s(4)")) == 1);
    CHECK(g2.program.facts.count(atom("s(5)")) == 0);
  }
  SUBCASE("no residual rule carries a builtin") {
    GroundResult g2 = ground_text(corpus("fastfood.dlv") + corpus("fastfood_inst4.dlv"));
    for (const Rule& r : g2.program.rules)
      for (const BodyLiteral& l : r.body) CHECK_FALSE(l.is_builtin());
  }
}

TEST_CASE("per-statement instance and footprint statistics") {
  GroundResult gr = ground_text(corpus("seating.dlv") + "\n" + corpus("seating_inst3.dlv"));
  const std::vector<StatementStats>& per = gr.stats.per_rule;
  REQUIRE(per.size() >= 5);

  // Guess rule: 3 persons x 2 tables, bodies fully evaluated.
  CHECK(per[0].instances == 6);
  CHECK(per[0].footprint == 0);
  // Chair capacity per table: one instance per table, three set entries each.
  CHECK(per[1].instances == 2);
  CHECK(per[1].footprint == 6);
  // One-table constraint: one instance per person, one set entry per table.
  CHECK(per[2].instances == 3);
  CHECK(per[2].footprint == 3 * 2);
  // like/dislike: one instance per pair and table, two residual literals.
  CHECK(per[3].instances == 2);
  CHECK(per[3].footprint == 4);
  CHECK(per[4].instances == 2);
  CHECK(per[4].footprint == 4);

  CHECK(gr.stats.facts == 8);
  CHECK(gr.stats.instances_total == 23);
  CHECK(gr.stats.set_occurrences == 5);
  CHECK(gr.stats.distinct_sets == 5);
  CHECK(gr.stats.atoms == atoms_of(gr.program).size());
}

TEST_CASE("equal sets are stored once") {
  GroundResult gr = ground_text(
      "p(1) v q(1). p(2) v q(2).\n"
      "c1 :- #count{X : p(X)} > 0.\n"
      "c2 :- #count{X : p(X)} > 1.\n");
  CHECK(gr.stats.set_occurrences == 2);
  CHECK(gr.stats.distinct_sets == 1);

  SUBCASE("different sets stay distinct") {
    GroundResult g2 = ground_text(
        "p(1) v q(1). p(2) v q(2).\n"
        "c1 :- #count{X : p(X)} > 0.\n"
        "c2 :- #count{X : q(X)} > 0.\n");
    CHECK(g2.stats.distinct_sets == 2);
  }
}

TEST_CASE("duplicate instances collapse unless dedup is off") {
  // Both body orders derive the same textual instance once X maps to 1.
  std::string text =
      "d(1).\n"
      "t :- d(X), d(1).\n"
      "t :- d(1), d(X).\n";
  Program p = parse_ok(text);
  REQUIRE(analyze(p).empty());

  GroundOptions on;
  GroundResult with_dedup = ground(standardize(p), on);
  GroundOptions off;
  off.dedup = false;
  GroundResult without = ground(standardize(p), off);

  CHECK(without.stats.instances_total >= with_dedup.stats.instances_total);
  // Same decided atoms either way.
  CHECK(with_dedup.program.facts == without.program.facts);
}

TEST_CASE("grounding failures") {
  SUBCASE("a guard bound to a symbol is a guard error") {
    Program p = parse_ok("q(a). p(1). t :- q(S), #count{X : p(X)} > S.");
    REQUIRE(analyze(p).empty());
    try {
      ground(standardize(p), {});
      FAIL("expected a guard error");
    } catch (const FatalError& e) {
      CHECK(e.diagnostic().tag == "guard");
    }
  }
  SUBCASE("a weight bound to a symbol is a guard error") {
    Program p = parse_ok("e(a). :~ e(W). [W:1]");
    REQUIRE(analyze(p).empty());
    CHECK_THROWS_AS(ground(standardize(p), {}), FatalError);
  }
  SUBCASE("level zero is rejected in both modes") {
    Program p = parse_ok("a. :~ a. [1:0]");
    CHECK_THROWS_AS(ground(standardize(p), {}), FatalError);
    GroundOptions naive;
    naive.naive = true;
    CHECK_THROWS_AS(ground(standardize(p), naive), FatalError);
  }
  SUBCASE("the instance cap aborts oversized groundings") {
    Program p = parse_ok("q(1). q(2). q(3). q(4). p(X,Y) :- q(X), q(Y).");
    GroundOptions opts;
    opts.instance_cap = 10;
    try {
      ground(standardize(p), opts);
      FAIL("expected a capacity error");
    } catch (const FatalError& e) {
      CHECK(e.diagnostic().tag == "capacity");
    }
  }
}

TEST_CASE("residual programs mention potentially-true atoms only") {
  const char* cases[] = {"p4.dlv", "p5.dlv", "propagation_chain.dlv"};
  for (const char* f : cases) {
    CAPTURE(f);
    GroundResult gr = ground_text(corpus(f));
    AtomSet possible = candidate_atoms(gr.program);
    for (const Rule& r : gr.program.rules)
      for (const BodyLiteral& l : r.body) {
        if (l.is_standard()) {
          CHECK(possible.count(l.standard()) == 1);
        } else if (l.is_aggregate()) {
          for (const GroundSetElement& e : l.aggregate().ground_set().elements)
            for (const StandardLiteral& sl : e.conj) CHECK(possible.count(sl.atom) == 1);
        }
      }
  }
  GroundResult st = ground_text(corpus("seating.dlv") + "\n" + corpus("seating_inst3.dlv"));
  AtomSet possible = candidate_atoms(st.program);
  for (const Rule& r : st.program.rules)
    for (const BodyLiteral& l : r.body)
      if (l.is_standard()) CHECK(possible.count(l.standard()) == 1);
}

TEST_CASE("the intelligent grounding never exceeds the exhaustive one") {
  const char* cases[] = {"p1.dlv", "p4.dlv", "assignment_count.dlv"};
  for (const char* f : cases) {
    CAPTURE(f);
    GroundResult smart = ground_text(corpus(f));
    GroundResult naive = ground_text(corpus(f), /*naive=*/true);
    CHECK(smart.stats.instances_total <= naive.stats.instances_total);
    CHECK(smart.stats.footprint_total() <= naive.stats.footprint_total());
  }
}
