// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include <doctest.h>

#include <string>
#include <vector>

#include "dlpa/parser.hpp"
#include "dlpa/printer.hpp"
#include "support.hpp"

using namespace dlpa;
using test::atom;
using test::corpus;
using test::parse_ok;

namespace {

std::vector<Diagnostic> errors_of(const std::string& text, uint64_t maxint = 1024) {
  ParseResult r = parse_program(text, {maxint});
  std::vector<Diagnostic> errs;
  for (const Diagnostic& d : r.diagnostics)
    if (d.severity == Diagnostic::Severity::error) errs.push_back(d);
  return errs;
}

AggregateAtom only_aggregate(const Program& p) {
  REQUIRE(p.rules.size() >= 1);
  for (const BodyLiteral& l : p.rules[0].body)
    if (l.is_aggregate()) return l.aggregate();
  FAIL("no aggregate literal in first rule");
  return {};
}

}  // namespace

TEST_CASE("a suffix guard '> Y' becomes the strict left guard Y") {
  Program p = parse_ok("t :- q, #max{Z : r(Z), a(Z,V)} > Y, s(Y,V).");
  AggregateAtom a = only_aggregate(p);
  CHECK(a.fn == AggrFn::max);
  CHECK(a.left.term == Term::variable("Y"));
  CHECK(a.left_op == CmpOp::lt);
  CHECK(a.right.is_default_right());
  REQUIRE(a.has_symbolic_set());
  CHECK(a.symbolic().vars == std::vector<std::string>{"Z"});
  REQUIRE(a.symbolic().conj.size() == 2);
  CHECK(a.symbolic().conj[1].atom.predicate == "a");
}

TEST_CASE("disjunctive facts") {
  Program p = parse_ok("a v b.");
  REQUIRE(p.rules.size() == 1);
  CHECK(p.rules[0].head == std::vector<StandardAtom>{atom("a"), atom("b")});
  CHECK(p.rules[0].body.empty());
  CHECK(parse_ok("a | b.") == p);
}

TEST_CASE("weak constraints and their bracket forms") {
  Program p = parse_ok(":~ c, d. [3:1]");
  REQUIRE(p.weaks.size() == 1);
  CHECK(p.rules.empty());
  REQUIRE(p.weaks[0].body.size() == 2);
  CHECK(p.weaks[0].body[0].standard() == atom("c"));
  CHECK(p.weaks[0].weight == Term::number(3));
  CHECK(p.weaks[0].level == Term::number(1));

  auto wl = [](const std::string& text) {
    Program q = parse_ok(text);
    REQUIRE(q.weaks.size() == 1);
    return std::make_pair(q.weaks[0].weight, q.weaks[0].level);
  };
  CHECK(wl(":~ a. [3:]") == std::make_pair(Term::number(3), Term::number(1)));
  CHECK(wl(":~ a. [:2]") == std::make_pair(Term::number(1), Term::number(2)));
  CHECK(wl(":~ a. []") == std::make_pair(Term::number(1), Term::number(1)));
  CHECK(wl(":~ a.") == std::make_pair(Term::number(1), Term::number(1)));
  CHECK(wl(":~ e(D). [D:]") == std::make_pair(Term::variable("D"), Term::number(1)));
}

TEST_CASE("guard spellings") {
  SUBCASE("two-sided non-strict") {
    AggregateAtom a = only_aggregate(parse_ok("t :- 2 <= #count{X : p(X)} <= 4."));
    CHECK(a.left.term == Term::number(2));
    CHECK(a.left_op == CmpOp::le);
    CHECK(a.right.term == Term::number(4));
    CHECK(a.right_op == CmpOp::le);
  }
  SUBCASE("two-sided strict") {
    AggregateAtom a = only_aggregate(parse_ok("t :- 1 < #count{X : p(X)} < 3."));
    CHECK(a.left_op == CmpOp::lt);
    CHECK(a.right_op == CmpOp::lt);
  }
  SUBCASE("equality sits on the side it was written") {
    AggregateAtom r = only_aggregate(parse_ok("t :- #sum{X : p(X)} = 3."));
    CHECK(r.right_op == CmpOp::eq);
    CHECK(r.right.term == Term::number(3));
    CHECK(r.left.is_default_left());
    AggregateAtom l = only_aggregate(parse_ok("t :- 3 = #sum{X : p(X)}."));
    CHECK(l.left_op == CmpOp::eq);
    CHECK(l.right.is_default_right());
  }
  SUBCASE("prefix '>=' flips to the right side") {
    AggregateAtom a = only_aggregate(parse_ok("t :- 4 >= #min{X : p(X)}."));
    CHECK(a.right.term == Term::number(4));
    CHECK(a.right_op == CmpOp::le);
    CHECK(a.left.is_default_left());
  }
  SUBCASE("all five functions parse") {
    for (const char* fn : {"#count", "#sum", "#times", "#min", "#max"}) {
      Program p = parse_ok(std::string("t :- ") + fn + "{X : p(X)} > 0.");
      CHECK(only_aggregate(p).has_symbolic_set());
    }
  }
  SUBCASE("ground sets") {
    const AggregateAtom& a =
        only_aggregate(parse_ok("t :- #sum{<1 : p(1)>, <2 : p(2)>, <4 : b>} > 3."));
    REQUIRE(!a.has_symbolic_set());
    REQUIRE(a.ground_set().elements.size() == 3);
    CHECK(a.ground_set().elements[0].tuple == std::vector<Constant>{Constant::num(1)});
    CHECK(a.ground_set().elements[2].conj[0].atom == atom("b"));
  }
}

TEST_CASE("guard combinations the grammar rejects") {
  auto one_error = [](const std::string& text, const std::string& tag) {
    std::vector<Diagnostic> errs = errors_of(text);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].tag == tag);
    CHECK(errs[0].loc.line == 1);
  };
  one_error("t :- 1 <= #count{X : p(X)} = 2.", "guard");
  one_error("t :- 1 = #count{X : p(X)} <= 2.", "guard");
  one_error("t :- 1 < #count{X : p(X)} <= 2.", "guard");
  one_error("t :- 1 <= #count{X : p(X)} < 2.", "guard");
  one_error("t :- #count{X : p(X)} != 2.", "guard");
  one_error("t :- #count{X : p(X)}.", "guard");
}

TEST_CASE("parse errors carry locations and parsing resumes at the next period") {
  ParseResult r = parse_program("p(1).\nq :- <.\ns.");
  CHECK_FALSE(r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].loc.line == 2);
  CHECK(r.diagnostics[0].loc.col > 0);
  // Recovery keeps the surrounding statements.
  CHECK(r.program.rules.size() == 2);

  SUBCASE("each bad statement reports separately") {
    CHECK(errors_of("p(. q(. r.").size() == 2);
  }
  SUBCASE("a stray character stops the lexer and yields an empty program") {
    ParseResult bad = parse_program("p(1).\nq ; r.\n");
    CHECK_FALSE(bad.ok());
    CHECK(bad.program.rules.empty());
    CHECK(bad.diagnostics[0].loc.line == 2);
  }
}

TEST_CASE("arity clashes are rejected") {
  std::vector<Diagnostic> errs = errors_of("p(1). p(1,2).");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].tag == "arity");
  CHECK(errs[0].loc.line == 1);
  CHECK(errors_of("p(1). q :- p(X,Y).").size() == 1);
  CHECK(errors_of("t :- #count{X : p(X)} > 0, p(1,2).").size() == 1);
}

TEST_CASE("aggregate atoms cannot occur in rule heads") {
  std::vector<Diagnostic> errs = errors_of("#count{X : p(X)} > 1 :- q.");
  REQUIRE(!errs.empty());
  CHECK(errs[0].message.find("head") != std::string::npos);
}

TEST_CASE("anonymous variables are rejected") {
  std::vector<Diagnostic> errs = errors_of("p(X) :- q(X, _).");
  REQUIRE(!errs.empty());
  CHECK(errs[0].message.find("anonymous") != std::string::npos);
}

TEST_CASE("numbers above maxint are rejected at parse time") {
  CHECK(errors_of("p(2000).", 1024).size() == 1);
  CHECK(errors_of("p(2000).", 2000).empty());
  CHECK(errors_of(":~ a. [2000:1]", 1024).size() == 1);
}

TEST_CASE("negation, builtins and comments") {
  Program p = parse_ok(
      "% a comment line\n"
      "r(X) :- s(X), not t(X), X < 3, X = Y + 1, q(Y). % trailing\n");
  REQUIRE(p.rules.size() == 1);
  const Rule& r = p.rules[0];
  REQUIRE(r.body.size() == 5);
  CHECK(r.body[1].negated);
  CHECK(r.body[2].is_builtin());
  CHECK(r.body[2].builtin().rel == CmpOp::lt);
  CHECK(r.body[3].builtin().arith == BuiltinAtom::Arith::plus);
  CHECK(r.body[3].builtin().rhs2 == Term::number(1));

  SUBCASE("negated aggregate literal") {
    Program q = parse_ok("t :- not #count{X : p(X)} > 1.");
    CHECK(q.rules[0].body[0].negated);
    CHECK(q.rules[0].body[0].is_aggregate());
  }
  SUBCASE("negation inside set conjunctions") {
    Program q = parse_ok("t :- #count{X : p(X), not b(X)} > 0.");
    CHECK(only_aggregate(q).symbolic().conj[1].negated);
  }
}

TEST_CASE("printing is stable and reparses to the same text") {
  const char* files[] = {"p1.dlv",
                         "p2.dlv",
                         "p3.dlv",
                         "p4.dlv",
                         "p5.dlv",
                         "propagation_chain.dlv",
                         "assignment_count.dlv",
                         "team_building.dlv",
                         "tb2_tiny.dlv",
                         "tb3.dlv",
                         "seating.dlv",
                         "seating_rewrite.dlv",
                         "seating_inst3.dlv",
                         "fastfood.dlv",
                         "fastfood_inst4.dlv"};
  for (const char* f : files) {
    CAPTURE(f);
    Program p = parse_ok(corpus(f));
    std::string once = to_string(p);
    Program again = parse_ok(once);
    CHECK(again == p);
    CHECK(to_string(again) == once);
  }
}

TEST_CASE("interpretation files") {
  InterpretationResult r = parse_interpretation(
      "a.\n"
      "b(1)\n"
      "% comment\n"
      "\n"
      "c(f,2).\n");
  CHECK(r.diagnostics.empty());
  CHECK(r.atoms == test::atoms({"a", "b(1)", "c(f,2)"}));

  SUBCASE("non-ground and malformed lines are reported") {
    CHECK_FALSE(parse_interpretation("p(X).").diagnostics.empty());
    CHECK_FALSE(parse_interpretation("p :- q.").diagnostics.empty());
    CHECK_FALSE(parse_interpretation("1 +").diagnostics.empty());
  }
}
