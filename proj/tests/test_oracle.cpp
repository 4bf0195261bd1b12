// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "dlpa/grounder.hpp"
#include "dlpa/oracle.hpp"
#include "dlpa/printer.hpp"
#include "dlpa/solver.hpp"
#include "support.hpp"

using namespace dlpa;
using test::atoms;
using test::corpus;
using test::ground_text;

namespace {

std::vector<AtomSet> sorted(std::vector<AtomSet> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("subset enumeration reproduces the reference answer sets") {
  CHECK(sorted(oracle_answer_sets(ground_text(corpus("p2.dlv")).program, 1024)) ==
        std::vector<AtomSet>{atoms({"b"}), atoms({"c"})});
  CHECK(sorted(oracle_answer_sets(ground_text(corpus("p3.dlv")).program, 1024)) ==
        std::vector<AtomSet>{atoms({"b", "c"})});
  CHECK(sorted(oracle_answer_sets(ground_text(corpus("p4.dlv"), true).program, 1024)) ==
        std::vector<AtomSet>{atoms({"b", "d(1)"})});

  SUBCASE("a self-supporting atom stays out") {
    GroundProgram g = ground_text("a :- a.", /*naive=*/true).program;
    CHECK(oracle_answer_sets(g, 1024) == std::vector<AtomSet>{AtomSet{}});
  }
  SUBCASE("facts are pinned true") {
    GroundProgram g = ground_text("f. a v b :- f.").program;
    CHECK(sorted(oracle_answer_sets(g, 1024)) ==
          std::vector<AtomSet>{atoms({"a", "f"}), atoms({"b", "f"})});
  }
}

TEST_CASE("the oracle optimum agrees with the leveled objective") {
  GroundProgram g = ground_text(corpus("p5.dlv")).program;
  CostVector best;
  std::vector<AtomSet> opt = oracle_optimal(g, 1024, &best);
  CHECK(opt == std::vector<AtomSet>{atoms({"a", "c", "d"})});
  CHECK(best.by_level == std::vector<uint64_t>{3, 0});
  CHECK(best.scalar == 3);

  SUBCASE("without weak constraints every answer set is optimal") {
    GroundProgram p2 = ground_text(corpus("p2.dlv")).program;
    CostVector zero;
    CHECK(sorted(oracle_optimal(p2, 1024, &zero)) ==
          sorted(oracle_answer_sets(p2, 1024)));
    CHECK(zero.scalar == 0);
  }
}

TEST_CASE("the free-atom budget is refused, not silently truncated") {
  std::string big;
  for (int i = 0; i < 9; ++i)
    big += "a" + std::to_string(i) + " v b" + std::to_string(i) + ".\n";
  GroundProgram g = ground_text(big).program;
  try {
    oracle_answer_sets(g, 1024);
    FAIL("expected a capacity error");
  } catch (const FatalError& e) {
    CHECK(e.diagnostic().tag == "capacity");
  }
  CHECK(oracle_answer_sets(g, 1024, 18).size() == 512);
}

TEST_CASE("statement order does not matter") {
  std::string fwd = test::read_file(test::corpus_path("p5.dlv"));
  std::string rev =
      ":~ c, d. [3:1]\n"
      ":~ a, nd. [4:1]\n"
      ":~ #sum{<4:b>} > 3. [1:2]\n"
      "d v nd :- a, c.\n"
      "b v c.\n"
      "a v b.\n";
  GroundProgram g1 = ground_text(fwd).program;
  GroundProgram g2 = ground_text(rev).program;
  CHECK(sorted(oracle_answer_sets(g1, 1024)) == sorted(oracle_answer_sets(g2, 1024)));
  CostVector b1, b2;
  CHECK(oracle_optimal(g1, 1024, &b1) == oracle_optimal(g2, 1024, &b2));
  CHECK(b1 == b2);
}

TEST_CASE("the search engine and the oracle agree across the corpus") {
  struct Case {
    const char* file;
    const char* extra;
    bool naive;
  };
  const Case cases[] = {
      {"p1.dlv", nullptr, true},
      {"p2.dlv", nullptr, false},
      {"p3.dlv", nullptr, false},
      {"p4.dlv", nullptr, true},
      {"p5.dlv", nullptr, false},
      {"propagation_chain.dlv", nullptr, false},
      {"assignment_count.dlv", nullptr, false},
      {"seating.dlv", "seating_inst3.dlv", false},
      {"team_building.dlv", "tb2_tiny.dlv", false},
  };
  for (const Case& c : cases) {
    std::string name = c.file;
    CAPTURE(name);
    std::string text = corpus(c.file);
    if (c.extra) text += "\n" + corpus(c.extra);
    GroundProgram g = ground_text(text, c.naive).program;

    Solver s(g);
    CHECK(sorted(s.all()) == sorted(oracle_answer_sets(g, 1024)));

    CostVector sb, ob;
    std::vector<AtomSet> sopt = Solver(g).optimal(&sb);
    std::vector<AtomSet> oopt = oracle_optimal(g, 1024, &ob);
    CHECK(sopt == sorted(oopt));
    if (!sopt.empty()) CHECK(sb == ob);
  }
}
