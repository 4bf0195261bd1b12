// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dlpa/driver.hpp"
#include "support.hpp"

using namespace dlpa;
using test::corpus_path;

namespace {

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
  std::vector<std::string> lines() const {
    std::vector<std::string> v;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  }
};

Outcome drive(RunConfig cfg) {
  std::ostringstream out, err;
  Outcome o;
  o.status = run(cfg, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string write_tmp(const std::string& name, const std::string& text) {
  std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream f(path);
  f << text;
  return path;
}

RunConfig files(std::initializer_list<std::string> inputs) {
  RunConfig cfg;
  cfg.inputs = inputs;
  return cfg;
}

}  // namespace

TEST_CASE("solving prints one line per answer set plus the optimum cost") {
  Outcome o = drive(files({corpus_path("p5.dlv")}));
  CHECK(o.status == 0);
  CHECK(o.out == "{a, c, d}\nCOST level=1 weight=3 level=2 weight=0\n");
  CHECK(o.err.empty());

  SUBCASE("no weak constraints, no cost line") {
    Outcome p2 = drive(files({corpus_path("p2.dlv")}));
    CHECK(p2.status == 0);
    CHECK(p2.out == "{b}\n{c}\n");
  }
  SUBCASE("repeat runs are bit-identical") {
    CHECK(drive(files({corpus_path("p5.dlv")})).out == o.out);
  }
  SUBCASE("the oracle mode prints the same report") {
    RunConfig cfg = files({corpus_path("p5.dlv")});
    cfg.oracle = true;
    CHECK(drive(cfg).out == o.out);
  }
}

TEST_CASE("input handling") {
  SUBCASE("multiple files concatenate in order") {
    Outcome o = drive(files({corpus_path("seating.dlv"), corpus_path("seating_inst3.dlv")}));
    CHECK(o.status == 0);
    CHECK(o.lines().size() == 2);
  }
  SUBCASE("no inputs is a usage error") {
    Outcome o = drive(files({}));
    CHECK(o.status == 2);
    CHECK(o.err.find("no input files") != std::string::npos);
  }
  SUBCASE("an unreadable file is a usage error") {
    Outcome o = drive(files({"/nonexistent/nowhere.dlv"}));
    CHECK(o.status == 2);
    CHECK(o.err.find("cannot read") != std::string::npos);
  }
  SUBCASE("picking two modes at once is refused") {
    RunConfig cfg = files({corpus_path("p2.dlv")});
    cfg.ground_only = true;
    cfg.oracle = true;
    Outcome o = drive(cfg);
    CHECK(o.status == 2);
    CHECK(o.err.find("pick one") != std::string::npos);
  }
}

TEST_CASE("diagnostics are located and machine-readable on request") {
  std::string bad = write_tmp("dlpa_bad.dlv", "p(. q.\n");

  Outcome plain = drive(files({bad}));
  CHECK(plain.status == 2);
  CHECK(plain.err == "error: 1:3: expected a term\n");
  CHECK(plain.out.empty());

  RunConfig cfg = files({bad});
  cfg.tagged = true;
  Outcome tagged = drive(cfg);
  CHECK(tagged.status == 2);
  CHECK(tagged.err == "error\tsyntax\t1\t3\texpected a term\n");

  SUBCASE("analysis failures stop the run too") {
    std::string unsafe = write_tmp("dlpa_unsafe.dlv", "p(X) :- not q(X). q(1).\n");
    Outcome o = drive(files({unsafe}));
    CHECK(o.status == 2);
    CHECK(o.err.find("unsafe rule") != std::string::npos);
    RunConfig cfg = files({unsafe});
    cfg.tagged = true;
    CHECK(drive(cfg).err.find("\tsafety\t") != std::string::npos);
  }
}

TEST_CASE("answer display options") {
  SUBCASE("filter projects onto the named predicates") {
    RunConfig cfg = files({corpus_path("seating.dlv"), corpus_path("seating_inst3.dlv")});
    cfg.filter = {"at"};
    Outcome o = drive(cfg);
    CHECK(o.status == 0);
    std::vector<std::string> lines = o.lines();
    std::sort(lines.begin(), lines.end());
    CHECK(lines == std::vector<std::string>{
                       "{at(alice,1), at(bob,1), at(carol,2)}",
                       "{at(alice,2), at(bob,2), at(carol,1)}"});
  }
  SUBCASE("n truncates the report but not the verdict") {
    RunConfig cfg = files({corpus_path("p2.dlv")});
    cfg.n = 1;
    Outcome o = drive(cfg);
    CHECK(o.status == 0);
    CHECK(o.out == "{b}\n");
  }
  SUBCASE("duplicate instances do not change the answers") {
    RunConfig cfg = files({corpus_path("seating.dlv"), corpus_path("seating_inst3.dlv")});
    Outcome dedup = drive(cfg);
    cfg.no_dedup = true;
    Outcome kept = drive(cfg);
    CHECK(dedup.out == kept.out);
    CHECK(dedup.status == kept.status);
  }
}

TEST_CASE("grounding reports") {
  SUBCASE("ground-only prints the residual program and stops") {
    RunConfig cfg = files({corpus_path("p1.dlv")});
    cfg.ground_only = true;
    Outcome o = drive(cfg);
    CHECK(o.status == 0);
    CHECK(o.out ==
          "q(1) v p(2,2).\n"
          "q(2) v p(2,1).\n"
          "t(2) :- q(2), 2 <= #sum{<1:p(2,1)>, <2:p(2,2)>}.\n");
  }
  SUBCASE("stats line") {
    RunConfig cfg = files({corpus_path("p2.dlv")});
    cfg.stats = true;
    Outcome o = drive(cfg);
    CHECK(o.lines().front() ==
          "STATS rules=2 weaks=0 facts=0 atoms=3 sets=0 distinct-sets=0 instances=2");
  }
}

TEST_CASE("interpretation checking") {
  std::string p4 = corpus_path("p4.dlv");
  SUBCASE("the single answer set is accepted") {
    RunConfig cfg = files({p4});
    cfg.check_file = write_tmp("dlpa_x1.txt", "b\nd(1)\n");
    Outcome o = drive(cfg);
    CHECK(o.status == 0);
    CHECK(o.out == "ANSWER SET\n");
  }
  SUBCASE("rejections carry a witness") {
    RunConfig cfg = files({p4});
    cfg.check_file = write_tmp("dlpa_x2.txt", "a\nd(1)\n");
    Outcome o = drive(cfg);
    CHECK(o.status == 1);
    std::vector<std::string> lines = o.lines();
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "NOT AN ANSWER SET");
    CHECK(lines[1].rfind("witness: ", 0) == 0);
  }
  SUBCASE("non-minimal models name a smaller one") {
    std::string prog = write_tmp("dlpa_choice.dlv", "a v b.\n");
    RunConfig cfg = files({prog});
    cfg.check_file = write_tmp("dlpa_x3.txt", "a\nb\n");
    Outcome o = drive(cfg);
    CHECK(o.status == 1);
    CHECK(o.out.find("smaller model: {") != std::string::npos);
  }
  SUBCASE("a malformed interpretation file is a usage-level failure") {
    RunConfig cfg = files({p4});
    cfg.check_file = write_tmp("dlpa_x4.txt", "b :- a\n");
    CHECK(drive(cfg).status == 2);
  }
}

TEST_CASE("a consistent program with no answer sets exits one") {
  std::string unsat = write_tmp("dlpa_unsat.dlv", "a. :- a.\n");
  Outcome o = drive(files({unsat}));
  CHECK(o.status == 1);
  CHECK(o.out.empty());
}
