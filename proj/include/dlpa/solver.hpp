// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Answer-set search over ground programs: the reduct, the answer-set test
// with minimality witnesses, the weak-constraint objective, and the
// propagation-based enumerator. The enumerator branches on standard atoms
// only and re-checks every total assignment against the declarative test, so
// its propagation may be incomplete but never unsound.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dlpa/diagnostics.hpp"
#include "dlpa/ground.hpp"

namespace dlpa {

// The reduct w.r.t. x: rules whose negated standard literals, aggregate
// literals and builtins all hold under x, stripped down to their positive
// standard body. Weak constraints do not participate.
GroundProgram reduct(const GroundProgram& g, const AtomSet& x, uint64_t maxint);

// Head-cycle freedom of a reduced (positive-body) program: no two atoms of
// one rule head share a cycle of the positive atom dependency graph.
bool head_cycle_free(const GroundProgram& g);

struct AnswerCheck {
  bool ok = false;
  std::string witness;  // "unsatisfied rule: ..." or "smaller model: {...}"
};

// The declarative test: x satisfies the program and is a minimal model of
// the reduct. Head-cycle-free reducts use the linear support-ordering check;
// general reducts fall back to subset enumeration, refused beyond
// 2^minimality_cap subsets with a capacity error.
AnswerCheck check_answer_set(const GroundProgram& g, const AtomSet& x, uint64_t maxint,
                             size_t minimality_cap = 20);
bool is_answer_set(const GroundProgram& g, const AtomSet& x, uint64_t maxint);

// Weak-constraint objective. by_level[i] is the violated weight at level
// i + 1; scalar is the single number H that orders cost vectors by highest
// level first (computed from the ground weak-constraint count and maximum
// weight). Overflow raises a capacity error.
struct CostVector {
  std::vector<uint64_t> by_level;
  uint64_t scalar = 0;
};

bool operator==(const CostVector& a, const CostVector& b);
CostVector cost_of(const GroundProgram& g, const AtomSet& x, uint64_t maxint);

// One propagation step: an atom or aggregate atom forced to a value, with
// the reason it happened. Reasons: fact, unit-head, contraposition,
// support-loss, last-support, agg-forward, agg-backward, agg-closure,
// branch.
struct PropEvent {
  std::string what;
  bool value = false;
  std::string reason;
};

struct SolverOptions {
  uint64_t maxint = 1024;
  // Share one aggregate node per distinct (function, set, guards) triple and
  // one set node per distinct ground set. Off means one node per occurrence;
  // the answer sets are the same either way.
  bool share_aggregates = true;
  size_t minimality_cap = 20;
};

class Solver {
 public:
  explicit Solver(const GroundProgram& g, SolverOptions opts = {});
  ~Solver();

  // Deterministic consequences of the program before any branching, in
  // derivation order. Idempotent.
  const std::vector<PropEvent>& root_propagation();

  // Streams answer sets in search order; return false from the callback to
  // stop early.
  void enumerate(const std::function<bool(const AtomSet&)>& yield);
  std::vector<AtomSet> all(size_t limit = 0);  // 0: no limit

  // Answer sets of minimum objective, in canonical (set) order. `best`
  // receives the optimum when at least one answer set exists.
  std::vector<AtomSet> optimal(CostVector* best = nullptr, size_t limit = 0);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dlpa
