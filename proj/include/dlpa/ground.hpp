// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// The ground program representation handed from the grounders to the solver
// and the oracle. Rules are ground, guard-normalized and builtin-free; atoms
// the grounder has already decided true live in `facts` and appear in rule
// bodies only as their consequences require.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dlpa/diagnostics.hpp"
#include "dlpa/syntax.hpp"

namespace dlpa {

struct GroundProgram {
  AtomSet facts;
  std::vector<Rule> rules;
  std::vector<WeakConstraint> weaks;  // weight and level are number constants
};

// Every standard atom occurring anywhere: facts, heads, body literals, and
// aggregate set element conjunctions.
AtomSet atoms_of(const GroundProgram& g);

// Head atoms plus facts. Atoms outside this set occur in bodies only and can
// never be true in an answer set, so model enumeration ranges over it.
AtomSet candidate_atoms(const GroundProgram& g);

// The program as a flat rule list: one fact rule per fact, then the rules.
std::vector<Rule> materialize(const GroundProgram& g);

// Grammar-form text, one statement per line: facts, then rules, then weak
// constraints. Valid parser input.
std::string to_string(const GroundProgram& g);

// Per input statement: ground instances emitted (after deduplication) and
// their footprint, the count of residual standard body literals plus
// aggregate set elements. Footprint is the size measure used to compare
// encodings of the same problem.
struct StatementStats {
  size_t instances = 0;
  size_t footprint = 0;
};

struct GroundStats {
  std::vector<StatementStats> per_rule;  // parallel to the input program
  std::vector<StatementStats> per_weak;
  size_t instances_total = 0;  // instances produced before deduplication
  size_t facts = 0;
  size_t atoms = 0;
  size_t set_occurrences = 0;  // aggregate atoms in residual rules and weaks
  size_t distinct_sets = 0;    // distinct ground sets among those

  size_t footprint_total() const;
};

// Recounts facts/atoms/set statistics from the finished program. Instance
// and footprint counters are the grounder's to fill as it emits.
void refresh_program_stats(const GroundProgram& g, GroundStats& stats);

struct GroundResult {
  GroundProgram program;
  GroundStats stats;
  std::vector<Diagnostic> warnings;
};

}  // namespace dlpa
