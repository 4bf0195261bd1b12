// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Static validation over parsed programs: the labeled predicate dependency
// graph, the two stratification checks, variable classification, safety, and
// assignment-aggregate detection. Everything here is pure; failures come back
// as witness-carrying results, and analyze() folds them into diagnostics.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlpa/diagnostics.hpp"
#include "dlpa/syntax.hpp"

namespace dlpa {

enum class EdgeLabel { positive_body, negative_body, aggregate_body, head_shared };

// Predicate-level dependency graph. Edges run from a body (or co-head)
// predicate to a head predicate; head_shared edges are emitted symmetrically.
// Weak constraints have no heads and therefore contribute no edges.
struct DependencyGraph {
  struct Edge {
    int from = 0;
    int to = 0;
    EdgeLabel label = EdgeLabel::positive_body;
  };

  std::vector<std::string> nodes;  // first-appearance order
  std::map<std::string, int> index;
  std::vector<Edge> edges;

  static DependencyGraph of(const Program& p);
  int node(const std::string& predicate) const;  // -1 when absent
};

// The graph's strongly connected components in a deterministic bottom-up
// evaluation order: every component appears after all components it depends
// on, and ready ties are broken by first appearance in the source. Member
// lists hold node indices in ascending order.
struct Components {
  int count = 0;
  std::vector<int> component_of;          // node index -> component id
  std::vector<std::vector<int>> members;  // component id -> node indices
  std::vector<int> topo_order;            // component ids, dependencies first
};

Components condensation(const DependencyGraph& g);

// Outcome of a level-mapping existence check. `levels` is one concrete
// mapping (1-based, longest-path over the condensation); `witness_cycle` is
// the shortest predicate cycle through an offending strict edge, closed
// (front == back).
struct StratificationResult {
  bool ok = false;
  std::map<std::string, int> levels;
  std::vector<std::string> witness_cycle;
};

// Aggregate stratification: body and co-head edges demand <=, edges out of
// aggregate-nested predicates demand <. A mapping exists iff no strongly
// connected component contains an aggregate edge.
StratificationResult check_aggregate_stratification(const Program& p);

// Negation stratification: as above with negative-body edges strict.
// Aggregate-nested occurrences count as plain body dependencies here; the
// separate aggregate check owns recursion through aggregates.
StratificationResult check_negation_stratification(const Program& p);

struct VariableClasses {
  std::set<std::string> global;
  std::set<std::string> local;  // variables occurring solely inside aggregate functions
};

// Guard occurrences are outside the aggregate function, so a guard-only
// variable is global.
VariableClasses classify_variables(const Rule& r);
VariableClasses classify_variables(const WeakConstraint& w);

struct SafetyViolation {
  std::string var;
  int condition = 1;  // 1: unbound global, 2: local without a positive conj occurrence
};

struct RuleSafety {
  bool safe = true;
  std::vector<SafetyViolation> offending;
};

// Per-statement verdicts, rules first, then weak constraints (index space
// rules.size() + weak index). The program is safe iff all entries are.
struct SafetyReport {
  std::vector<RuleSafety> per_statement;

  bool safe() const {
    for (const RuleSafety& r : per_statement)
      if (!r.safe) return false;
    return true;
  }
};

// Condition (i): every global variable is bound by a positive unnested
// standard body literal, by a chain of built-in arithmetic atoms whose other
// argument positions are bound, or (relaxed mode) by being the guard of an
// assignment aggregate. Condition (ii): every local variable of a symbolic
// set occurs in a positive literal of that set's conjunction. Weight and
// level variables of weak constraints are checked as globals.
SafetyReport check_safety(const Program& p, bool relaxed);

// A body position holding an aggregate of the form Var = f(S) (either guard
// orientation) whose nested predicates all have negation-stratified,
// non-disjunctive defining programs. Statement indices as in SafetyReport.
struct AssignmentSite {
  size_t statement = 0;
  size_t body_position = 0;
};

std::vector<AssignmentSite> detect_assignment_aggregates(const Program& p);

// Shape-only part of the assignment test, usable on normalized atoms too
// (where X = f(S) has become X <= f(S) <= X).
bool is_assignment_shape(const AggregateAtom& a);

// Full front-door validation: relaxed safety plus aggregate stratification.
// Returns located error diagnostics; empty means the program may be grounded.
std::vector<Diagnostic> analyze(const Program& p);

}  // namespace dlpa
