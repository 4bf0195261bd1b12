// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/oracle.hpp"

#include <string>

#include "dlpa/aggregates.hpp"
#include "dlpa/diagnostics.hpp"

namespace dlpa {

std::vector<AtomSet> oracle_answer_sets(const GroundProgram& g, uint64_t maxint,
                                        size_t atom_cap) {
  std::vector<StandardAtom> free;
  for (const StandardAtom& a : candidate_atoms(g))
    if (!g.facts.count(a)) free.push_back(a);
  if (free.size() > atom_cap)
    throw FatalError(make_error(
        "capacity", {},
        "reference enumeration over 2^" + std::to_string(free.size()) +
            " interpretations refused; the cap is 2^" + std::to_string(atom_cap)));

  std::vector<Rule> rules = materialize(g);
  std::vector<AtomSet> out;
  uint64_t total = uint64_t(1) << free.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    AtomSet x = g.facts;
    for (size_t i = 0; i < free.size(); ++i)
      if (mask & (uint64_t(1) << i)) x.insert(free[i]);
    // x must model the program at all (equivalent to modelling the reduct,
    // but far cheaper to refute) before the minimality scan runs.
    bool model = true;
    for (const Rule& r : rules) {
      if (!satisfies(r, x, maxint)) {
        model = false;
        break;
      }
    }
    if (!model) continue;
    if (check_answer_set(g, x, maxint, atom_cap).ok) out.push_back(std::move(x));
  }
  return out;
}

std::vector<AtomSet> oracle_optimal(const GroundProgram& g, uint64_t maxint,
                                    CostVector* best, size_t atom_cap) {
  std::vector<AtomSet> models = oracle_answer_sets(g, maxint, atom_cap);
  if (models.empty()) return {};
  size_t argmin = 0;
  std::vector<CostVector> costs;
  costs.reserve(models.size());
  for (size_t i = 0; i < models.size(); ++i) {
    costs.push_back(cost_of(g, models[i], maxint));
    if (costs[i].scalar < costs[argmin].scalar) argmin = i;
  }
  std::vector<AtomSet> out;
  for (size_t i = 0; i < models.size(); ++i)
    if (costs[i].scalar == costs[argmin].scalar) out.push_back(models[i]);
  if (best) *best = costs[argmin];
  return out;
}

}  // namespace dlpa
