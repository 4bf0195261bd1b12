// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Brute-force reference semantics: every subset of the candidate atoms is
// tested against the declarative answer-set definition. Exponential by
// design; the cap keeps it honest about what it can enumerate.

#pragma once

#include <cstdint>
#include <vector>

#include "dlpa/ground.hpp"
#include "dlpa/solver.hpp"

namespace dlpa {

// All answer sets by subset enumeration over the candidate atoms (facts plus
// head atoms). Facts are pinned true. Refuses programs with more than
// atom_cap free atoms (capacity error).
std::vector<AtomSet> oracle_answer_sets(const GroundProgram& g, uint64_t maxint,
                                        size_t atom_cap = 16);

// The cost-minimal answer sets; `best` receives the optimum when nonempty.
std::vector<AtomSet> oracle_optimal(const GroundProgram& g, uint64_t maxint,
                                    CostVector* best = nullptr, size_t atom_cap = 16);

}  // namespace dlpa
