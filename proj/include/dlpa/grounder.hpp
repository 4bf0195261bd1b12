// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Instantiation of validated programs. Two modes share one result shape:
// the intelligent grounder walks predicate components bottom-up, evaluates
// what is decided, and emits residual rules over potentially-true atoms
// only; the exhaustive grounder produces the full theoretical instantiation
// over the (enriched) constant universe and exists as the reference for
// equivalence testing.

#pragma once

#include <cstddef>
#include <cstdint>

#include "dlpa/ground.hpp"
#include "dlpa/syntax.hpp"

namespace dlpa {

struct GroundOptions {
  uint64_t maxint = 1024;
  size_t instance_cap = 1000000;  // rule instances (plus naive set elements)
  bool naive = false;
  // Drop textually identical instances. Off keeps them; the answer sets are
  // unaffected, only the reported instance counts grow.
  bool dedup = true;
};

// Guard normalization plus set-conjunction rewriting: every multi-literal
// symbolic conjunction becomes a fresh reserved `#aux<n>` atom over the
// conjunction's distinct variables (first-occurrence order), defined by an
// appended rule. When the bare definition would leave a global variable
// unbound, the host rule's binding literals are copied in. Idempotent.
Program standardize(const Program& p);

// Grounds a standardized program (the naive mode also accepts raw symbolic
// conjunctions). Throws FatalError on capacity overrun or on instances that
// bind aggregate guards or weak constraint weights to non-numbers.
GroundResult ground(const Program& p, const GroundOptions& opts = {});

}  // namespace dlpa
