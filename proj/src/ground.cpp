// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/ground.hpp"

#include <set>

#include "dlpa/printer.hpp"

namespace dlpa {

namespace {

void collect_atoms(const std::vector<BodyLiteral>& body, AtomSet& out) {
  for (const BodyLiteral& lit : body) {
    if (lit.is_standard()) {
      out.insert(lit.standard());
    } else if (lit.is_aggregate() && !lit.aggregate().has_symbolic_set()) {
      for (const GroundSetElement& e : lit.aggregate().ground_set().elements)
        for (const StandardLiteral& sl : e.conj) out.insert(sl.atom);
    }
  }
}

}  // namespace

AtomSet atoms_of(const GroundProgram& g) {
  AtomSet out = g.facts;
  for (const Rule& r : g.rules) {
    for (const StandardAtom& h : r.head) out.insert(h);
    collect_atoms(r.body, out);
  }
  for (const WeakConstraint& w : g.weaks) collect_atoms(w.body, out);
  return out;
}

AtomSet candidate_atoms(const GroundProgram& g) {
  AtomSet out = g.facts;
  for (const Rule& r : g.rules)
    for (const StandardAtom& h : r.head) out.insert(h);
  return out;
}

std::vector<Rule> materialize(const GroundProgram& g) {
  std::vector<Rule> out;
  out.reserve(g.facts.size() + g.rules.size());
  for (const StandardAtom& a : g.facts) out.push_back(Rule{{a}, {}, {}});
  out.insert(out.end(), g.rules.begin(), g.rules.end());
  return out;
}

std::string to_string(const GroundProgram& g) {
  std::string out;
  for (const StandardAtom& a : g.facts) {
    out += to_string(a);
    out += ".\n";
  }
  for (const Rule& r : g.rules) {
    out += to_string(r);
    out += '\n';
  }
  for (const WeakConstraint& w : g.weaks) {
    out += to_string(w);
    out += '\n';
  }
  return out;
}

size_t GroundStats::footprint_total() const {
  size_t total = 0;
  for (const StatementStats& s : per_rule) total += s.footprint;
  for (const StatementStats& s : per_weak) total += s.footprint;
  return total;
}

void refresh_program_stats(const GroundProgram& g, GroundStats& stats) {
  stats.facts = g.facts.size();
  stats.atoms = atoms_of(g).size();
  stats.set_occurrences = 0;
  std::set<std::string> distinct;  // sets compared by canonical text form
  auto visit = [&](const std::vector<BodyLiteral>& body) {
    for (const BodyLiteral& lit : body) {
      if (!lit.is_aggregate() || lit.aggregate().has_symbolic_set()) continue;
      stats.set_occurrences += 1;
      distinct.insert(to_string(lit.aggregate().ground_set()));
    }
  };
  for (const Rule& r : g.rules) visit(r.body);
  for (const WeakConstraint& w : g.weaks) visit(w.body);
  stats.distinct_sets = distinct.size();
}

}  // namespace dlpa
