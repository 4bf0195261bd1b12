// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// The answer-set test and the search. Propagation works on three indexed
// node kinds: standard atoms, ground sets (grouped by tuple), and aggregate
// atoms. Aggregate reasoning is scenario-based: for each function the
// feasibility of "atom still true" / "atom still false" is decided from the
// group statuses, and backward propagation asks the same question with one
// group hypothetically flipped. That keeps every function's rules in one
// place and makes bottom (undefined values) part of the same analysis.

#include "dlpa/solver.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "dlpa/aggregates.hpp"
#include "dlpa/printer.hpp"

namespace dlpa {

GroundProgram reduct(const GroundProgram& g, const AtomSet& x, uint64_t maxint) {
  GroundProgram out;
  out.facts = g.facts;
  for (const Rule& r : g.rules) {
    Rule keep;
    keep.head = r.head;
    bool dead = false;
    for (const BodyLiteral& lit : r.body) {
      if (lit.is_standard() && !lit.negated) {
        keep.body.push_back(lit);
        continue;
      }
      if (!eval_body_literal(lit, x, maxint)) {
        dead = true;
        break;
      }
    }
    if (!dead) out.rules.push_back(std::move(keep));
  }
  return out;
}

namespace {

// Strongly connected components of an int digraph (iterative Kosaraju).
std::vector<int> scc_of(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) radj[v].push_back(u);
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < adj[u].size()) {
        int v = adj[u][i++];
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int c = 0;
  for (int k = n - 1; k >= 0; --k) {
    int s = order[k];
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : radj[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
    ++c;
  }
  return comp;
}

}  // namespace

bool head_cycle_free(const GroundProgram& g) {
  std::map<StandardAtom, int> ids;
  auto id = [&ids](const StandardAtom& a) {
    auto [it, fresh] = ids.emplace(a, static_cast<int>(ids.size()));
    return it->second;
  };
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rules;
  for (const Rule& r : g.rules) {
    std::vector<int> h, b;
    for (const StandardAtom& a : r.head) h.push_back(id(a));
    for (const BodyLiteral& lit : r.body)
      if (lit.is_standard() && !lit.negated) b.push_back(id(lit.standard()));
    if (h.size() >= 2 || !b.empty()) rules.push_back({std::move(h), std::move(b)});
  }
  int n = static_cast<int>(ids.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& [h, b] : rules)
    for (int u : h)
      for (int v : b) adj[u].push_back(v);
  std::vector<int> comp = scc_of(n, adj);
  for (const auto& [h, b] : rules) {
    for (size_t i = 0; i < h.size(); ++i)
      for (size_t j = i + 1; j < h.size(); ++j)
        if (h[i] != h[j] && comp[h[i]] == comp[h[j]]) return false;
  }
  return true;
}

namespace {

// Greedy support ordering over a positive program: an atom joins once some
// rule has its whole body founded and no other head atom in x. For
// head-cycle-free reducts the fixpoint covers x exactly when x is a minimal
// model.
AtomSet founded_atoms(const GroundProgram& reduced, const AtomSet& x) {
  std::vector<Rule> rules = materialize(reduced);
  AtomSet f;
  bool grown = true;
  while (grown) {
    grown = false;
    for (const Rule& r : rules) {
      bool ready = true;
      for (const BodyLiteral& lit : r.body) {
        if (!lit.is_standard() || lit.negated)
          throw std::logic_error("reduct body is not positive");
        if (!f.count(lit.standard())) {
          ready = false;
          break;
        }
      }
      if (!ready) continue;
      const StandardAtom* target = nullptr;
      bool several = false;
      for (const StandardAtom& h : r.head) {
        if (!x.count(h)) continue;
        if (target) {
          several = true;
          break;
        }
        target = &h;
      }
      if (several || !target) continue;
      if (f.insert(*target).second) grown = true;
    }
  }
  return f;
}

// First proper submodel of a positive program below x (facts pinned), in
// subset-mask order. Throws a capacity error beyond 2^cap subsets.
std::optional<AtomSet> smaller_model(const GroundProgram& reduced, const AtomSet& x,
                                     size_t cap) {
  std::vector<StandardAtom> free;
  for (const StandardAtom& a : x)
    if (!reduced.facts.count(a)) free.push_back(a);
  if (free.size() > cap)
    throw FatalError(make_error("capacity", {},
                                "minimality check needs 2^" + std::to_string(free.size()) +
                                    " candidate submodels; the cap is 2^" +
                                    std::to_string(cap)));
  std::vector<Rule> rules = materialize(reduced);
  uint64_t total = uint64_t(1) << free.size();
  for (uint64_t mask = 0; mask + 1 < total; ++mask) {
    AtomSet y = reduced.facts;
    for (size_t i = 0; i < free.size(); ++i)
      if (mask & (uint64_t(1) << i)) y.insert(free[i]);
    bool model = true;
    for (const Rule& r : rules) {
      bool body = true;
      for (const BodyLiteral& lit : r.body) {
        if (!y.count(lit.standard())) {
          body = false;
          break;
        }
      }
      if (!body) continue;
      bool head = false;
      for (const StandardAtom& h : r.head) {
        if (y.count(h)) {
          head = true;
          break;
        }
      }
      if (!head) {
        model = false;
        break;
      }
    }
    if (model) return y;
  }
  return std::nullopt;
}

}  // namespace

AnswerCheck check_answer_set(const GroundProgram& g, const AtomSet& x, uint64_t maxint,
                             size_t minimality_cap) {
  for (const Rule& r : materialize(g)) {
    if (!satisfies(r, x, maxint)) return {false, "unsatisfied rule: " + to_string(r)};
  }
  GroundProgram red = reduct(g, x, maxint);
  if (head_cycle_free(red)) {
    if (founded_atoms(red, x) == x) return {true, {}};
    size_t free = 0;
    for (const StandardAtom& a : x)
      if (!red.facts.count(a)) ++free;
    if (free <= minimality_cap) {
      std::optional<AtomSet> y = smaller_model(red, x, minimality_cap);
      if (y) return {false, "smaller model: " + to_string(*y)};
    }
    return {false, "smaller model exists (not enumerated)"};
  }
  std::optional<AtomSet> y = smaller_model(red, x, minimality_cap);
  if (y) return {false, "smaller model: " + to_string(*y)};
  return {true, {}};
}

bool is_answer_set(const GroundProgram& g, const AtomSet& x, uint64_t maxint) {
  return check_answer_set(g, x, maxint).ok;
}

namespace {

uint64_t checked_add(uint64_t a, uint64_t b) {
  uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw FatalError(make_error("capacity", {}, "weak constraint objective exceeds 64 bits"));
  return r;
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
  uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw FatalError(make_error("capacity", {}, "weak constraint objective exceeds 64 bits"));
  return r;
}

uint64_t weak_number(const Term& t, const char* what) {
  if (t.is_var() || !t.value.is_number)
    throw std::logic_error(std::string("ground weak constraint with symbolic ") + what);
  return t.value.number;
}

// Level i weighs f(i): f(1) = 1, f(i) = f(i-1) * |weaks| * wmax + 1, which
// makes one violation at level i outweigh all violations below it.
std::vector<uint64_t> level_factors(const GroundProgram& g) {
  uint64_t lmax = 0, wmax = 0;
  for (const WeakConstraint& w : g.weaks) {
    uint64_t level = weak_number(w.level, "level");
    if (level == 0) throw std::logic_error("weak constraint level 0");
    lmax = std::max(lmax, level);
    wmax = std::max(wmax, weak_number(w.weight, "weight"));
  }
  std::vector<uint64_t> f(lmax, 0);
  uint64_t v = 1;
  for (uint64_t i = 1; i <= lmax; ++i) {
    if (i > 1) v = checked_add(checked_mul(checked_mul(v, g.weaks.size()), wmax), 1);
    f[i - 1] = v;
  }
  return f;
}

}  // namespace

bool operator==(const CostVector& a, const CostVector& b) {
  return a.by_level == b.by_level && a.scalar == b.scalar;
}

CostVector cost_of(const GroundProgram& g, const AtomSet& x, uint64_t maxint) {
  CostVector cv;
  if (g.weaks.empty()) return cv;
  std::vector<uint64_t> f = level_factors(g);
  cv.by_level.assign(f.size(), 0);
  for (const WeakConstraint& w : g.weaks) {
    if (!violates(w, x, maxint)) continue;
    uint64_t level = weak_number(w.level, "level");
    cv.by_level[level - 1] = checked_add(cv.by_level[level - 1], weak_number(w.weight, "weight"));
  }
  for (size_t i = 0; i < f.size(); ++i)
    cv.scalar = checked_add(cv.scalar, checked_mul(f[i], cv.by_level[i]));
  return cv;
}

namespace {
enum class Tv : uint8_t { undef, yes, no };
Tv tv_of(bool b) { return b ? Tv::yes : Tv::no; }
}  // namespace

struct Solver::Impl {
  struct Conj {
    std::vector<std::pair<int, bool>> lits;  // atom id, negated
  };
  // Elements sharing one tuple: the tuple contributes (once) when any of its
  // conjunctions holds. Empty tuples contribute nothing to any function and
  // are dropped at interning.
  struct Group {
    bool natural = false;
    uint64_t value = 0;
    std::vector<Conj> conjs;
  };
  struct SetN {
    std::vector<Group> groups;
  };
  struct AggN {
    AggrFn fn = AggrFn::count;
    int set = -1;
    uint64_t left = 0;
    bool right_inf = true;
    uint64_t right = 0;
    bool malformed = false;  // non-numeric guard: constantly false
    std::string name;
  };
  struct RuleN {
    std::vector<int> head;
    std::vector<std::pair<int, bool>> std_body;
    std::vector<std::pair<int, bool>> agg_body;
  };
  struct GroupState {
    Tv tv = Tv::undef;
    bool natural = false;
    uint64_t value = 0;
  };
  // Weak constraint prepared for bound computation during optimization. A
  // body whose literals are all certainly true under the current partial
  // assignment is violated in every total extension, so its f(level)*weight
  // is a sound lower bound contribution.
  struct WeakAggN {
    const AggregateAtom* agg = nullptr;
    std::vector<int> deps;  // interned atoms the set valuation reads
  };
  struct WeakN {
    bool never = false;  // body contains a literal false in every model
    uint64_t fweight = 0;
    std::vector<std::pair<int, bool>> lits;      // atom id, negated
    std::vector<std::pair<int, bool>> agg_lits;  // weak_aggs index, negated
  };

  GroundProgram ground;
  SolverOptions opts;

  std::map<StandardAtom, int> atom_ids;
  std::vector<StandardAtom> atoms;
  std::vector<SetN> sets;
  std::vector<AggN> aggs;
  std::vector<RuleN> rules;
  std::vector<std::vector<int>> head_rules;
  std::vector<int> score;

  std::vector<Tv> aval;
  std::vector<Tv> gval;
  struct TrailEntry {
    int id;
    bool agg;
  };
  std::vector<TrailEntry> trail;
  struct Decision {
    size_t mark;
    int atom;
    bool flipped;
  };
  std::vector<Decision> decisions;
  bool conflict = false;
  bool rooted = false;
  bool root_conflict = false;
  size_t root_mark = 0;
  std::vector<PropEvent> events;

  std::vector<WeakN> weak_ns;
  std::vector<WeakAggN> weak_aggs;
  bool weaks_prepped = false;

  Impl(const GroundProgram& g, SolverOptions o) : ground(g), opts(o) {
    std::map<std::string, int> set_keys, agg_keys;
    for (const StandardAtom& a : g.facts) {
      RuleN rn;
      rn.head.push_back(intern_atom(a));
      rules.push_back(std::move(rn));
    }
    for (const Rule& r : g.rules) {
      RuleN rn;
      for (const StandardAtom& h : r.head) rn.head.push_back(intern_atom(h));
      for (const BodyLiteral& lit : r.body) {
        if (lit.is_standard()) {
          rn.std_body.push_back({intern_atom(lit.standard()), lit.negated});
        } else if (lit.is_aggregate()) {
          rn.agg_body.push_back(
              {intern_agg(lit.aggregate(), agg_keys, set_keys), lit.negated});
        } else {
          throw std::logic_error("builtin atom in a ground rule body");
        }
      }
      rules.push_back(std::move(rn));
    }
    head_rules.resize(atoms.size());
    for (size_t i = 0; i < rules.size(); ++i)
      for (int h : rules[i].head) head_rules[h].push_back(static_cast<int>(i));
    score.assign(atoms.size(), 0);
    for (const RuleN& r : rules)
      for (const auto& l : r.std_body) ++score[l.first];
    for (const SetN& s : sets)
      for (const Group& grp : s.groups)
        for (const Conj& c : grp.conjs)
          for (const auto& l : c.lits) ++score[l.first];
    aval.assign(atoms.size(), Tv::undef);
    gval.assign(aggs.size(), Tv::undef);
  }

  int intern_atom(const StandardAtom& a) {
    auto [it, fresh] = atom_ids.emplace(a, static_cast<int>(atoms.size()));
    if (fresh) atoms.push_back(a);
    return it->second;
  }

  int intern_set(const GroundSet& s, std::map<std::string, int>& set_keys) {
    std::string key;
    if (opts.share_aggregates) {
      key = to_string(s);
      auto it = set_keys.find(key);
      if (it != set_keys.end()) return it->second;
    }
    SetN sn;
    for (size_t i = 0; i < s.elements.size();) {
      const std::vector<Constant>& tuple = s.elements[i].tuple;
      Group grp;
      size_t j = i;
      while (j < s.elements.size() && s.elements[j].tuple == tuple) {
        Conj c;
        for (const StandardLiteral& l : s.elements[j].conj)
          c.lits.push_back({intern_atom(l.atom), l.negated});
        grp.conjs.push_back(std::move(c));
        ++j;
      }
      i = j;
      if (tuple.empty()) continue;
      grp.natural = tuple.front().is_number;
      if (grp.natural) grp.value = tuple.front().number;
      sn.groups.push_back(std::move(grp));
    }
    sets.push_back(std::move(sn));
    int id = static_cast<int>(sets.size()) - 1;
    if (opts.share_aggregates) set_keys.emplace(std::move(key), id);
    return id;
  }

  int intern_agg(const AggregateAtom& src, std::map<std::string, int>& agg_keys,
                 std::map<std::string, int>& set_keys) {
    AggregateAtom a = src;
    normalize_aggregate_guards(a);
    fold_numeric_guards(a);
    if (a.has_symbolic_set()) throw std::logic_error("symbolic set in a ground rule");
    std::string key;
    if (opts.share_aggregates) {
      key = to_string(a);
      auto it = agg_keys.find(key);
      if (it != agg_keys.end()) return it->second;
    }
    AggN n;
    n.fn = a.fn;
    n.name = to_string(a);
    n.set = intern_set(a.ground_set(), set_keys);
    auto guard_num = [](const Guard& g) -> std::optional<uint64_t> {
      if (g.term.is_var() || !g.term.value.is_number || g.delta != 0) return std::nullopt;
      return g.term.value.number;
    };
    if (auto l = guard_num(a.left)) {
      n.left = *l;
    } else {
      n.malformed = true;
    }
    if (a.right.plus_inf) {
      n.right_inf = true;
    } else if (auto r = guard_num(a.right)) {
      n.right_inf = false;
      n.right = *r;
    } else {
      n.malformed = true;
    }
    aggs.push_back(std::move(n));
    int id = static_cast<int>(aggs.size()) - 1;
    if (opts.share_aggregates) agg_keys.emplace(std::move(key), id);
    return id;
  }

  // ---- assignment ----

  bool assign_atom(int id, bool v, const char* reason) {
    Tv cur = aval[id];
    if (cur != Tv::undef) {
      if (cur == tv_of(v)) return true;
      conflict = true;
      return false;
    }
    aval[id] = tv_of(v);
    trail.push_back({id, false});
    if (decisions.empty()) events.push_back({to_string(atoms[id]), v, reason});
    return true;
  }

  bool assign_agg(int id, bool v, const char* reason) {
    Tv cur = gval[id];
    if (cur != Tv::undef) {
      if (cur == tv_of(v)) return true;
      conflict = true;
      return false;
    }
    gval[id] = tv_of(v);
    trail.push_back({id, true});
    if (decisions.empty()) events.push_back({aggs[id].name, v, reason});
    return true;
  }

  void undo_to(size_t mark) {
    while (trail.size() > mark) {
      TrailEntry e = trail.back();
      trail.pop_back();
      (e.agg ? gval[e.id] : aval[e.id]) = Tv::undef;
    }
    conflict = false;
  }

  // ---- propagation ----

  Tv lit_tv(std::pair<int, bool> l, const std::vector<Tv>& vals) const {
    Tv v = vals[l.first];
    if (v == Tv::undef) return Tv::undef;
    return ((v == Tv::yes) != l.second) ? Tv::yes : Tv::no;
  }

  bool rule_prop(const RuleN& r, bool* changed) {
    int undef_body = 0;
    std::pair<int, bool> open{-1, false};
    bool open_agg = false;
    for (const auto& l : r.std_body) {
      Tv t = lit_tv(l, aval);
      if (t == Tv::no) return true;
      if (t == Tv::undef) {
        ++undef_body;
        open = l;
        open_agg = false;
      }
    }
    for (const auto& l : r.agg_body) {
      Tv t = lit_tv(l, gval);
      if (t == Tv::no) return true;
      if (t == Tv::undef) {
        ++undef_body;
        open = l;
        open_agg = true;
      }
    }
    int undef_heads = 0, open_head = -1;
    for (int h : r.head) {
      if (aval[h] == Tv::yes) return true;  // satisfied
      if (aval[h] == Tv::undef) {
        ++undef_heads;
        open_head = h;
      }
    }
    if (undef_body == 0) {
      if (undef_heads == 0) {
        conflict = true;
        return false;
      }
      if (undef_heads == 1) {
        *changed = true;
        return assign_atom(open_head, true, "unit-head");
      }
      return true;
    }
    if (undef_body == 1 && undef_heads == 0) {
      // all heads false, rest of the body true: the open literal must fail
      *changed = true;
      if (open_agg) return assign_agg(open.first, open.second, "contraposition");
      return assign_atom(open.first, open.second, "contraposition");
    }
    return true;
  }

  // A rule can still support a: a in its head, body not false, no other head
  // atom true.
  bool can_support(const RuleN& r, int a) const {
    for (const auto& l : r.std_body)
      if (lit_tv(l, aval) == Tv::no) return false;
    for (const auto& l : r.agg_body)
      if (lit_tv(l, gval) == Tv::no) return false;
    for (int h : r.head)
      if (h != a && aval[h] == Tv::yes) return false;
    return true;
  }

  bool support_prop(bool* changed) {
    for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
      if (aval[a] == Tv::no) continue;
      int possible = 0, last = -1;
      for (int ri : head_rules[a]) {
        if (can_support(rules[ri], a)) {
          ++possible;
          last = ri;
          if (possible > 1) break;
        }
      }
      if (possible == 0) {
        if (aval[a] == Tv::yes) {
          conflict = true;
          return false;
        }
        *changed = true;
        if (!assign_atom(a, false, "support-loss")) return false;
      } else if (possible == 1 && aval[a] == Tv::yes) {
        // the one remaining support must fire exactly
        const RuleN& r = rules[last];
        for (const auto& l : r.std_body) {
          if (lit_tv(l, aval) == Tv::undef) {
            *changed = true;
            if (!assign_atom(l.first, !l.second, "last-support")) return false;
          }
        }
        for (const auto& l : r.agg_body) {
          if (lit_tv(l, gval) == Tv::undef) {
            *changed = true;
            if (!assign_agg(l.first, !l.second, "last-support")) return false;
          }
        }
        for (int h : r.head) {
          if (h != a && aval[h] == Tv::undef) {
            *changed = true;
            if (!assign_atom(h, false, "last-support")) return false;
          }
        }
      }
    }
    return true;
  }

  Tv conj_tv(const Conj& c) const {
    bool any_undef = false;
    for (const auto& l : c.lits) {
      Tv t = lit_tv(l, aval);
      if (t == Tv::no) return Tv::no;
      if (t == Tv::undef) any_undef = true;
    }
    return any_undef ? Tv::undef : Tv::yes;
  }

  Tv group_tv(const Group& g) const {
    bool any_undef = false;
    for (const Conj& c : g.conjs) {
      Tv t = conj_tv(c);
      if (t == Tv::yes) return Tv::yes;
      if (t == Tv::undef) any_undef = true;
    }
    return any_undef ? Tv::undef : Tv::no;
  }

  // Whether the aggregate atom can still take the target truth value under
  // some completion of the undecided groups. Exact for count, min and max;
  // sum and times use their achievable hull, whose endpoints are achievable,
  // so "false" answers are always right and propagation stays sound.
  static bool feasible(bool target, const AggN& n, const std::vector<GroupState>& gs,
                       uint64_t maxint) {
    if (!n.right_inf && n.left > n.right) return !target;
    auto in_point = [&](uint64_t v) { return n.left <= v && (n.right_inf || v <= n.right); };
    auto in_range = [&](uint64_t lo, uint64_t hi) {
      if (hi < n.left) return false;
      if (!n.right_inf && lo > n.right) return false;
      return true;
    };
    auto out_of_range = [&](uint64_t lo, uint64_t hi) {
      return lo < n.left || (!n.right_inf && hi > n.right);
    };
    auto sat_add = [](uint64_t a, uint64_t b) {
      uint64_t r = 0;
      return __builtin_add_overflow(a, b, &r) ? UINT64_MAX : r;
    };

    bool nonnat_true = false, nonnat_undef = false;
    size_t nat_true = 0, nat_undef = 0;
    for (const GroupState& g : gs) {
      if (g.tv == Tv::no) continue;
      if (!g.natural) {
        (g.tv == Tv::yes ? nonnat_true : nonnat_undef) = true;
      } else {
        (g.tv == Tv::yes ? nat_true : nat_undef) += 1;
      }
    }

    switch (n.fn) {
      case AggrFn::count: {
        uint64_t lo = 0, hi = 0;
        for (const GroupState& g : gs) {
          if (g.tv == Tv::yes) ++lo;
          if (g.tv != Tv::no) ++hi;
        }
        return target ? in_range(lo, hi) : out_of_range(lo, hi);
      }
      case AggrFn::sum: {
        if (target && nonnat_true) return false;
        if (!target && (nonnat_true || nonnat_undef)) return true;
        uint64_t lo = 0, hi = 0;
        for (const GroupState& g : gs) {
          if (!g.natural) continue;
          if (g.tv == Tv::yes) {
            lo = sat_add(lo, g.value);
            hi = sat_add(hi, g.value);
          } else if (g.tv == Tv::undef) {
            hi = sat_add(hi, g.value);
          }
        }
        return target ? in_range(lo, hi) : out_of_range(lo, hi);
      }
      case AggrFn::times: {
        if (target && nonnat_true) return false;
        if (!target && (nonnat_true || nonnat_undef)) return true;
        // products saturate where the semantics saturates: maxint + 1
        uint64_t cap = maxint < UINT64_MAX ? maxint + 1 : UINT64_MAX;
        auto sat_mul = [cap](uint64_t a, uint64_t b) {
          uint64_t r = 0;
          if (__builtin_mul_overflow(a, b, &r) || r > cap) return cap;
          return r;
        };
        bool true_zero = false, undef_zero = false;
        uint64_t prod_true = 1, prod_all = 1;
        for (const GroupState& g : gs) {
          if (!g.natural) continue;
          if (g.tv == Tv::yes) {
            if (g.value == 0) true_zero = true;
            prod_true = sat_mul(prod_true, g.value == 0 ? 1 : g.value);
            prod_all = sat_mul(prod_all, g.value == 0 ? 1 : g.value);
          } else if (g.tv == Tv::undef) {
            if (g.value == 0) undef_zero = true;
            prod_all = sat_mul(prod_all, g.value == 0 ? 1 : g.value);
          }
        }
        uint64_t lo = (true_zero || undef_zero) ? 0 : prod_true;
        uint64_t hi = true_zero ? 0 : prod_all;
        return target ? in_range(lo, hi) : out_of_range(lo, hi);
      }
      case AggrFn::min:
      case AggrFn::max: {
        bool is_min = n.fn == AggrFn::min;
        if (target && nonnat_true) return false;
        if (target && nat_true == 0 && nat_undef == 0) return false;  // certainly bottom
        if (!target && (nonnat_true || nonnat_undef || nat_true == 0)) return true;
        uint64_t m0 = 0;
        bool have_true = nat_true > 0;
        bool first = true;
        for (const GroupState& g : gs) {
          if (!g.natural || g.tv != Tv::yes) continue;
          if (first) {
            m0 = g.value;
            first = false;
          } else {
            m0 = is_min ? std::min(m0, g.value) : std::max(m0, g.value);
          }
        }
        // achievable values: m0 itself (all undecided false), or the blend
        // with any single undecided group (further groups only repeat blends)
        if (have_true && (target == in_point(m0))) return true;
        for (const GroupState& g : gs) {
          if (!g.natural || g.tv != Tv::undef) continue;
          uint64_t v = !have_true ? g.value
                                  : (is_min ? std::min(m0, g.value) : std::max(m0, g.value));
          if (target == in_point(v)) return true;
        }
        return false;
      }
    }
    return true;
  }

  bool force_group(const Group& g, bool value, bool* changed) {
    if (value) {
      int undef_conjs = 0;
      const Conj* open = nullptr;
      for (const Conj& c : g.conjs) {
        Tv t = conj_tv(c);
        if (t == Tv::yes) return true;  // already satisfied
        if (t == Tv::undef) {
          ++undef_conjs;
          open = &c;
        }
      }
      if (undef_conjs == 0) {
        conflict = true;
        return false;
      }
      if (undef_conjs > 1) return true;  // no unique way to satisfy it yet
      for (const auto& l : open->lits) {
        if (lit_tv(l, aval) == Tv::undef) {
          *changed = true;
          if (!assign_atom(l.first, !l.second, "agg-backward")) return false;
        }
      }
      return true;
    }
    for (const Conj& c : g.conjs) {
      int undef = 0;
      std::pair<int, bool> open{-1, false};
      bool false_lit = false;
      for (const auto& l : c.lits) {
        Tv t = lit_tv(l, aval);
        if (t == Tv::no) {
          false_lit = true;
          break;
        }
        if (t == Tv::undef) {
          ++undef;
          open = l;
        }
      }
      if (false_lit) continue;
      if (undef == 0) {
        conflict = true;  // a conjunction already holds
        return false;
      }
      if (undef == 1) {
        *changed = true;
        if (!assign_atom(open.first, open.second, "agg-backward")) return false;
      }
    }
    return true;
  }

  bool agg_prop(int ai, bool* changed) {
    const AggN& n = aggs[ai];
    if (n.malformed) {
      if (gval[ai] == Tv::undef) {
        *changed = true;
        return assign_agg(ai, false, "agg-closure");
      }
      if (gval[ai] == Tv::yes) {
        conflict = true;
        return false;
      }
      return true;
    }
    const SetN& s = sets[n.set];
    std::vector<GroupState> gs;
    gs.reserve(s.groups.size());
    bool all_decided = true;
    for (const Group& g : s.groups) {
      Tv t = group_tv(g);
      if (t == Tv::undef) all_decided = false;
      gs.push_back({t, g.natural, g.value});
    }
    bool pt = feasible(true, n, gs, opts.maxint);
    bool pf = feasible(false, n, gs, opts.maxint);
    const char* why = all_decided ? "agg-closure" : "agg-forward";
    if (!pt && !pf) {
      conflict = true;
      return false;
    }
    if (!pf && gval[ai] != Tv::yes) {
      *changed = true;
      if (!assign_agg(ai, true, why)) return false;
    }
    if (!pt && gval[ai] != Tv::no) {
      *changed = true;
      if (!assign_agg(ai, false, why)) return false;
    }
    if (gval[ai] == Tv::undef || all_decided) return true;
    // backward: a group whose hypothetical value leaves the required truth
    // infeasible is forced the other way. Larger tuples first: their weight
    // decides sum and times bounds soonest.
    bool want = gval[ai] == Tv::yes;
    for (size_t gi = gs.size(); gi-- > 0;) {
      if (gs[gi].tv != Tv::undef) continue;
      gs[gi].tv = Tv::yes;
      bool ok_true = feasible(want, n, gs, opts.maxint);
      gs[gi].tv = Tv::no;
      bool ok_false = feasible(want, n, gs, opts.maxint);
      gs[gi].tv = Tv::undef;
      if (!ok_true && !ok_false) {
        conflict = true;
        return false;
      }
      if (!ok_true) {
        if (!force_group(s.groups[gi], false, changed)) return false;
      } else if (!ok_false) {
        if (!force_group(s.groups[gi], true, changed)) return false;
      }
    }
    return true;
  }

  bool propagate() {
    if (conflict) return false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const RuleN& r : rules)
        if (!rule_prop(r, &changed)) return false;
      if (!support_prop(&changed)) return false;
      for (size_t i = 0; i < aggs.size(); ++i)
        if (!agg_prop(static_cast<int>(i), &changed)) return false;
    }
    return true;
  }

  // ---- search ----

  void root() {
    if (rooted) return;
    rooted = true;
    for (const StandardAtom& a : ground.facts) {
      if (!assign_atom(atom_ids.at(a), true, "fact")) {
        root_conflict = true;
        return;
      }
    }
    if (!propagate()) root_conflict = true;
    root_mark = trail.size();
  }

  int pick_branch() const {
    int best = -1, best_score = -1;
    for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
      if (aval[a] != Tv::undef) continue;
      if (score[a] > best_score) {
        best_score = score[a];
        best = a;
      }
    }
    return best;
  }

  bool backtrack() {
    while (!decisions.empty()) {
      Decision& d = decisions.back();
      if (!d.flipped) {
        undo_to(d.mark);
        d.flipped = true;
        assign_atom(d.atom, false, "branch");
        return true;
      }
      undo_to(d.mark);
      decisions.pop_back();
    }
    return false;
  }

  void enumerate(const std::function<bool(const AtomSet&)>& yield) {
    root();
    if (root_conflict) return;
    decisions.clear();
    undo_to(root_mark);
    for (;;) {
      if (!propagate()) {
        if (!backtrack()) return;
        continue;
      }
      int a = pick_branch();
      if (a < 0) {
        AtomSet x;
        for (size_t i = 0; i < atoms.size(); ++i)
          if (aval[i] == Tv::yes) x.insert(atoms[i]);
        if (check_answer_set(ground, x, opts.maxint, opts.minimality_cap).ok) {
          if (!yield(x)) return;
        }
        if (!backtrack()) return;
        continue;
      }
      decisions.push_back({trail.size(), a, false});
      assign_atom(a, true, "branch");
    }
  }

  // ---- optimization ----

  void prep_weaks() {
    if (weaks_prepped) return;
    weaks_prepped = true;
    if (ground.weaks.empty()) return;
    std::vector<uint64_t> f = level_factors(ground);
    for (const WeakConstraint& w : ground.weaks) {
      WeakN n;
      n.fweight = checked_mul(f[weak_number(w.level, "level") - 1],
                              weak_number(w.weight, "weight"));
      for (const BodyLiteral& l : w.body) {
        if (l.is_standard()) {
          auto it = atom_ids.find(l.standard());
          if (it != atom_ids.end()) {
            n.lits.push_back({it->second, l.negated});
          } else if (!l.negated) {
            // Underivable atom: positively required, never satisfied.
            n.never = true;
          }
        } else if (l.is_builtin()) {
          if (eval_builtin(l.builtin(), opts.maxint) == l.negated) n.never = true;
        } else {
          WeakAggN a;
          a.agg = &l.aggregate();
          for (const GroundSetElement& e : a.agg->ground_set().elements)
            for (const StandardLiteral& sl : e.conj) {
              auto it = atom_ids.find(sl.atom);
              if (it != atom_ids.end()) a.deps.push_back(it->second);
            }
          n.agg_lits.push_back({static_cast<int>(weak_aggs.size()), l.negated});
          weak_aggs.push_back(std::move(a));
        }
      }
      weak_ns.push_back(std::move(n));
    }
  }

  Tv weak_agg_tv(const WeakAggN& a) const {
    AtomSet m;
    for (int id : a.deps) {
      if (aval[id] == Tv::undef) return Tv::undef;
      if (aval[id] == Tv::yes) m.insert(atoms[id]);
    }
    return tv_of(eval_aggregate_atom(*a.agg, m, opts.maxint));
  }

  uint64_t violated_bound() const {
    uint64_t b = 0;
    for (const WeakN& w : weak_ns) {
      if (w.never) continue;
      bool certain = true;
      for (auto [id, neg] : w.lits) {
        if (aval[id] != (neg ? Tv::no : Tv::yes)) {
          certain = false;
          break;
        }
      }
      for (size_t i = 0; certain && i < w.agg_lits.size(); ++i) {
        Tv t = weak_agg_tv(weak_aggs[w.agg_lits[i].first]);
        if (t == Tv::undef || (t == Tv::yes) == w.agg_lits[i].second) certain = false;
      }
      if (certain) b = checked_add(b, w.fweight);
    }
    return b;
  }

  // Branch and bound: certainly-violated weight already exceeding the
  // incumbent objective cuts the branch. Without an incumbent this is plain
  // enumeration.
  void optimal_search(std::vector<AtomSet>* out, CostVector* best) {
    root();
    if (root_conflict) return;
    prep_weaks();
    decisions.clear();
    undo_to(root_mark);
    bool have = false;
    CostVector inc;
    for (;;) {
      if (!propagate() || (have && violated_bound() > inc.scalar)) {
        if (!backtrack()) break;
        continue;
      }
      int a = pick_branch();
      if (a < 0) {
        AtomSet x;
        for (size_t i = 0; i < atoms.size(); ++i)
          if (aval[i] == Tv::yes) x.insert(atoms[i]);
        if (check_answer_set(ground, x, opts.maxint, opts.minimality_cap).ok) {
          CostVector c = cost_of(ground, x, opts.maxint);
          if (!have || c.scalar < inc.scalar) {
            have = true;
            inc = c;
            out->clear();
            out->push_back(x);
          } else if (c.scalar == inc.scalar) {
            out->push_back(x);
          }
        }
        if (!backtrack()) break;
        continue;
      }
      decisions.push_back({trail.size(), a, false});
      assign_atom(a, true, "branch");
    }
    if (best && have) *best = inc;
  }
};

Solver::Solver(const GroundProgram& g, SolverOptions opts)
    : impl_(std::make_unique<Impl>(g, opts)) {}

Solver::~Solver() = default;

const std::vector<PropEvent>& Solver::root_propagation() {
  impl_->root();
  return impl_->events;
}

void Solver::enumerate(const std::function<bool(const AtomSet&)>& yield) {
  impl_->enumerate(yield);
}

std::vector<AtomSet> Solver::all(size_t limit) {
  std::vector<AtomSet> out;
  enumerate([&](const AtomSet& x) {
    out.push_back(x);
    return limit == 0 || out.size() < limit;
  });
  return out;
}

std::vector<AtomSet> Solver::optimal(CostVector* best, size_t limit) {
  std::vector<AtomSet> out;
  impl_->optimal_search(&out, best);
  std::sort(out.begin(), out.end());
  if (limit != 0 && out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace dlpa
