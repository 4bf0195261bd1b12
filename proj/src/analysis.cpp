// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "dlpa/printer.hpp"

namespace dlpa {

namespace {

// Predicates of the standard atoms nested inside an aggregate atom.
std::vector<std::string> nested_predicates(const AggregateAtom& a) {
  std::vector<std::string> out;
  if (a.has_symbolic_set()) {
    for (const StandardLiteral& l : a.symbolic().conj) out.push_back(l.atom.predicate);
  } else {
    for (const GroundSetElement& e : a.ground_set().elements)
      for (const StandardLiteral& l : e.conj) out.push_back(l.atom.predicate);
  }
  return out;
}

}  // namespace

int DependencyGraph::node(const std::string& predicate) const {
  auto it = index.find(predicate);
  return it == index.end() ? -1 : it->second;
}

DependencyGraph DependencyGraph::of(const Program& p) {
  DependencyGraph g;
  auto add_node = [&g](const std::string& pred) {
    auto [it, fresh] = g.index.emplace(pred, static_cast<int>(g.nodes.size()));
    if (fresh) g.nodes.push_back(pred);
    return it->second;
  };
  auto add_edge = [&](const std::string& from, const std::string& to, EdgeLabel label) {
    g.edges.push_back({add_node(from), add_node(to), label});
  };

  auto register_body = [&](const std::vector<BodyLiteral>& body) {
    for (const BodyLiteral& lit : body) {
      if (lit.is_standard()) {
        add_node(lit.standard().predicate);
      } else if (lit.is_aggregate()) {
        for (const std::string& pred : nested_predicates(lit.aggregate())) add_node(pred);
      }
    }
  };

  for (const Rule& r : p.rules) {
    for (const StandardAtom& h : r.head) add_node(h.predicate);
    register_body(r.body);
    for (const StandardAtom& h : r.head) {
      for (const BodyLiteral& lit : r.body) {
        if (lit.is_standard()) {
          add_edge(lit.standard().predicate, h.predicate,
                   lit.negated ? EdgeLabel::negative_body : EdgeLabel::positive_body);
        } else if (lit.is_aggregate()) {
          for (const std::string& pred : nested_predicates(lit.aggregate()))
            add_edge(pred, h.predicate, EdgeLabel::aggregate_body);
        }
      }
      for (const StandardAtom& other : r.head) {
        if (other.predicate != h.predicate)
          add_edge(other.predicate, h.predicate, EdgeLabel::head_shared);
      }
    }
  }
  for (const WeakConstraint& w : p.weaks) register_body(w.body);
  return g;
}

namespace {

// Tarjan SCC over the adjacency built from all edges.
struct SccResult {
  std::vector<int> component;  // node -> component id
  int count = 0;
};

SccResult strongly_connected_components(int n, const std::vector<DependencyGraph::Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) adj[e.from].push_back(e.to);

  SccResult res;
  res.component.assign(n, -1);
  std::vector<int> idx(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next = 0;

  // Iterative Tarjan; nodes are few but recursion depth is untrusted.
  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (idx[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    idx[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (idx[w] == -1) {
          idx[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
      } else {
        if (low[f.v] == idx[f.v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.component[w] = res.count;
            if (w == f.v) break;
          }
          ++res.count;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return res;
}

}  // namespace

Components condensation(const DependencyGraph& g) {
  Components out;
  int n = static_cast<int>(g.nodes.size());
  if (n == 0) return out;
  SccResult scc = strongly_connected_components(n, g.edges);
  out.count = scc.count;
  out.component_of = scc.component;
  out.members.assign(scc.count, {});
  for (int v = 0; v < n; ++v) out.members[scc.component[v]].push_back(v);

  std::vector<std::set<int>> succ(scc.count);
  std::vector<int> indeg(scc.count, 0);
  for (const auto& e : g.edges) {
    int a = scc.component[e.from], b = scc.component[e.to];
    if (a != b && succ[a].insert(b).second) ++indeg[b];
  }
  // Kahn; the ready set is keyed by each component's first-appearance node so
  // evaluation order is stable under everything but source reordering.
  std::set<std::pair<int, int>> ready;  // (first member node, component)
  for (int c = 0; c < scc.count; ++c)
    if (indeg[c] == 0) ready.insert({out.members[c].front(), c});
  while (!ready.empty()) {
    int c = ready.begin()->second;
    ready.erase(ready.begin());
    out.topo_order.push_back(c);
    for (int t : succ[c])
      if (--indeg[t] == 0) ready.insert({out.members[t].front(), t});
  }
  return out;
}

namespace {

// Shortest cycle through the strict edge (from -> to): BFS from `to` back to
// `from` restricted to the edge's component.
std::vector<std::string> witness_cycle(const DependencyGraph& g, const SccResult& scc,
                                       const DependencyGraph::Edge& strict) {
  int comp = scc.component[strict.from];
  std::vector<std::vector<int>> adj(g.nodes.size());
  for (const auto& e : g.edges) {
    if (scc.component[e.from] == comp && scc.component[e.to] == comp)
      adj[e.from].push_back(e.to);
  }
  std::vector<int> prev(g.nodes.size(), -2);
  std::deque<int> queue{strict.to};
  prev[strict.to] = -1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == strict.from) break;
    for (int w : adj[v]) {
      if (prev[w] == -2) {
        prev[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::string> cycle;
  // Self-loop on a single predicate: from == to.
  if (strict.from == strict.to) return {g.nodes[strict.from], g.nodes[strict.from]};
  std::vector<int> path;
  for (int v = strict.from; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());  // to ... from
  cycle.push_back(g.nodes[strict.from]);
  for (int v : path) cycle.push_back(g.nodes[v]);
  return cycle;  // from, to, ..., from
}

StratificationResult check_stratification(const Program& p, EdgeLabel strict_label) {
  DependencyGraph g = DependencyGraph::of(p);
  StratificationResult res;
  if (g.nodes.empty()) {
    res.ok = true;
    return res;
  }
  SccResult scc = strongly_connected_components(static_cast<int>(g.nodes.size()), g.edges);

  for (const auto& e : g.edges) {
    if (e.label == strict_label && scc.component[e.from] == scc.component[e.to]) {
      res.ok = false;
      res.witness_cycle = witness_cycle(g, scc, e);
      return res;
    }
  }

  // Longest-path levels over the condensation, 1-based: weak edges keep the
  // level, strict edges raise it.
  std::vector<int> level(scc.count, 1);
  // Kahn order over the condensation; ties resolved by smallest component id,
  // which follows from the simple ascending scan.
  std::vector<std::vector<std::pair<int, int>>> cadj(scc.count);  // (target, raise)
  std::vector<int> indeg(scc.count, 0);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    int a = scc.component[e.from], b = scc.component[e.to];
    if (a == b) continue;
    cadj[a].push_back({b, e.label == strict_label ? 1 : 0});
    if (seen.insert({a, b}).second) ++indeg[b];
  }
  std::deque<int> ready;
  for (int c = 0; c < scc.count; ++c)
    if (indeg[c] == 0) ready.push_back(c);
  std::set<std::pair<int, int>> consumed;
  while (!ready.empty()) {
    int c = ready.front();
    ready.pop_front();
    for (auto [t, raise] : cadj[c]) {
      level[t] = std::max(level[t], level[c] + raise);
      if (consumed.insert({c, t}).second && --indeg[t] == 0) ready.push_back(t);
    }
  }
  res.ok = true;
  for (size_t v = 0; v < g.nodes.size(); ++v)
    res.levels[g.nodes[v]] = level[scc.component[v]];
  return res;
}

}  // namespace

StratificationResult check_aggregate_stratification(const Program& p) {
  return check_stratification(p, EdgeLabel::aggregate_body);
}

StratificationResult check_negation_stratification(const Program& p) {
  return check_stratification(p, EdgeLabel::negative_body);
}

namespace {

void vars_of_term(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.var);
}

// Occurrences split into "inside an aggregate function" (set variables and
// conjunction atoms) and everything else (heads, standard and builtin
// literals, guards, weights).
struct Occurrences {
  std::set<std::string> in_function;
  std::set<std::string> elsewhere;
};

void scan_body(const std::vector<BodyLiteral>& body, Occurrences& occ) {
  for (const BodyLiteral& lit : body) {
    if (lit.is_standard()) {
      collect_vars(lit.standard(), occ.elsewhere);
    } else if (lit.is_builtin()) {
      collect_vars(lit.builtin(), occ.elsewhere);
    } else {
      const AggregateAtom& a = lit.aggregate();
      vars_of_term(a.left.term, occ.elsewhere);
      if (!a.right.plus_inf) vars_of_term(a.right.term, occ.elsewhere);
      if (a.has_symbolic_set()) {
        for (const std::string& v : a.symbolic().vars) occ.in_function.insert(v);
        for (const StandardLiteral& l : a.symbolic().conj)
          collect_vars(l.atom, occ.in_function);
      }
    }
  }
}

VariableClasses classes_of(const Occurrences& occ) {
  VariableClasses c;
  for (const std::string& v : occ.in_function)
    if (!occ.elsewhere.count(v)) c.local.insert(v);
  c.global = occ.elsewhere;
  for (const std::string& v : occ.in_function)
    if (!c.local.count(v)) c.global.insert(v);
  return c;
}

}  // namespace

VariableClasses classify_variables(const Rule& r) {
  Occurrences occ;
  for (const StandardAtom& h : r.head) collect_vars(h, occ.elsewhere);
  scan_body(r.body, occ);
  return classes_of(occ);
}

VariableClasses classify_variables(const WeakConstraint& w) {
  Occurrences occ;
  scan_body(w.body, occ);
  vars_of_term(w.weight, occ.elsewhere);
  vars_of_term(w.level, occ.elsewhere);
  return classes_of(occ);
}

bool is_assignment_shape(const AggregateAtom& a) {
  // Source form: exactly one guard, the '=' one, on a variable.
  if (a.left_op == CmpOp::eq)
    return a.left.term.is_var() && a.right.is_default_right();
  if (a.right_op == CmpOp::eq)
    return a.right.term.is_var() && a.left_op == CmpOp::le && a.left.is_default_left();
  // Normalized form: V <= f(S) <= V.
  return a.normalized && !a.right.plus_inf && a.left.term.is_var() &&
         a.left.term == a.right.term && a.left.delta == 0 && a.right.delta == 0;
}

namespace {

// Defining program of `pred`: rules whose heads are backward-reachable from
// it through rule bodies (standard and aggregate-nested alike).
std::set<std::string> defining_closure(const Program& p, const std::string& pred) {
  std::map<std::string, std::set<std::string>> deps;  // head -> body predicates
  for (const Rule& r : p.rules) {
    for (const StandardAtom& h : r.head) {
      auto& d = deps[h.predicate];
      for (const BodyLiteral& lit : r.body) {
        if (lit.is_standard()) {
          d.insert(lit.standard().predicate);
        } else if (lit.is_aggregate()) {
          for (const std::string& n : nested_predicates(lit.aggregate())) d.insert(n);
        }
      }
    }
  }
  std::set<std::string> closed;
  std::deque<std::string> queue{pred};
  while (!queue.empty()) {
    std::string q = queue.front();
    queue.pop_front();
    if (!closed.insert(q).second) continue;
    for (const std::string& d : deps[q]) queue.push_back(d);
  }
  return closed;
}

Program subprogram(const Program& p, const std::set<std::string>& preds) {
  Program sub;
  for (const Rule& r : p.rules) {
    bool keep = false;
    for (const StandardAtom& h : r.head) keep = keep || preds.count(h.predicate) > 0;
    if (keep) sub.rules.push_back(r);
  }
  return sub;
}

bool assignment_eligible(const Program& p, const AggregateAtom& a,
                         std::map<std::string, bool>& cache) {
  for (const std::string& pred : nested_predicates(a)) {
    auto it = cache.find(pred);
    if (it == cache.end()) {
      std::set<std::string> preds = defining_closure(p, pred);
      Program def = subprogram(p, preds);
      bool ok = check_negation_stratification(def).ok;
      for (const Rule& r : def.rules) ok = ok && r.head.size() == 1;
      it = cache.emplace(pred, ok).first;
    }
    if (!it->second) return false;
  }
  return true;
}

}  // namespace

std::vector<AssignmentSite> detect_assignment_aggregates(const Program& p) {
  std::vector<AssignmentSite> sites;
  std::map<std::string, bool> cache;
  auto scan = [&](const std::vector<BodyLiteral>& body, size_t statement) {
    for (size_t i = 0; i < body.size(); ++i) {
      const BodyLiteral& lit = body[i];
      if (!lit.is_aggregate() || lit.negated) continue;
      if (!is_assignment_shape(lit.aggregate())) continue;
      if (!assignment_eligible(p, lit.aggregate(), cache)) continue;
      sites.push_back({statement, i});
    }
  };
  for (size_t r = 0; r < p.rules.size(); ++r) scan(p.rules[r].body, r);
  for (size_t w = 0; w < p.weaks.size(); ++w) scan(p.weaks[w].body, p.rules.size() + w);
  return sites;
}

namespace {

RuleSafety statement_safety(const std::vector<StandardAtom>& head,
                            const std::vector<BodyLiteral>& body,
                            const VariableClasses& classes,
                            const std::set<size_t>& assignment_positions) {
  RuleSafety out;

  std::set<std::string> bound;
  for (const BodyLiteral& lit : body) {
    if (lit.is_standard() && !lit.negated) collect_vars(lit.standard(), bound);
  }
  // Built-in binding chains and assignment guards, to fixpoint: each builtin
  // binds at most its single unbound argument.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < body.size(); ++i) {
      const BodyLiteral& lit = body[i];
      if (lit.is_builtin() && !lit.negated) {
        const BuiltinAtom& b = lit.builtin();
        auto is_bound = [&bound](const Term& t) {
          return !t.is_var() || bound.count(t.var) > 0;
        };
        std::vector<const Term*> terms{&b.lhs, &b.rhs};
        if (b.arith != BuiltinAtom::Arith::none) {
          terms.push_back(&b.rhs2);
        } else if (b.rel != CmpOp::eq) {
          continue;  // pure comparisons bind nothing
        }
        int unbound = 0;
        const Term* candidate = nullptr;
        for (const Term* t : terms) {
          if (!is_bound(*t)) {
            ++unbound;
            candidate = t;
          }
        }
        if (unbound == 1 && bound.insert(candidate->var).second) changed = true;
      } else if (lit.is_aggregate() && !lit.negated && assignment_positions.count(i)) {
        const AggregateAtom& a = lit.aggregate();
        const Term& guard = a.left.term.is_var() ? a.left.term : a.right.term;
        if (guard.is_var() && bound.insert(guard.var).second) changed = true;
      }
    }
  }

  (void)head;
  for (const std::string& v : classes.global) {
    if (!bound.count(v)) out.offending.push_back({v, 1});
  }

  for (const BodyLiteral& lit : body) {
    if (!lit.is_aggregate()) continue;
    const AggregateAtom& a = lit.aggregate();
    if (!a.has_symbolic_set()) continue;
    const SymbolicSet& s = a.symbolic();
    std::set<std::string> set_vars(s.vars.begin(), s.vars.end());
    for (const StandardLiteral& l : s.conj) collect_vars(l.atom, set_vars);
    std::set<std::string> positive;
    for (const StandardLiteral& l : s.conj)
      if (!l.negated) collect_vars(l.atom, positive);
    for (const std::string& v : set_vars) {
      if (classes.local.count(v) && !positive.count(v)) out.offending.push_back({v, 2});
    }
  }

  std::sort(out.offending.begin(), out.offending.end(),
            [](const SafetyViolation& a, const SafetyViolation& b) {
              return std::tie(a.condition, a.var) < std::tie(b.condition, b.var);
            });
  out.offending.erase(std::unique(out.offending.begin(), out.offending.end(),
                                  [](const SafetyViolation& a, const SafetyViolation& b) {
                                    return a.condition == b.condition && a.var == b.var;
                                  }),
                      out.offending.end());
  out.safe = out.offending.empty();
  return out;
}

}  // namespace

SafetyReport check_safety(const Program& p, bool relaxed) {
  SafetyReport report;
  std::map<size_t, std::set<size_t>> assignment_positions;
  if (relaxed) {
    for (const AssignmentSite& site : detect_assignment_aggregates(p))
      assignment_positions[site.statement].insert(site.body_position);
  }
  for (size_t r = 0; r < p.rules.size(); ++r) {
    report.per_statement.push_back(statement_safety(p.rules[r].head, p.rules[r].body,
                                                    classify_variables(p.rules[r]),
                                                    assignment_positions[r]));
  }
  for (size_t w = 0; w < p.weaks.size(); ++w) {
    report.per_statement.push_back(statement_safety({}, p.weaks[w].body,
                                                    classify_variables(p.weaks[w]),
                                                    assignment_positions[p.rules.size() + w]));
  }
  return report;
}

std::vector<Diagnostic> analyze(const Program& p) {
  std::vector<Diagnostic> out;

  SafetyReport safety = check_safety(p, true);
  for (size_t i = 0; i < safety.per_statement.size(); ++i) {
    const RuleSafety& rs = safety.per_statement[i];
    if (rs.safe) continue;
    bool weak = i >= p.rules.size();
    SourceLoc loc = weak ? p.weaks[i - p.rules.size()].loc : p.rules[i].loc;
    for (const SafetyViolation& v : rs.offending) {
      std::ostringstream msg;
      msg << "unsafe " << (weak ? "weak constraint" : "rule") << ": variable " << v.var;
      if (v.condition == 1)
        msg << " is not bound by a positive unnested standard literal";
      else
        msg << " does not appear in a positive literal of its set conjunction";
      out.push_back(make_error("safety", loc, msg.str()));
    }
  }

  StratificationResult strat = check_aggregate_stratification(p);
  if (!strat.ok) {
    std::ostringstream msg;
    msg << "recursion through an aggregate: ";
    for (size_t i = 0; i < strat.witness_cycle.size(); ++i) {
      if (i) msg << " -> ";
      msg << strat.witness_cycle[i];
    }
    out.push_back(make_error("stratification", SourceLoc{}, msg.str()));
  }
  return out;
}

}  // namespace dlpa
