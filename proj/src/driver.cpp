// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include "dlpa/driver.hpp"

#include <fstream>
#include <sstream>

#include "dlpa/aggregates.hpp"
#include "dlpa/analysis.hpp"
#include "dlpa/diagnostics.hpp"
#include "dlpa/grounder.hpp"
#include "dlpa/oracle.hpp"
#include "dlpa/parser.hpp"
#include "dlpa/printer.hpp"
#include "dlpa/solver.hpp"

namespace dlpa {

namespace {

bool read_file(const std::string& path, std::string* text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  *text = buf.str();
  return true;
}

bool reserved(const StandardAtom& a) { return !a.predicate.empty() && a.predicate[0] == '#'; }

std::string cost_line(const CostVector& c) {
  std::string line = "COST";
  for (size_t i = 0; i < c.by_level.size(); ++i) {
    line += " level=" + std::to_string(i + 1) + " weight=" + std::to_string(c.by_level[i]);
  }
  return line;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  bool failed = false;
  auto report = [&](const Diagnostic& d) {
    err << format_diagnostic(d, cfg.tagged) << '\n';
    failed = failed || d.severity == Diagnostic::Severity::error;
  };

  try {
    int modes = (cfg.ground_only ? 1 : 0) + (cfg.oracle ? 1 : 0) +
                (cfg.check_file.empty() ? 0 : 1);
    if (modes > 1) {
      report(make_error("usage", {}, "pick one of --ground-only, --oracle, --check"));
      return 2;
    }
    if (cfg.maxint < 1) {
      report(make_error("usage", {}, "maxint must be at least 1"));
      return 2;
    }
    if (cfg.inputs.empty()) {
      report(make_error("usage", {}, "no input files"));
      return 2;
    }
    std::string text;
    for (const std::string& path : cfg.inputs) {
      std::string part;
      if (!read_file(path, &part)) {
        report(make_error("usage", {}, "cannot read " + path));
        return 2;
      }
      text += part;
      if (!text.empty() && text.back() != '\n') text += '\n';
    }

    ParserOptions popts;
    popts.maxint = cfg.maxint;
    ParseResult pr = parse_program(text, popts);
    for (const Diagnostic& d : pr.diagnostics) report(d);
    if (!pr.ok() || failed) return 2;

    for (const Diagnostic& d : analyze(pr.program)) report(d);
    if (failed) return 2;

    GroundOptions gopts;
    gopts.maxint = cfg.maxint;
    gopts.dedup = !cfg.no_dedup;
    GroundResult gr = ground(standardize(pr.program), gopts);
    for (const Diagnostic& d : gr.warnings) report(d);
    if (failed) return 2;

    if (cfg.stats) {
      out << "STATS rules=" << gr.program.rules.size() << " weaks=" << gr.program.weaks.size()
          << " facts=" << gr.program.facts.size() << " atoms=" << gr.stats.atoms
          << " sets=" << gr.stats.set_occurrences
          << " distinct-sets=" << gr.stats.distinct_sets
          << " instances=" << gr.stats.instances_total << '\n';
    }

    if (cfg.ground_only) {
      out << to_string(gr.program);
      return 0;
    }

    if (!cfg.check_file.empty()) {
      std::string itext;
      if (!read_file(cfg.check_file, &itext)) {
        report(make_error("usage", {}, "cannot read " + cfg.check_file));
        return 2;
      }
      InterpretationResult ir = parse_interpretation(itext, popts);
      for (const Diagnostic& d : ir.diagnostics) report(d);
      if (failed) return 2;
      AtomSet x;
      for (const StandardAtom& a : ir.atoms)
        if (!reserved(a)) x.insert(a);
      // Reserved atoms are invisible plumbing; rebuild them from their
      // defining rules so a visible interpretation can be tested as given.
      for (const StandardAtom& a : gr.program.facts)
        if (reserved(a)) x.insert(a);
      bool grown = true;
      while (grown) {
        grown = false;
        for (const Rule& r : gr.program.rules) {
          if (r.head.size() != 1 || !reserved(r.head.front())) continue;
          if (x.count(r.head.front())) continue;
          if (body_true(r.body, x, cfg.maxint)) {
            x.insert(r.head.front());
            grown = true;
          }
        }
      }
      AnswerCheck ac = check_answer_set(gr.program, x, cfg.maxint);
      if (ac.ok) {
        out << "ANSWER SET\n";
        return 0;
      }
      out << "NOT AN ANSWER SET\n";
      out << "witness: " << ac.witness << '\n';
      return 1;
    }

    auto project = [&cfg](const AtomSet& x) {
      AtomSet v;
      for (const StandardAtom& a : x) {
        if (reserved(a)) continue;
        if (!cfg.filter.empty()) {
          bool match = false;
          for (const std::string& p : cfg.filter) match = match || p == a.predicate;
          if (!match) continue;
        }
        v.insert(a);
      }
      return v;
    };

    if (!gr.program.weaks.empty()) {
      CostVector best;
      std::vector<AtomSet> models;
      if (cfg.oracle) {
        models = oracle_optimal(gr.program, cfg.maxint, &best);
      } else {
        Solver solver(gr.program, SolverOptions{cfg.maxint});
        models = solver.optimal(&best);
      }
      size_t shown = 0;
      for (const AtomSet& x : models) {
        if (cfg.n != 0 && shown >= cfg.n) break;
        out << to_string(project(x)) << '\n';
        out << cost_line(best) << '\n';
        ++shown;
      }
      return models.empty() ? 1 : 0;
    }

    if (cfg.oracle) {
      std::vector<AtomSet> models = oracle_answer_sets(gr.program, cfg.maxint);
      size_t shown = 0;
      for (const AtomSet& x : models) {
        if (cfg.n != 0 && shown >= cfg.n) break;
        out << to_string(project(x)) << '\n';
        ++shown;
      }
      return models.empty() ? 1 : 0;
    }

    Solver solver(gr.program, SolverOptions{cfg.maxint});
    size_t shown = 0;
    bool any = false;
    solver.enumerate([&](const AtomSet& x) {
      any = true;
      out << to_string(project(x)) << '\n';
      ++shown;
      return cfg.n == 0 || shown < cfg.n;
    });
    return any ? 0 : 1;
  } catch (const FatalError& e) {
    report(e.diagnostic());
    return 2;
  }
}

}  // namespace dlpa
