// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlpa/driver.hpp"

int main(int argc, char** argv) {
  // The documented spelling is -n=<k>; the option parser expects the value
  // glued to the short flag, so drop the '='.
  std::vector<std::string> args;
  std::vector<char*> argp;
  args.reserve(static_cast<size_t>(argc));
  for (int i = 0; i < argc; ++i) {
    std::string a = argv[i];
    if (i > 0 && a.rfind("-n=", 0) == 0) a = "-n" + a.substr(3);
    args.push_back(std::move(a));
  }
  for (std::string& a : args) argp.push_back(a.data());
  argc = static_cast<int>(argp.size());
  argv = argp.data();

  CLI::App app{
      "Answer sets of disjunctive logic programs with aggregate functions "
      "and weak constraints"};
  dlpa::RunConfig cfg;
  std::string diagnostics_mode = "plain";

  app.add_option("inputs", cfg.inputs, "program files, concatenated in order");
  app.add_option("-n", cfg.n, "answer sets to print (0 = all)");
  app.add_option("--maxint", cfg.maxint, "largest integer (default 1024)");
  app.add_option("--filter", cfg.filter, "predicates to show, comma separated")
      ->delimiter(',');
  app.add_flag("--ground-only", cfg.ground_only, "print the ground program and stop");
  app.add_flag("--oracle", cfg.oracle,
               "exhaustive reference semantics (small programs only)");
  app.add_option("--check", cfg.check_file,
                 "test the interpretation in this file (one ground atom per line)");
  app.add_flag("--no-dedup", cfg.no_dedup, "keep duplicate ground instances");
  app.add_flag("--stats", cfg.stats, "print grounding statistics");
  app.add_option("--diagnostics", diagnostics_mode, "diagnostic format: plain or tagged")
      ->check(CLI::IsMember({"plain", "tagged"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help and version leave 0, usage problems 2
  }

  cfg.tagged = diagnostics_mode == "tagged";
  return dlpa::run(cfg, std::cout, std::cerr);
}
