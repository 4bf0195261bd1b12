// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// The end-to-end pipeline behind the command-line tool: read, parse,
// analyze, standardize, ground, then solve / print / check per the mode.
// Kept out of main() so tests can drive it against string streams.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dlpa {

struct RunConfig {
  std::vector<std::string> inputs;  // program files, concatenated in order
  size_t n = 0;                     // answer sets to print; 0 means all
  uint64_t maxint = 1024;
  std::vector<std::string> filter;  // predicates to show; empty means all
  bool ground_only = false;
  bool oracle = false;              // brute-force reference instead of the solver
  std::string check_file;           // nonempty: test this interpretation
  bool no_dedup = false;
  bool stats = false;
  bool tagged = false;              // machine-readable diagnostics
};

// Exit status: 0 at least one (optimal) answer set, or check accepted;
// 1 none, or check rejected; 2 usage, syntax, analysis or capacity error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dlpa
