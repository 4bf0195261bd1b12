// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Small helpers shared by the test files: parse-or-die, one-call grounding,
// corpus file access.

#pragma once

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "dlpa/analysis.hpp"
#include "dlpa/grounder.hpp"
#include "dlpa/parser.hpp"
#include "dlpa/printer.hpp"

namespace dlpa::test {

inline Program parse_ok(const std::string& text, uint64_t maxint = 1024) {
  ParseResult r = parse_program(text, {maxint});
  for (const Diagnostic& d : r.diagnostics)
    if (d.severity == Diagnostic::Severity::error) FAIL("parse error: " << d.message);
  return r.program;
}

inline GroundResult ground_text(const std::string& text, bool naive = false,
                                uint64_t maxint = 1024) {
  Program p = parse_ok(text, maxint);
  REQUIRE(analyze(p).empty());
  GroundOptions opts;
  opts.naive = naive;
  opts.maxint = maxint;
  return ground(standardize(p), opts);
}

inline std::string corpus_path(const std::string& name) {
  return std::string(DLPA_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) {
  return read_file(corpus_path(name));
}

inline StandardAtom atom(const std::string& text) {
  // Parsed as a fact so the atom grammar stays in one place.
  Program p = parse_ok(text + ".");
  REQUIRE(p.rules.size() == 1);
  REQUIRE(p.rules[0].is_fact());
  return p.rules[0].head[0];
}

inline AtomSet atoms(const std::vector<std::string>& names) {
  AtomSet s;
  for (const std::string& n : names) s.insert(atom(n));
  return s;
}

}  // namespace dlpa::test
