// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#pragma once

#include <string>
#include <vector>

#include "dlpa/diagnostics.hpp"
#include "dlpa/syntax.hpp"

namespace dlpa {

struct ParserOptions {
  uint64_t maxint = 1024;  // numbers above this are rejected
};

struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const {
    for (const Diagnostic& d : diagnostics)
      if (d.severity == Diagnostic::Severity::error) return false;
    return true;
  }
};

// Parses a program. Never throws; all problems are reported as located
// diagnostics and parsing resumes at the next '.' token. Aggregate atoms in
// the result are guard-defaulted (left 0 <=, right <= +infinity).
ParseResult parse_program(const std::string& text, const ParserOptions& opts = {});

// Parses an interpretation file: one ground atom per line, optional trailing
// period, '%' comments and blank lines ignored.
struct InterpretationResult {
  AtomSet atoms;
  std::vector<Diagnostic> diagnostics;
};
InterpretationResult parse_interpretation(const std::string& text,
                                          const ParserOptions& opts = {});

}  // namespace dlpa
