// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dlpa/syntax.hpp"

namespace dlpa {

// One reported problem. `tag` is a short stable category used by the
// machine-readable diagnostics mode: syntax, arity, guard, safety,
// stratification, builtin, capacity, overflow, usage, check.
struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string tag;
  SourceLoc loc;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d, bool tagged);

inline Diagnostic make_error(std::string tag, SourceLoc loc, std::string msg) {
  return {Diagnostic::Severity::error, std::move(tag), loc, std::move(msg)};
}

inline Diagnostic make_warning(std::string tag, SourceLoc loc, std::string msg) {
  return {Diagnostic::Severity::warning, std::move(tag), loc, std::move(msg)};
}

// Fatal pipeline error carrying a diagnostic; the driver turns it into a
// diagnostic report and exit status 2.
class FatalError : public std::runtime_error {
 public:
  explicit FatalError(Diagnostic d)
      : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

}  // namespace dlpa
