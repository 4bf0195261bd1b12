// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Canonical text form for every syntax node. The output is valid input for
// the parser, and printing is stable: print(parse(print(x))) == print(x).

#pragma once

#include <string>

#include "dlpa/syntax.hpp"

namespace dlpa {

std::string to_string(const Constant& c);
std::string to_string(const Term& t);
std::string to_string(const StandardAtom& a);
std::string to_string(const StandardLiteral& l);
std::string to_string(const BuiltinAtom& b);
std::string to_string(const SymbolicSet& s);
std::string to_string(const GroundSetElement& e);
std::string to_string(const GroundSet& s);
std::string to_string(const AggregateAtom& a);
std::string to_string(const BodyLiteral& l);
std::string to_string(const Rule& r);
std::string to_string(const WeakConstraint& w);
std::string to_string(const Program& p);  // one rule per line, rules then weaks

// Answer-set line: atoms in canonical order, e.g. "{a, b(1)}".
std::string to_string(const AtomSet& interp);

}  // namespace dlpa
