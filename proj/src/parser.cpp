// Copyright (c) 2026 the dlpa authors. MIT license; see LICENSE.
//
// Hand-written lexer and recursive-descent parser. Errors never abort the
// whole parse: each bad statement is reported and skipped up to its closing
// period, so one pass collects every diagnostic.

#include "dlpa/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace dlpa {

std::string format_diagnostic(const Diagnostic& d, bool tagged) {
  std::ostringstream out;
  const char* sev = d.severity == Diagnostic::Severity::error ? "error" : "warning";
  if (tagged) {
    out << sev << '\t' << d.tag << '\t' << d.loc.line << '\t' << d.loc.col
        << '\t' << d.message;
  } else {
    out << sev << ": ";
    if (d.loc.line > 0) out << d.loc.line << ':' << d.loc.col << ": ";
    out << d.message;
  }
  return out.str();
}

namespace {

enum class Tok {
  ident,      // lowercase identifier (also 'v', 'not')
  variable,   // uppercase identifier
  number,
  hash,       // #ident, text holds the part after '#'
  dot, comma, colon, lparen, rparen, lbrace, rbrace, lbracket, rbracket,
  lt, gt, le, ge, eq, ne, pipe, plus, star,
  implies,    // :-
  wimplies,   // :~
  eof, bad
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  uint64_t num = 0;
  SourceLoc loc;
};

struct ParseAbort {
  Diagnostic diag;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::vector<Diagnostic>& diags)
      : text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::eof) break;
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  Token next() {
    Token t;
    t.loc = {line_, col_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    auto two = [this](char a, char b) {
      return pos_ + 1 < text_.size() && text_[pos_] == a && text_[pos_ + 1] == b;
    };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + static_cast<uint64_t>(text_[pos_] - '0');
        ++pos_;
      }
      t.kind = Tok::number;
      t.num = v;
      t.text = text_.substr(start, pos_ - start);
      col_ += static_cast<int>(pos_ - start);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#') {
      bool hash = c == '#';
      size_t start = pos_;
      if (hash) ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word = text_.substr(start + (hash ? 1 : 0), pos_ - start - (hash ? 1 : 0));
      col_ += static_cast<int>(pos_ - start);
      if (hash) {
        t.kind = Tok::hash;
      } else if (word[0] == '_') {
        diags_.push_back(make_error("syntax", t.loc,
                                    "anonymous or underscore-led names are not supported"));
        t.kind = Tok::bad;
      } else if (std::isupper(static_cast<unsigned char>(word[0]))) {
        t.kind = Tok::variable;
      } else {
        t.kind = Tok::ident;
      }
      t.text = std::move(word);
      return t;
    }
    auto emit = [&](Tok k, int len) {
      t.kind = k;
      t.text = text_.substr(pos_, len);
      pos_ += len;
      col_ += len;
      return t;
    };
    if (two(':', '-')) return emit(Tok::implies, 2);
    if (two(':', '~')) return emit(Tok::wimplies, 2);
    if (two('<', '=')) return emit(Tok::le, 2);
    if (two('>', '=')) return emit(Tok::ge, 2);
    if (two('!', '=')) return emit(Tok::ne, 2);
    switch (c) {
      case '.': return emit(Tok::dot, 1);
      case ',': return emit(Tok::comma, 1);
      case ':': return emit(Tok::colon, 1);
      case '(': return emit(Tok::lparen, 1);
      case ')': return emit(Tok::rparen, 1);
      case '{': return emit(Tok::lbrace, 1);
      case '}': return emit(Tok::rbrace, 1);
      case '[': return emit(Tok::lbracket, 1);
      case ']': return emit(Tok::rbracket, 1);
      case '<': return emit(Tok::lt, 1);
      case '>': return emit(Tok::gt, 1);
      case '=': return emit(Tok::eq, 1);
      case '|': return emit(Tok::pipe, 1);
      case '+': return emit(Tok::plus, 1);
      case '*': return emit(Tok::star, 1);
      default: break;
    }
    std::ostringstream msg;
    if (static_cast<unsigned char>(c) >= 0x80)
      msg << "unsupported non-ascii character (use <=, >=, v, :~ spellings)";
    else
      msg << "unexpected character '" << c << "'";
    diags_.push_back(make_error("syntax", t.loc, msg.str()));
    ++pos_;
    ++col_;
    t.kind = Tok::bad;
    return t;
  }

  const std::string& text_;
  std::vector<Diagnostic>& diags_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_cmp(Tok k) {
  return k == Tok::lt || k == Tok::gt || k == Tok::le || k == Tok::ge ||
         k == Tok::eq || k == Tok::ne;
}

CmpOp cmp_of(Tok k) {
  switch (k) {
    case Tok::lt: return CmpOp::lt;
    case Tok::gt: return CmpOp::gt;
    case Tok::le: return CmpOp::le;
    case Tok::ge: return CmpOp::ge;
    case Tok::ne: return CmpOp::ne;
    default: return CmpOp::eq;
  }
}

bool is_aggregate_fn(const std::string& s) {
  return s == "count" || s == "sum" || s == "times" || s == "min" || s == "max";
}

AggrFn fn_of(const std::string& s) {
  if (s == "count") return AggrFn::count;
  if (s == "sum") return AggrFn::sum;
  if (s == "times") return AggrFn::times;
  if (s == "min") return AggrFn::min;
  return AggrFn::max;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParserOptions& opts,
         std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), opts_(opts), diags_(diags) {}

  Program run() {
    Program p;
    while (cur().kind != Tok::eof) {
      try {
        if (cur().kind == Tok::wimplies)
          p.weaks.push_back(parse_weak());
        else
          p.rules.push_back(parse_rule());
      } catch (const ParseAbort& a) {
        diags_.push_back(a.diag);
        recover();
      }
    }
    check_arities(p);
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::string tag = "syntax") const {
    throw ParseAbort{make_error(std::move(tag), cur().loc, msg)};
  }

  void expect(Tok k, const char* what) {
    if (cur().kind != k) fail(std::string("expected ") + what);
    advance();
  }

  // Skips past the offending statement: everything up to and including the
  // next '.', plus a trailing [w:l] annotation if one follows.
  void recover() {
    while (cur().kind != Tok::eof && cur().kind != Tok::dot) advance();
    if (cur().kind == Tok::dot) advance();
    if (cur().kind == Tok::lbracket) {
      while (cur().kind != Tok::eof && cur().kind != Tok::rbracket) advance();
      if (cur().kind == Tok::rbracket) advance();
    }
  }

  uint64_t checked_number(const Token& t) {
    if (t.num > opts_.maxint) {
      throw ParseAbort{make_error(
          "syntax", t.loc,
          "number " + t.text + " exceeds maxint " + std::to_string(opts_.maxint))};
    }
    return t.num;
  }

  bool starts_atom(const Token& t) const {
    return t.kind == Tok::ident || t.kind == Tok::hash;
  }

  bool starts_term(const Token& t) const {
    return t.kind == Tok::ident || t.kind == Tok::variable || t.kind == Tok::number;
  }

  Term parse_term() {
    const Token& t = cur();
    if (t.kind == Tok::variable) {
      advance();
      return Term::variable(t.text);
    }
    if (t.kind == Tok::number) {
      uint64_t v = checked_number(t);
      advance();
      return Term::number(v);
    }
    if (t.kind == Tok::ident) {
      advance();
      return Term::symbol(t.text);
    }
    fail("expected a term");
  }

  StandardAtom parse_standard_atom() {
    const Token& t = cur();
    std::string name;
    if (t.kind == Tok::ident) {
      name = t.text;
    } else if (t.kind == Tok::hash && !is_aggregate_fn(t.text)) {
      name = "#" + t.text;  // internal rewriting predicates round-trip
    } else {
      fail("expected an atom");
    }
    advance();
    StandardAtom a{std::move(name), {}};
    if (cur().kind == Tok::lparen) {
      advance();
      while (true) {
        a.args.push_back(parse_term());
        if (cur().kind == Tok::comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::rparen, "')'");
    }
    return a;
  }

  // Inside a ground element `<t:conj>` the closing '>' follows the last
  // literal; only there is a trailing '>' structure, not a comparison.
  StandardLiteral parse_set_literal(bool ground_closer = false) {
    StandardLiteral l;
    if (cur().kind == Tok::ident && cur().text == "not" && starts_atom(peek())) {
      l.negated = true;
      advance();
    }
    bool cmp_next = is_cmp(peek().kind) && !(ground_closer && peek().kind == Tok::gt);
    if (cur().kind == Tok::variable || cur().kind == Tok::number ||
        (starts_term(cur()) && cmp_next)) {
      fail("built-in predicates are not allowed inside aggregate sets", "builtin");
    }
    l.atom = parse_standard_atom();
    if (is_cmp(cur().kind) && !(ground_closer && cur().kind == Tok::gt))
      fail("built-in predicates are not allowed inside aggregate sets", "builtin");
    return l;
  }

  std::vector<StandardLiteral> parse_conjunction(Tok closing) {
    std::vector<StandardLiteral> conj;
    while (true) {
      conj.push_back(parse_set_literal());
      if (cur().kind == Tok::comma) {
        advance();
        continue;
      }
      break;
    }
    if (cur().kind != closing) fail("expected end of set conjunction");
    return conj;
  }

  GroundSetElement parse_ground_element() {
    expect(Tok::lt, "'<'");
    GroundSetElement e;
    while (true) {
      Term t = parse_term();
      if (t.is_var()) fail("ground set elements cannot contain variables");
      e.tuple.push_back(t.value);
      if (cur().kind == Tok::comma) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::colon, "':'");
    if (cur().kind != Tok::gt) {
      while (true) {
        StandardLiteral l = parse_set_literal(/*ground_closer=*/true);
        if (!l.atom.ground()) fail("ground set elements cannot contain variables");
        e.conj.push_back(std::move(l));
        if (cur().kind == Tok::comma) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(Tok::gt, "'>'");
    return e;
  }

  std::variant<SymbolicSet, GroundSet> parse_set() {
    expect(Tok::lbrace, "'{'");
    if (cur().kind == Tok::lt) {
      std::vector<GroundSetElement> elems;
      while (true) {
        elems.push_back(parse_ground_element());
        if (cur().kind == Tok::comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::rbrace, "'}'");
      return GroundSet::of(std::move(elems));
    }
    SymbolicSet s;
    while (true) {
      if (cur().kind != Tok::variable) fail("expected a set variable");
      s.vars.push_back(cur().text);
      advance();
      if (cur().kind == Tok::comma) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::colon, "':'");
    s.conj = parse_conjunction(Tok::rbrace);
    expect(Tok::rbrace, "'}'");
    return s;
  }

  // Guard orientation: a prefix `t op f(S)` keeps lt/le/eq on the left and
  // flips gt/ge to the right side; suffixes mirror that. Both-guard atoms
  // reject '=' and mixed strict/non-strict pairs.
  AggregateAtom parse_aggregate(std::optional<std::pair<Term, CmpOp>> prefix) {
    SourceLoc loc = cur().loc;
    if (cur().kind != Tok::hash || !is_aggregate_fn(cur().text))
      fail("expected an aggregate function");
    AggregateAtom a;
    a.fn = fn_of(cur().text);
    advance();
    a.set = parse_set();

    std::optional<std::pair<Term, CmpOp>> left;
    std::optional<std::pair<Term, CmpOp>> right;
    auto place = [&](std::pair<Term, CmpOp> c, bool as_left) {
      auto& slot = as_left ? left : right;
      if (slot.has_value())
        throw ParseAbort{make_error("guard", loc, "conflicting aggregate guards")};
      slot = std::move(c);
    };
    if (prefix) {
      CmpOp op = prefix->second;
      if (op == CmpOp::ne)
        throw ParseAbort{make_error("guard", loc, "'!=' is not an aggregate guard")};
      if (op == CmpOp::gt)
        place({prefix->first, CmpOp::lt}, false);
      else if (op == CmpOp::ge)
        place({prefix->first, CmpOp::le}, false);
      else
        place(*prefix, true);
    }
    if (is_cmp(cur().kind)) {
      CmpOp op = cmp_of(cur().kind);
      advance();
      Term t = parse_term();
      if (op == CmpOp::ne)
        throw ParseAbort{make_error("guard", loc, "'!=' is not an aggregate guard")};
      if (op == CmpOp::gt)
        place({std::move(t), CmpOp::lt}, true);
      else if (op == CmpOp::ge)
        place({std::move(t), CmpOp::le}, true);
      else
        place({std::move(t), op}, false);
    }
    if (!left && !right)
      throw ParseAbort{make_error("guard", loc, "aggregate atom needs at least one guard")};
    if (left && right) {
      if (left->second == CmpOp::eq || right->second == CmpOp::eq)
        throw ParseAbort{make_error("guard", loc, "'=' cannot be combined with a second guard")};
      if (left->second != right->second)
        throw ParseAbort{make_error(
            "guard", loc, "mixed strict/non-strict guard pair is not allowed")};
    }
    if (left) {
      a.left = Guard{left->first, 0, false};
      a.left_op = left->second;
    }
    if (right) {
      a.right = Guard{right->first, 0, false};
      a.right_op = right->second;
    }
    return a;
  }

  BodyLiteral parse_body_literal() {
    BodyLiteral lit;
    if (cur().kind == Tok::ident && cur().text == "not" &&
        (starts_atom(peek()) || starts_term(peek()))) {
      lit.negated = true;
      advance();
    }
    // Aggregate without a left guard, or an internal #-atom.
    if (cur().kind == Tok::hash) {
      if (is_aggregate_fn(cur().text)) {
        lit.atom = parse_aggregate(std::nullopt);
      } else {
        lit.atom = parse_standard_atom();
      }
      return lit;
    }
    // A lowercase identifier can open an atom or, when a comparison follows a
    // plain 0-ary name, a term position (symbol constant).
    if (cur().kind == Tok::ident && !(is_cmp(peek().kind))) {
      lit.atom = parse_standard_atom();
      if (is_cmp(cur().kind))
        fail("comparison applied to an atom (built-ins compare terms only)");
      return lit;
    }
    // Term position: builtin or left-guarded aggregate.
    Term lhs = parse_term();
    if (!is_cmp(cur().kind)) fail("expected a comparison operator");
    CmpOp op = cmp_of(cur().kind);
    advance();
    if (cur().kind == Tok::hash && is_aggregate_fn(cur().text)) {
      lit.atom = parse_aggregate(std::make_pair(std::move(lhs), op));
      return lit;
    }
    BuiltinAtom b;
    b.rel = op;
    b.lhs = std::move(lhs);
    b.rhs = parse_term();
    if (op == CmpOp::eq && (cur().kind == Tok::plus || cur().kind == Tok::star)) {
      b.arith = cur().kind == Tok::plus ? BuiltinAtom::Arith::plus
                                        : BuiltinAtom::Arith::times;
      advance();
      b.rhs2 = parse_term();
    }
    if (lit.negated)
      fail("negation of built-in atoms is not supported (use the complement)");
    lit.atom = std::move(b);
    return lit;
  }

  std::vector<BodyLiteral> parse_body() {
    std::vector<BodyLiteral> body;
    while (true) {
      body.push_back(parse_body_literal());
      if (cur().kind == Tok::comma) {
        advance();
        continue;
      }
      break;
    }
    return body;
  }

  Rule parse_rule() {
    Rule r;
    r.loc = cur().loc;
    if (cur().kind != Tok::implies) {
      while (true) {
        if (cur().kind == Tok::hash && is_aggregate_fn(cur().text))
          fail("aggregate atoms cannot occur in rule heads");
        r.head.push_back(parse_standard_atom());
        if (cur().kind == Tok::pipe) {
          advance();
          continue;
        }
        if (cur().kind == Tok::ident && cur().text == "v" && starts_atom(peek())) {
          advance();
          continue;
        }
        break;
      }
    }
    if (cur().kind == Tok::implies) {
      advance();
      // A constraint with an already-violated (empty) body is printable
      // output of the grounder; accept it back.
      if (!(r.head.empty() && cur().kind == Tok::dot)) r.body = parse_body();
    }
    expect(Tok::dot, "'.'");
    return r;
  }

  WeakConstraint parse_weak() {
    WeakConstraint w;
    w.loc = cur().loc;
    expect(Tok::wimplies, "':~'");
    if (cur().kind != Tok::dot) w.body = parse_body();
    expect(Tok::dot, "'.'");
    if (cur().kind == Tok::lbracket) {
      advance();
      if (cur().kind != Tok::colon && cur().kind != Tok::rbracket)
        w.weight = parse_term();
      if (cur().kind == Tok::colon) {
        advance();
        if (cur().kind != Tok::rbracket) w.level = parse_term();
      }
      expect(Tok::rbracket, "']'");
    }
    return w;
  }

  void check_arities(const Program& p) {
    std::map<std::string, std::pair<size_t, SourceLoc>> seen;
    auto check = [&](const StandardAtom& a, SourceLoc loc) {
      auto [it, fresh] = seen.emplace(a.predicate, std::make_pair(a.args.size(), loc));
      if (!fresh && it->second.first != a.args.size()) {
        diags_.push_back(make_error(
            "arity", loc,
            "predicate " + a.predicate + " used with arity " +
                std::to_string(a.args.size()) + " but earlier with arity " +
                std::to_string(it->second.first)));
      }
    };
    auto check_lit = [&](const BodyLiteral& l, SourceLoc loc) {
      if (l.is_standard()) {
        check(l.standard(), loc);
      } else if (l.is_aggregate()) {
        const AggregateAtom& agg = l.aggregate();
        if (agg.has_symbolic_set()) {
          for (const StandardLiteral& s : agg.symbolic().conj) check(s.atom, loc);
        } else {
          for (const GroundSetElement& e : agg.ground_set().elements)
            for (const StandardLiteral& s : e.conj) check(s.atom, loc);
        }
      }
    };
    for (const Rule& r : p.rules) {
      for (const StandardAtom& h : r.head) check(h, r.loc);
      for (const BodyLiteral& l : r.body) check_lit(l, r.loc);
    }
    for (const WeakConstraint& w : p.weaks)
      for (const BodyLiteral& l : w.body) check_lit(l, w.loc);
  }

  std::vector<Token> toks_;
  ParserOptions opts_;
  std::vector<Diagnostic>& diags_;
  size_t pos_ = 0;
};

}  // namespace

ParseResult parse_program(const std::string& text, const ParserOptions& opts) {
  ParseResult res;
  Lexer lex(text, res.diagnostics);
  std::vector<Token> toks = lex.run();
  for (const Token& t : toks)
    if (t.kind == Tok::bad) return res;  // lexer already reported
  Parser parser(std::move(toks), opts, res.diagnostics);
  res.program = parser.run();
  return res;
}

InterpretationResult parse_interpretation(const std::string& text,
                                          const ParserOptions& opts) {
  InterpretationResult res;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t cut = line.find('%');
    if (cut != std::string::npos) line.resize(cut);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    if (line.empty()) continue;
    ParseResult r = parse_program(line.back() == '.' ? line : line + ".", opts);
    bool good = r.ok() && r.program.rules.size() == 1 &&
                r.program.rules[0].is_fact() && r.program.rules[0].head[0].ground();
    if (!good) {
      res.diagnostics.push_back(make_error(
          "check", {lineno, 1}, "expected one ground atom on this line"));
      continue;
    }
    res.atoms.insert(r.program.rules[0].head[0]);
  }
  return res;
}

}  // namespace dlpa
