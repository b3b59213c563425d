// Copyright 2026 The mrepair Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Text grammars for programs, fact databases and tuples.
//
//   program   := { rule | directive }
//   rule      := head [ ":-" literal { "," literal } ] "."
//   head      := Name [ "(" [ term { "," term } ] ")" ]
//   literal   := [ "!" ] Name [ "(" ... ")" ] | term ( "=" | "!=" ) term
//   directive := "@answer" Name "." | "@edb" Name "/" arity "."
//   term      := Variable | constant | "quoted string"
//
// Variables match [A-Z][A-Za-z0-9_]*, bare constants [a-z0-9][A-Za-z0-9_]*.
// Identifiers starting with '_' are reserved for generated constants. A '%'
// starts a comment that runs to the end of the line.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrepair/model.hpp"

namespace mrepair {

struct ParseOptions {
  /// Accept `_`-prefixed constants (machine-generated repair output).
  bool allow_reserved_constants = false;
  /// Enforce rule safety. Only tests building deliberately unsafe rules turn
  /// this off.
  bool require_safe = true;
};

namespace detail {

enum class Tok : std::uint8_t {
  kIdent,
  kString,
  kLParen,
  kRParen,
  kComma,
  kDot,
  kImplies,
  kBang,
  kEq,
  kNeq,
  kAt,
  kSlash,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::string_view describe(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kString: return "string";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kDot: return "'.'";
    case Tok::kImplies: return "':-'";
    case Tok::kBang: return "'!'";
    case Tok::kEq: return "'='";
    case Tok::kNeq: return "'!='";
    case Tok::kAt: return "'@'";
    case Tok::kSlash: return "'/'";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (is_ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tok.kind = Tok::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      std::string value;
      bool closed = false;
      while (i < text.size()) {
        const char d = text[i];
        if (d == '"') {
          closed = true;
          advance(1);
          break;
        }
        if (d == '\\' && i + 1 < text.size()) {
          value += text[i + 1];
          advance(2);
          continue;
        }
        if (d == '\n') break;
        value += d;
        advance(1);
      }
      if (!closed)
        throw SourceError(tok.line, tok.column, "unterminated string literal");
      tok.kind = Tok::kString;
      tok.text = std::move(value);
    } else if (c == ':' && i + 1 < text.size() && text[i + 1] == '-') {
      tok.kind = Tok::kImplies;
      advance(2);
    } else if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
      tok.kind = Tok::kNeq;
      advance(2);
    } else {
      switch (c) {
        case '(': tok.kind = Tok::kLParen; break;
        case ')': tok.kind = Tok::kRParen; break;
        case ',': tok.kind = Tok::kComma; break;
        case '.': tok.kind = Tok::kDot; break;
        case '!': tok.kind = Tok::kBang; break;
        case '=': tok.kind = Tok::kEq; break;
        case '@': tok.kind = Tok::kAt; break;
        case '/': tok.kind = Tok::kSlash; break;
        default:
          throw SourceError(line, col,
                            std::string("unexpected character '") + c + "'");
      }
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline bool starts_upper(const std::string& s) {
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z';
}
inline bool is_relation_name(const std::string& s) {
  return !s.empty() && std::isalpha(static_cast<unsigned char>(s.front()));
}

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options)
      : tokens_(tokenize(text)), options_(options) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_end() const { return at(Tok::kEnd); }

  Token take() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  Token expect(Tok kind, std::string_view what = {}) {
    if (!at(kind)) fail("expected " + std::string(what.empty() ? describe(kind) : what));
    return take();
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kIdent || t.kind == Tok::kString
                            ? "'" + t.text + "'"
                            : std::string(describe(t.kind));
    throw SourceError(t.line, t.column, message + ", found " + found);
  }

  std::string relation_name() {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || !is_relation_name(t.text))
      fail("expected a relation name");
    return take().text;
  }

  // A constant in ground position (facts, tuples).
  std::string ground_constant(ErrorCode variable_code) {
    const Token t = peek();
    if (t.kind == Tok::kString) {
      check_reserved(t, t.text);
      take();
      return t.text;
    }
    if (t.kind == Tok::kIdent) {
      if (starts_upper(t.text))
        throw SourceError(variable_code, t.line, t.column,
                          "variable '" + t.text + "' where a constant is required");
      check_reserved(t, t.text);
      take();
      return t.text;
    }
    fail("expected a constant");
  }

  Term term() {
    const Token t = peek();
    if (t.kind == Tok::kString) {
      check_reserved(t, t.text);
      take();
      return Term::constant(t.text);
    }
    if (t.kind != Tok::kIdent) fail("expected a term");
    take();
    if (starts_upper(t.text)) return Term::var(t.text);
    check_reserved(t, t.text);
    return Term::constant(t.text);
  }

  std::vector<Term> term_list() {
    std::vector<Term> out;
    if (!at(Tok::kLParen)) return out;
    take();
    if (at(Tok::kRParen)) {
      take();
      return out;
    }
    out.push_back(term());
    while (at(Tok::kComma)) {
      take();
      out.push_back(term());
    }
    expect(Tok::kRParen);
    return out;
  }

  std::vector<std::string> constant_list(ErrorCode variable_code) {
    std::vector<std::string> out;
    expect(Tok::kLParen);
    if (at(Tok::kRParen)) {
      take();
      return out;
    }
    out.push_back(ground_constant(variable_code));
    while (at(Tok::kComma)) {
      take();
      out.push_back(ground_constant(variable_code));
    }
    expect(Tok::kRParen);
    return out;
  }

  Literal literal() {
    if (at(Tok::kBang)) {
      take();
      std::string rel = relation_name();
      return Literal::negative(std::move(rel), term_list());
    }
    const Token& t = peek();
    const Tok next = peek(1).kind;
    if (t.kind == Tok::kIdent && next == Tok::kLParen) {
      std::string rel = relation_name();
      return Literal::positive(std::move(rel), term_list());
    }
    if ((t.kind == Tok::kIdent || t.kind == Tok::kString) &&
        (next == Tok::kEq || next == Tok::kNeq)) {
      Term lhs = term();
      const bool eq = take().kind == Tok::kEq;
      Term rhs = term();
      return eq ? Literal::equal(std::move(lhs), std::move(rhs))
                : Literal::not_equal(std::move(lhs), std::move(rhs));
    }
    if (t.kind == Tok::kIdent && is_relation_name(t.text) &&
        (next == Tok::kComma || next == Tok::kDot))
      return Literal::positive(take().text, {});
    fail("expected a literal");
  }

  const ParseOptions& options() const { return options_; }

 private:
  void check_reserved(const Token& t, const std::string& value) const {
    if (!value.empty() && value.front() == '_' &&
        !options_.allow_reserved_constants)
      throw SourceError(t.line, t.column,
                        "constants starting with '_' are reserved");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions options_;
};

inline std::string fresh_variable(const Rule& r, std::size_t& counter) {
  const std::vector<std::string> used = r.vars();
  while (true) {
    std::string name = "X" + std::to_string(counter++);
    if (std::find(used.begin(), used.end(), name) == used.end()) return name;
  }
}

// Rewrites `ans(a) :- B` to `ans(X0) :- X0 = a, B`.
inline void desugar_head_constants(Rule& r) {
  std::vector<Literal> equalities;
  std::size_t counter = 0;
  for (Term& t : r.head_args) {
    if (!t.is_constant()) continue;
    std::string v = fresh_variable(r, counter);
    equalities.push_back(Literal::equal(Term::var(v), t));
    t = Term::var(v);
  }
  r.body.insert(r.body.begin(), equalities.begin(), equalities.end());
}

/// Variables that occur in a positive relational literal, closed under
/// equality with constants and with other safe variables.
inline std::set<std::string> range_restricted_vars(const Rule& r) {
  std::set<std::string> safe;
  for (const Literal& lit : r.body)
    if (lit.is_positive())
      for (const Term& t : lit.args)
        if (t.is_var()) safe.insert(t.name);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Literal& lit : r.body) {
      if (lit.kind != Literal::Kind::kEqual) continue;
      const Term& a = lit.lhs();
      const Term& b = lit.rhs();
      auto grounded = [&](const Term& t) {
        return t.is_constant() || safe.count(t.name) != 0;
      };
      if (a.is_var() && !safe.count(a.name) && grounded(b)) {
        safe.insert(a.name);
        changed = true;
      }
      if (b.is_var() && !safe.count(b.name) && grounded(a)) {
        safe.insert(b.name);
        changed = true;
      }
    }
  }
  return safe;
}

inline void check_arity(std::map<std::string, std::size_t>& arities,
                        const std::string& rel, std::size_t arity,
                        const Position& at) {
  auto [it, inserted] = arities.emplace(rel, arity);
  if (!inserted && it->second != arity)
    throw SourceError(ErrorCode::kArityMismatch, at.line, at.column,
                      "relation '" + rel + "' used with arity " +
                          std::to_string(arity) + " but previously with " +
                          std::to_string(it->second));
}

}  // namespace detail

/// Checks every structural invariant of a program and fills in its schema
/// maps. `positions` gives the source location of each rule.
inline void validate_program(Program& p,
                             const std::vector<detail::Position>& positions,
                             const ParseOptions& options = {}) {
  using detail::Position;
  auto pos_of = [&](std::size_t i) {
    return i < positions.size() ? positions[i] : Position{};
  };
  if (p.rules.empty())
    throw SourceError(1, 1, "a program needs at least one rule");

  const std::map<std::string, std::size_t> declared =
      p.declared_schema ? p.edb : std::map<std::string, std::size_t>{};
  p.idb.clear();
  if (!p.declared_schema) p.edb.clear();

  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    if (declared.count(r.head))
      throw SourceError(ErrorCode::kSchemaConflict, pos_of(i).line,
                        pos_of(i).column,
                        "'" + r.head + "' is declared extensional but has a rule");
    detail::check_arity(p.idb, r.head, r.head_args.size(), pos_of(i));
  }
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    const Position at = pos_of(i);
    for (const Literal& lit : r.body) {
      if (!lit.is_relational()) continue;
      if (p.idb.count(lit.relation)) {
        detail::check_arity(p.idb, lit.relation, lit.args.size(), at);
        if (lit.is_negative())
          throw SourceError(ErrorCode::kNegatedIdb, at.line, at.column,
                            "negated intensional relation '" + lit.relation +
                                "'");
        continue;
      }
      if (p.declared_schema && !declared.count(lit.relation))
        throw SourceError(ErrorCode::kUndefinedIdb, at.line, at.column,
                          "relation '" + lit.relation +
                              "' is neither declared extensional nor defined "
                              "by a rule");
      detail::check_arity(p.edb, lit.relation, lit.args.size(), at);
    }
    if (options.require_safe) {
      const std::set<std::string> safe = detail::range_restricted_vars(r);
      for (const std::string& v : r.vars())
        if (!safe.count(v))
          throw SourceError(ErrorCode::kUnsafeRule, at.line, at.column,
                            "variable '" + v +
                                "' does not occur in a positive relational "
                                "literal");
    }
  }
  if (p.answer.empty()) p.answer = p.rules.front().head;
  if (!p.idb.count(p.answer))
    throw SourceError(ErrorCode::kUndefinedIdb, 1, 1,
                      "answer relation '" + p.answer + "' has no rule");
}

inline Program parse_program(std::string_view text,
                             const ParseOptions& options = {}) {
  detail::Parser in(text, options);
  Program p;
  std::vector<detail::Position> positions;
  bool have_answer = false;

  while (!in.at_end()) {
    if (in.at(detail::Tok::kAt)) {
      const detail::Token at = in.take();
      const detail::Token name = in.expect(detail::Tok::kIdent, "a directive name");
      if (name.text == "answer") {
        if (have_answer)
          throw SourceError(at.line, at.column, "duplicate @answer directive");
        p.answer = in.relation_name();
        have_answer = true;
      } else if (name.text == "edb") {
        std::string rel = in.relation_name();
        in.expect(detail::Tok::kSlash);
        const detail::Token n = in.expect(detail::Tok::kIdent, "an arity");
        std::size_t arity = 0;
        for (char c : n.text) {
          if (c < '0' || c > '9')
            throw SourceError(n.line, n.column, "arity must be a number");
          arity = arity * 10 + static_cast<std::size_t>(c - '0');
        }
        detail::check_arity(p.edb, rel, arity, {n.line, n.column});
        p.declared_schema = true;
      } else {
        throw SourceError(name.line, name.column,
                          "unknown directive '@" + name.text + "'");
      }
      in.expect(detail::Tok::kDot);
      continue;
    }

    const detail::Token start = in.peek();
    Rule r;
    r.head = in.relation_name();
    r.head_args = in.term_list();
    if (in.at(detail::Tok::kImplies)) {
      in.take();
      r.body.push_back(in.literal());
      while (in.at(detail::Tok::kComma)) {
        in.take();
        r.body.push_back(in.literal());
      }
    }
    in.expect(detail::Tok::kDot);
    detail::desugar_head_constants(r);
    p.rules.push_back(std::move(r));
    positions.push_back({start.line, start.column});
  }
  validate_program(p, positions, options);
  return p;
}

namespace detail {
inline Fact parse_fact_at(Parser& in, std::map<std::string, std::size_t>& arities) {
  const Token start = in.peek();
  Fact f;
  f.relation = in.relation_name();
  if (in.at(Tok::kLParen)) f.args = in.constant_list(ErrorCode::kVariableInFact);
  check_arity(arities, f.relation, f.args.size(), {start.line, start.column});
  return f;
}
}  // namespace detail

/// Parses a fact database: one `name(c1,...,ck).` per statement. Duplicate
/// facts collapse.
inline Instance parse_instance(std::string_view text,
                               const ParseOptions& options = {}) {
  detail::Parser in(text, options);
  Instance inst;
  std::map<std::string, std::size_t> arities;
  while (!in.at_end()) {
    inst.insert(detail::parse_fact_at(in, arities));
    in.expect(detail::Tok::kDot);
  }
  return inst;
}

/// Parses a single fact with an optional trailing '.'.
inline Fact parse_fact(std::string_view text, const ParseOptions& options = {}) {
  detail::Parser in(text, options);
  std::map<std::string, std::size_t> arities;
  Fact f = detail::parse_fact_at(in, arities);
  if (in.at(detail::Tok::kDot)) in.take();
  if (!in.at_end()) in.fail("expected end of fact");
  return f;
}

/// Parses `(c1,...,ck)`; `()` is the empty tuple.
inline Tuple parse_tuple(std::string_view text, const ParseOptions& options = {}) {
  detail::Parser in(text, options);
  Tuple t = in.constant_list(ErrorCode::kSyntax);
  if (!in.at_end()) in.fail("expected end of tuple");
  return t;
}

/// Checks a database against a program's schema: no facts over intensional
/// relations and no arity clashes with extensional ones.
inline void check_instance(const Program& p, const Instance& inst) {
  for (const Fact& f : inst) {
    if (p.is_idb(f.relation))
      throw Error(ErrorCode::kSchemaConflict,
                  "fact over intensional relation '" + f.relation + "'");
    auto it = p.edb.find(f.relation);
    if (it != p.edb.end() && it->second != f.args.size())
      throw Error(ErrorCode::kArityMismatch,
                  "fact " + f.relation + " has arity " +
                      std::to_string(f.args.size()) + ", expected " +
                      std::to_string(it->second));
    if (it == p.edb.end() && p.declared_schema)
      throw Error(ErrorCode::kSchemaConflict,
                  "relation '" + f.relation + "' is not in the declared schema");
  }
}

}  // namespace mrepair
