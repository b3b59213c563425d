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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mrepair {

// ----------------------------------------------------------------------------
// Errors
// ----------------------------------------------------------------------------

enum class ErrorCode : std::uint8_t {
  kSyntax,
  kInvalidUpdate,
  kNotBijective,
  kUnsafeRule,
  kNegatedIdb,
  kArityMismatch,
  kUndefinedIdb,
  kSchemaConflict,
  kVariableInFact,
  kNotDatalog,
  kNotPositiveDatalog,
  kNotSemipositive,
  kNotUcq,
  kUnsupported,
  kPartialAssignment,
  kNotProjectionFree,
  kNotJoinFree,
  kEmptyUniverse,
  kNotARepair,
  kCapExceeded,
  kInvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SourceError";
    case ErrorCode::kInvalidUpdate: return "InvalidUpdate";
    case ErrorCode::kNotBijective: return "NotBijective";
    case ErrorCode::kUnsafeRule: return "UnsafeRule";
    case ErrorCode::kNegatedIdb: return "NegatedIdb";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kUndefinedIdb: return "UndefinedIdb";
    case ErrorCode::kSchemaConflict: return "SchemaConflict";
    case ErrorCode::kVariableInFact: return "VariableInFact";
    case ErrorCode::kNotDatalog: return "NotDatalog";
    case ErrorCode::kNotPositiveDatalog: return "NotPositiveDatalog";
    case ErrorCode::kNotSemipositive: return "NotSemipositive";
    case ErrorCode::kNotUcq: return "NotUcq";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kPartialAssignment: return "PartialAssignment";
    case ErrorCode::kNotProjectionFree: return "NotProjectionFree";
    case ErrorCode::kNotJoinFree: return "NotJoinFree";
    case ErrorCode::kEmptyUniverse: return "EmptyUniverse";
    case ErrorCode::kNotARepair: return "NotARepair";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Base class for every error raised by the library. The code identifies the
/// failure kind; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An error tied to a position in parsed text. Line and column are 1-based.
class SourceError : public Error {
 public:
  SourceError(ErrorCode code, std::size_t line, std::size_t column,
              const std::string& message)
      : Error(code, message), line_(line), column_(column) {}
  SourceError(std::size_t line, std::size_t column, const std::string& message)
      : SourceError(ErrorCode::kSyntax, line, column, message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// ----------------------------------------------------------------------------
// Terms, literals, rules, programs
// ----------------------------------------------------------------------------

struct Term {
  enum class Kind : std::uint8_t { kVariable, kConstant };

  Kind kind = Kind::kConstant;
  std::string name;

  static Term var(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static Term constant(std::string name) {
    return {Kind::kConstant, std::move(name)};
  }

  bool is_var() const noexcept { return kind == Kind::kVariable; }
  bool is_constant() const noexcept { return kind == Kind::kConstant; }

  auto operator<=>(const Term&) const = default;
};

/// A body literal. Relational literals carry a relation symbol and arguments;
/// comparisons keep their two operands in `args` as {lhs, rhs}.
struct Literal {
  enum class Kind : std::uint8_t { kPositive, kNegative, kEqual, kNotEqual };

  Kind kind = Kind::kPositive;
  std::string relation;
  std::vector<Term> args;

  static Literal positive(std::string relation, std::vector<Term> args) {
    return {Kind::kPositive, std::move(relation), std::move(args)};
  }
  static Literal negative(std::string relation, std::vector<Term> args) {
    return {Kind::kNegative, std::move(relation), std::move(args)};
  }
  static Literal equal(Term lhs, Term rhs) {
    return {Kind::kEqual, {}, {std::move(lhs), std::move(rhs)}};
  }
  static Literal not_equal(Term lhs, Term rhs) {
    return {Kind::kNotEqual, {}, {std::move(lhs), std::move(rhs)}};
  }

  bool is_relational() const noexcept {
    return kind == Kind::kPositive || kind == Kind::kNegative;
  }
  bool is_comparison() const noexcept { return !is_relational(); }
  bool is_positive() const noexcept { return kind == Kind::kPositive; }
  bool is_negative() const noexcept { return kind == Kind::kNegative; }

  const Term& lhs() const { return args.at(0); }
  const Term& rhs() const { return args.at(1); }

  auto operator<=>(const Literal&) const = default;
};

namespace detail {
inline void add_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}
}  // namespace detail

struct Rule {
  std::string head;
  std::vector<Term> head_args;
  std::vector<Literal> body;

  /// Head variables in order of first occurrence.
  std::vector<std::string> free_vars() const {
    std::vector<std::string> out;
    for (const Term& t : head_args)
      if (t.is_var()) detail::add_unique(out, t.name);
    return out;
  }

  /// Body variables that do not occur in the head, in order of first
  /// occurrence.
  std::vector<std::string> bound_vars() const {
    const std::vector<std::string> free = free_vars();
    std::vector<std::string> out;
    for (const Literal& lit : body)
      for (const Term& t : lit.args)
        if (t.is_var() &&
            std::find(free.begin(), free.end(), t.name) == free.end())
          detail::add_unique(out, t.name);
    return out;
  }

  /// All variables: head first, then body, each in order of first occurrence.
  std::vector<std::string> vars() const {
    std::vector<std::string> out = free_vars();
    for (const Literal& lit : body)
      for (const Term& t : lit.args)
        if (t.is_var()) detail::add_unique(out, t.name);
    return out;
  }

  auto operator<=>(const Rule&) const = default;
};

/// A datalog program over a fixed extensional schema. `edb` and `idb` map
/// every relation symbol in use to its arity; the two key sets are disjoint.
struct Program {
  std::vector<Rule> rules;
  std::string answer;
  std::map<std::string, std::size_t> edb;
  std::map<std::string, std::size_t> idb;
  /// True when the schema came from explicit `@edb` declarations.
  bool declared_schema = false;

  std::size_t arity() const {
    auto it = idb.find(answer);
    return it == idb.end() ? 0 : it->second;
  }
  bool is_edb(const std::string& rel) const { return edb.count(rel) != 0; }
  bool is_idb(const std::string& rel) const { return idb.count(rel) != 0; }

  bool operator==(const Program&) const = default;
};

// ----------------------------------------------------------------------------
// Facts, instances, updates
// ----------------------------------------------------------------------------

using Tuple = std::vector<std::string>;
using Assignment = std::map<std::string, std::string>;
using Renaming = std::map<std::string, std::string>;

/// A ground atom. The defaulted ordering (relation symbol, then argument
/// tuple, both lexicographic) is the canonical fact order used everywhere.
struct Fact {
  std::string relation;
  std::vector<std::string> args;

  auto operator<=>(const Fact&) const = default;
};

using FactSet = std::set<Fact>;

/// A finite set of ground facts.
class Instance {
 public:
  using const_iterator = FactSet::const_iterator;

  Instance() = default;
  Instance(std::initializer_list<Fact> facts) : facts_(facts) {}
  explicit Instance(FactSet facts) : facts_(std::move(facts)) {}

  bool contains(const Fact& f) const { return facts_.count(f) != 0; }
  bool insert(Fact f) { return facts_.insert(std::move(f)).second; }
  bool erase(const Fact& f) { return facts_.erase(f) != 0; }

  std::size_t size() const noexcept { return facts_.size(); }
  bool empty() const noexcept { return facts_.empty(); }
  const_iterator begin() const { return facts_.begin(); }
  const_iterator end() const { return facts_.end(); }
  const FactSet& facts() const noexcept { return facts_; }

  /// Facts of `relation` whose arguments start with `prefix`, as an iterator
  /// range in canonical order.
  std::pair<const_iterator, const_iterator> range(
      const std::string& relation,
      const std::vector<std::string>& prefix = {}) const {
    auto first = facts_.lower_bound(Fact{relation, prefix});
    auto last = first;
    while (last != facts_.end() && last->relation == relation &&
           last->args.size() >= prefix.size() &&
           std::equal(prefix.begin(), prefix.end(), last->args.begin()))
      ++last;
    return {first, last};
  }

  bool operator==(const Instance&) const = default;

 private:
  FactSet facts_;
};

struct Update {
  FactSet ins;
  FactSet del;

  bool empty() const noexcept { return ins.empty() && del.empty(); }
  bool operator==(const Update&) const = default;
};

/// Canonical comparison of updates: insertions first, then deletions, each
/// compared as sorted fact sequences.
inline bool canonical_less(const Update& a, const Update& b) {
  if (a.ins != b.ins) return a.ins < b.ins;
  return a.del < b.del;
}

inline std::size_t update_size(const Update& u) {
  return u.ins.size() + u.del.size();
}

inline Update inverse(const Update& u) { return {u.del, u.ins}; }

/// Throws kInvalidUpdate unless ins ∩ I = ∅, del ⊆ I and ins ∩ del = ∅.
inline void validate_update(const Instance& inst, const Update& u) {
  for (const Fact& f : u.ins) {
    if (inst.contains(f))
      throw Error(ErrorCode::kInvalidUpdate,
                  "inserted fact already present in the instance");
    if (u.del.count(f))
      throw Error(ErrorCode::kInvalidUpdate,
                  "fact is both inserted and deleted");
  }
  for (const Fact& f : u.del)
    if (!inst.contains(f))
      throw Error(ErrorCode::kInvalidUpdate,
                  "deleted fact is not present in the instance");
}

inline Instance apply_update(const Instance& inst, const Update& u) {
  validate_update(inst, u);
  Instance out = inst;
  for (const Fact& f : u.ins) out.insert(f);
  for (const Fact& f : u.del) out.erase(f);
  return out;
}

// ----------------------------------------------------------------------------
// Renaming
// ----------------------------------------------------------------------------

inline void check_injective(const Renaming& rho) {
  std::set<std::string> images;
  for (const auto& [from, to] : rho)
    if (!images.insert(to).second)
      throw Error(ErrorCode::kNotBijective,
                  "renaming maps two constants to '" + to + "'");
}

namespace detail {
inline const std::string& image(const Renaming& rho, const std::string& c) {
  auto it = rho.find(c);
  return it == rho.end() ? c : it->second;
}

inline Fact rename_fact(const Fact& f, const Renaming& rho) {
  Fact out{f.relation, {}};
  out.args.reserve(f.args.size());
  for (const std::string& c : f.args) out.args.push_back(image(rho, c));
  return out;
}

inline FactSet rename_facts(const FactSet& facts, const Renaming& rho) {
  FactSet out;
  for (const Fact& f : facts) out.insert(rename_fact(f, rho));
  return out;
}
}  // namespace detail

inline Instance rename(const Instance& inst, const Renaming& rho) {
  check_injective(rho);
  return Instance(detail::rename_facts(inst.facts(), rho));
}

inline Update rename(const Update& u, const Renaming& rho) {
  check_injective(rho);
  return {detail::rename_facts(u.ins, rho), detail::rename_facts(u.del, rho)};
}

inline Tuple rename(const Tuple& t, const Renaming& rho) {
  check_injective(rho);
  Tuple out;
  out.reserve(t.size());
  for (const std::string& c : t) out.push_back(detail::image(rho, c));
  return out;
}

// ----------------------------------------------------------------------------
// Domains
// ----------------------------------------------------------------------------

inline std::set<std::string> constants_of(const Program& p) {
  std::set<std::string> out;
  for (const Rule& r : p.rules) {
    for (const Term& t : r.head_args)
      if (t.is_constant()) out.insert(t.name);
    for (const Literal& lit : r.body)
      for (const Term& t : lit.args)
        if (t.is_constant()) out.insert(t.name);
  }
  return out;
}

inline std::set<std::string> constants_of(const Instance& inst) {
  std::set<std::string> out;
  for (const Fact& f : inst)
    for (const std::string& c : f.args) out.insert(c);
  return out;
}

/// adom(P) ∪ adom(I) ∪ ā.
inline std::set<std::string> active_domain(const Program& p,
                                           const Instance& inst,
                                           const Tuple& target = {}) {
  std::set<std::string> out = constants_of(p);
  out.merge(constants_of(inst));
  out.insert(target.begin(), target.end());
  return out;
}

/// Fresh constants live in the `_c<N>` space, which user input cannot reach.
inline std::string fresh_constant(std::size_t index) {
  return "_c" + std::to_string(index);
}

inline bool is_fresh_constant(std::string_view c) {
  if (c.size() < 3 || c.substr(0, 2) != "_c") return false;
  return std::all_of(c.begin() + 2, c.end(),
                     [](char ch) { return ch >= '0' && ch <= '9'; });
}

/// Every fact over `relations` (name -> arity) whose arguments come from
/// `domain`, in canonical order.
inline std::vector<Fact> all_facts(
    const std::map<std::string, std::size_t>& relations,
    const std::vector<std::string>& domain) {
  std::vector<Fact> out;
  for (const auto& [rel, arity] : relations) {
    if (arity > 0 && domain.empty()) continue;
    std::vector<std::size_t> idx(arity, 0);
    bool done = false;
    while (!done) {
      Fact f{rel, {}};
      f.args.reserve(arity);
      for (std::size_t i : idx) f.args.push_back(domain[i]);
      out.push_back(std::move(f));
      // odometer increment; wraps past the first position when exhausted
      done = true;
      for (std::size_t pos = arity; pos-- > 0;) {
        if (++idx[pos] < domain.size()) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrepair
