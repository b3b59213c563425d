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

// Rendering of model values in the surface syntax accepted by parser.hpp.

#include <ostream>
#include <string>
#include <string_view>

#include "mrepair/model.hpp"

namespace mrepair {

namespace detail {
inline bool is_bare_constant(std::string_view c) {
  if (c.empty()) return false;
  if (is_fresh_constant(c)) return true;
  const char first = c.front();
  if (!((first >= 'a' && first <= 'z') || (first >= '0' && first <= '9')))
    return false;
  for (char ch : c)
    if (!((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
          (ch >= '0' && ch <= '9') || ch == '_'))
      return false;
  return true;
}

template <class Range, class Fn>
std::string join(const Range& items, std::string_view sep, Fn&& fn) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    first = false;
    out += fn(item);
  }
  return out;
}
}  // namespace detail

inline std::string format_constant(const std::string& c) {
  if (detail::is_bare_constant(c)) return c;
  std::string out = "\"";
  for (char ch : c) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

inline std::string to_string(const Term& t) {
  return t.is_var() ? t.name : format_constant(t.name);
}

inline std::string to_string(const Literal& lit) {
  auto term = [](const Term& t) { return to_string(t); };
  switch (lit.kind) {
    case Literal::Kind::kEqual:
      return to_string(lit.lhs()) + " = " + to_string(lit.rhs());
    case Literal::Kind::kNotEqual:
      return to_string(lit.lhs()) + " != " + to_string(lit.rhs());
    case Literal::Kind::kNegative:
      return "!" + lit.relation + "(" + detail::join(lit.args, ",", term) + ")";
    case Literal::Kind::kPositive:
      break;
  }
  return lit.relation + "(" + detail::join(lit.args, ",", term) + ")";
}

inline std::string to_string(const Rule& r) {
  auto term = [](const Term& t) { return to_string(t); };
  std::string out = r.head + "(" + detail::join(r.head_args, ",", term) + ")";
  if (!r.body.empty())
    out += " :- " + detail::join(r.body, ", ", [](const Literal& l) {
             return to_string(l);
           });
  return out + ".";
}

/// One rule per line, followed by the schema declarations (when declared)
/// and the answer directive.
inline std::string to_string(const Program& p) {
  std::string out;
  if (p.declared_schema)
    for (const auto& [rel, arity] : p.edb)
      out += "@edb " + rel + "/" + std::to_string(arity) + ".\n";
  for (const Rule& r : p.rules) out += to_string(r) + "\n";
  out += "@answer " + p.answer + ".\n";
  return out;
}

inline std::string to_string(const Fact& f) {
  return f.relation + "(" +
         detail::join(f.args, ",",
                      [](const std::string& c) { return format_constant(c); }) +
         ")";
}

inline std::string to_string(const Instance& inst) {
  std::string out;
  for (const Fact& f : inst) out += to_string(f) + ".\n";
  return out;
}

inline std::string to_string(const Tuple& t) {
  return "(" +
         detail::join(t, ",",
                      [](const std::string& c) { return format_constant(c); }) +
         ")";
}

inline std::string to_string(const Update& u) {
  auto fact = [](const Fact& f) { return to_string(f); };
  return "+{" + detail::join(u.ins, ", ", fact) + "} -{" +
         detail::join(u.del, ", ", fact) + "}";
}

inline std::string to_string(const Assignment& g) {
  return "{" +
         detail::join(g, ", ",
                      [](const auto& kv) {
                        return kv.first + "->" + format_constant(kv.second);
                      }) +
         "}";
}

inline std::ostream& operator<<(std::ostream& os, const Fact& f) { return os << to_string(f); }

inline std::ostream& operator<<(std::ostream& os, const Update& u) { return os << to_string(u); }

}  // namespace mrepair
