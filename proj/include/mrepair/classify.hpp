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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mrepair/model.hpp"

namespace mrepair {

/// Syntactic fragment flags of a program. All flags are computed rule-wise.
struct QueryClass {
  bool is_cq = false;
  bool is_ucq = false;
  bool has_negation = false;
  bool has_comparisons = false;
  bool is_recursive = false;
  bool is_semipositive_datalog = false;
  bool is_positive_datalog = false;
  bool self_join_free = false;
  bool projection_free = false;
  bool join_free = false;
  bool selection_free = false;

  /// Selection-free conjunctive query without negation.
  bool is_pj() const { return is_cq && selection_free && !has_negation; }

  bool operator==(const QueryClass&) const = default;
};

// Rule-level predicates. A rule is join-free when its body holds exactly one
// relational literal; comparisons do not count as joins.

inline bool rule_projection_free(const Rule& r) { return r.bound_vars().empty(); }

inline bool rule_join_free(const Rule& r) {
  std::size_t relational = 0;
  for (const Literal& lit : r.body)
    if (lit.is_relational()) ++relational;
  return relational == 1;
}

inline bool rule_self_join_free(const Rule& r, const Program& p) {
  std::set<std::string> seen;
  for (const Literal& lit : r.body)
    if (lit.is_relational() && p.is_edb(lit.relation) &&
        !seen.insert(lit.relation).second)
      return false;
  return true;
}

/// No constants, no equality or inequality atoms, and no variable repeated
/// inside one atom (the head included).
inline bool rule_selection_free(const Rule& r) {
  auto atom_ok = [](const std::vector<Term>& args) {
    std::set<std::string> vars;
    for (const Term& t : args)
      if (t.is_constant() || !vars.insert(t.name).second) return false;
    return true;
  };
  if (!atom_ok(r.head_args)) return false;
  for (const Literal& lit : r.body)
    if (lit.is_comparison() || !atom_ok(lit.args)) return false;
  return true;
}

namespace detail {
inline bool has_idb_cycle(const Program& p) {
  std::map<std::string, std::set<std::string>> edges;
  for (const Rule& r : p.rules)
    for (const Literal& lit : r.body)
      if (lit.is_relational() && p.is_idb(lit.relation))
        edges[r.head].insert(lit.relation);

  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> mark;
  auto visit = [&](auto&& self, const std::string& node) -> bool {
    Mark& m = mark[node];
    if (m == Mark::kActive) return true;
    if (m == Mark::kDone) return false;
    m = Mark::kActive;
    for (const std::string& next : edges[node])
      if (self(self, next)) return true;
    mark[node] = Mark::kDone;
    return false;
  };
  for (const auto& [rel, arity] : p.idb)
    if (visit(visit, rel)) return true;
  return false;
}
}  // namespace detail

inline QueryClass classify(const Program& p) {
  QueryClass c;
  c.is_recursive = detail::has_idb_cycle(p);
  c.self_join_free = c.projection_free = c.join_free = c.selection_free = true;
  bool edb_only_bodies = true;
  bool single_head = true;
  bool has_inequality = false;
  bool negated_idb = false;
  for (const Rule& r : p.rules) {
    single_head = single_head && r.head == p.answer;
    for (const Literal& lit : r.body) {
      if (lit.is_negative()) {
        c.has_negation = true;
        negated_idb = negated_idb || p.is_idb(lit.relation);
      }
      if (lit.is_comparison()) c.has_comparisons = true;
      if (lit.kind == Literal::Kind::kNotEqual) has_inequality = true;
      if (lit.is_relational() && p.is_idb(lit.relation)) edb_only_bodies = false;
    }
    c.self_join_free = c.self_join_free && rule_self_join_free(r, p);
    c.projection_free = c.projection_free && rule_projection_free(r);
    c.join_free = c.join_free && rule_join_free(r);
    c.selection_free = c.selection_free && rule_selection_free(r);
  }
  c.is_ucq = !c.is_recursive && single_head && edb_only_bodies;
  c.is_cq = c.is_ucq && p.rules.size() == 1;
  c.is_semipositive_datalog = !negated_idb;
  c.is_positive_datalog = !c.has_negation && !has_inequality;
  return c;
}

/// Named fragment used for reporting and solver routing.
enum class Fragment : std::uint8_t {
  kSelfJoinFreeUcq,
  kProjectionFreeUcq,
  kJoinFreeUcq,
  kPj,
  kUcq,
  kDatalog,
  kSemipositiveDatalog,
};

inline Fragment fragment_of(const QueryClass& c) {
  if (c.is_ucq) {
    if (c.projection_free) return Fragment::kProjectionFreeUcq;
    if (c.join_free) return Fragment::kJoinFreeUcq;
    if (c.self_join_free) return Fragment::kSelfJoinFreeUcq;
    if (c.is_pj()) return Fragment::kPj;
    return Fragment::kUcq;
  }
  return c.is_positive_datalog ? Fragment::kDatalog
                               : Fragment::kSemipositiveDatalog;
}

inline std::string_view to_string(Fragment f) {
  switch (f) {
    case Fragment::kSelfJoinFreeUcq: return "UCQneg[sjf]";
    case Fragment::kProjectionFreeUcq: return "SJUneg";
    case Fragment::kJoinFreeUcq: return "SPUneg";
    case Fragment::kPj: return "PJ";
    case Fragment::kUcq: return "UCQneg";
    case Fragment::kDatalog: return "Datalog";
    case Fragment::kSemipositiveDatalog: return "sp-Datalog";
  }
  return "unknown";
}

/// Combined-complexity bounds for {decide, bound, size, min}.
inline std::array<std::string_view, 4> combined_complexity(Fragment f) {
  switch (f) {
    case Fragment::kSelfJoinFreeUcq:
    case Fragment::kProjectionFreeUcq:
    case Fragment::kJoinFreeUcq:
      return {"P", "P", "P", "P"};
    case Fragment::kPj:
    case Fragment::kUcq:
      return {"P", "NP-complete", "OptP[log n]-complete", "FP^NP[n^2]"};
    case Fragment::kDatalog:
      return {"EXP-complete", "EXP-complete", "FEXP", "FEXP"};
    case Fragment::kSemipositiveDatalog:
      return {"EXP-complete", "2EXP", "F2EXP", "F2EXP"};
  }
  return {"?", "?", "?", "?"};
}

}  // namespace mrepair
