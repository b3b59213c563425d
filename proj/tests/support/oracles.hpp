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

// Reference implementations used only as test oracles. They share no code
// with the library's evaluator or solvers beyond the model types.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mrepair/model.hpp"

namespace mrepair::testing {

using Relations = std::map<std::string, std::set<Tuple>>;

namespace detail {

inline bool body_holds(const Rule& r, const Assignment& g, const Instance& inst,
                       const Relations& idb) {
  auto value = [&](const Term& t) { return t.is_var() ? g.at(t.name) : t.name; };
  for (const Literal& lit : r.body) {
    if (lit.is_comparison()) {
      if ((value(lit.lhs()) == value(lit.rhs())) != (lit.kind == Literal::Kind::kEqual))
        return false;
      continue;
    }
    Tuple t;
    for (const Term& a : lit.args) t.push_back(value(a));
    auto it = idb.find(lit.relation);
    const bool present = it != idb.end() ? it->second.count(t) != 0
                                         : inst.contains(Fact{lit.relation, t});
    if (present != lit.is_positive()) return false;
  }
  return true;
}

}  // namespace detail

/// Naive bottom-up evaluation: every rule under every assignment over the
/// active domain, repeated until nothing changes. Only valid for safe rules.
inline Relations naive_fixpoint(const Program& p, const Instance& inst) {
  Relations idb;
  for (const Rule& r : p.rules) idb[r.head];
  std::set<std::string> adom_set = constants_of(p);
  for (const std::string& c : constants_of(inst)) adom_set.insert(c);
  const std::vector<std::string> adom(adom_set.begin(), adom_set.end());

  bool changed = true;
  while (changed) {
    changed = false;
    Relations next = idb;
    for (const Rule& r : p.rules) {
      const std::vector<std::string> vars = r.vars();
      if (!vars.empty() && adom.empty()) continue;
      std::vector<std::size_t> idx(vars.size(), 0);
      while (true) {
        Assignment g;
        for (std::size_t i = 0; i < vars.size(); ++i) g[vars[i]] = adom[idx[i]];
        if (detail::body_holds(r, g, inst, idb)) {
          Tuple head;
          for (const Term& t : r.head_args) head.push_back(t.is_var() ? g.at(t.name) : t.name);
          if (next[r.head].insert(head).second) changed = true;
        }
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == adom.size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
      }
    }
    idb = std::move(next);
  }
  return idb;
}

inline bool naive_member(const Program& p, const Instance& inst, const Tuple& t) {
  const Relations idb = naive_fixpoint(p, inst);
  auto it = idb.find(p.answer);
  return it != idb.end() && it->second.count(t) != 0;
}

/// Smallest size of an update over Facts(schema, domain), up to `budget`,
/// that puts `t` in the answer according to naive_member; -1 if none.
inline long brute_force_repair_size(const Program& p, const Instance& inst,
                                    const Tuple& t, const std::vector<std::string>& domain,
                                    std::size_t budget) {
  const std::vector<Fact> facts = all_facts(p.edb, domain);
  std::vector<std::size_t> chosen;
  auto apply = [&] {
    Instance j = inst;
    for (std::size_t i : chosen)
      if (!j.erase(facts[i])) j.insert(facts[i]);
    return j;
  };
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> bool {
    if (chosen.size() == size) return naive_member(p, apply(), t);
    for (std::size_t i = start; i < facts.size(); ++i) {
      chosen.push_back(i);
      if (self(self, i + 1, size)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t size = 0; size <= budget; ++size) {
    chosen.clear();
    if (rec(rec, 0, size)) return static_cast<long>(size);
  }
  return -1;
}

}  // namespace mrepair::testing
