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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrepair/classify.hpp"
#include "mrepair/engine.hpp"
#include "mrepair/model.hpp"

namespace mrepair {

struct SatResult {
  bool satisfiable = false;
  std::optional<Instance> witness;
};

namespace detail {

// Union-find over the terms of one rule. Constants are nodes of their own,
// so two variables equated to the same constant end up in one class.
class TermClasses {
 public:
  std::size_t node(const Term& t) {
    const std::string key = (t.is_var() ? "V" : "C") + t.name;
    auto [it, inserted] = index_.try_emplace(key, parent_.size());
    if (inserted) {
      parent_.push_back(parent_.size());
      terms_.push_back(t);
    }
    return it->second;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

  const Term& term(std::size_t x) const { return terms_[x]; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_;
  std::vector<Term> terms_;
};

// Grounds a rule by the equality closure of its comparison atoms. Returns
// the class value of every variable, or nullopt when the equalities merge
// two distinct constants or an inequality relates a class to itself.
inline std::optional<Assignment> ground_by_equalities(const Rule& r) {
  TermClasses classes;
  for (const Term& t : r.head_args) classes.node(t);
  for (const Literal& lit : r.body)
    for (const Term& t : lit.args) classes.node(t);
  for (const Literal& lit : r.body)
    if (lit.kind == Literal::Kind::kEqual)
      classes.unite(classes.node(lit.lhs()), classes.node(lit.rhs()));

  std::map<std::size_t, std::string> value;
  for (std::size_t x = 0; x < classes.size(); ++x) {
    const Term& t = classes.term(x);
    if (!t.is_constant()) continue;
    auto [it, inserted] = value.try_emplace(classes.find(x), t.name);
    if (!inserted && it->second != t.name) return std::nullopt;
  }

  std::set<std::string> taken;
  for (const auto& [root, c] : value) taken.insert(c);
  std::size_t next = 0;
  Assignment g;
  // Nodes were created in first-occurrence order, head first, so fresh
  // constants are numbered the same way.
  for (std::size_t x = 0; x < classes.size(); ++x) {
    const Term& t = classes.term(x);
    if (!t.is_var()) continue;
    auto [it, inserted] = value.try_emplace(classes.find(x));
    if (inserted) {
      while (taken.count(fresh_constant(next))) ++next;
      it->second = fresh_constant(next++);
    }
    g[t.name] = it->second;
  }

  for (const Literal& lit : r.body)
    if (lit.kind == Literal::Kind::kNotEqual &&
        classes.find(classes.node(lit.lhs())) ==
            classes.find(classes.node(lit.rhs())))
      return std::nullopt;
  return g;
}

inline Fact ground_fact(const Literal& lit, const Assignment& g) {
  Fact f{lit.relation, {}};
  for (const Term& t : lit.args) f.args.push_back(t.is_var() ? g.at(t.name) : t.name);
  return f;
}

}  // namespace detail

/// Satisfiability of a single rule whose body mentions only extensional
/// relations and comparisons.
inline SatResult sat_cqneg(const Rule& r) {
  const std::optional<Assignment> g = detail::ground_by_equalities(r);
  if (!g) return {};
  FactSet positive;
  FactSet negative;
  for (const Literal& lit : r.body) {
    if (lit.is_positive()) positive.insert(detail::ground_fact(lit, *g));
    if (lit.is_negative()) negative.insert(detail::ground_fact(lit, *g));
  }
  for (const Fact& f : negative)
    if (positive.count(f)) return {};
  return {true, Instance(std::move(positive))};
}

inline SatResult sat_ucqneg(const Program& q) {
  if (!classify(q).is_ucq)
    throw Error(ErrorCode::kNotUcq, "satisfiability requires a UCQ program");
  for (const Rule& r : q.rules) {
    SatResult res = sat_cqneg(r);
    if (res.satisfiable) return res;
  }
  return {};
}

/// Evaluates `p` on every fact over adom(P) plus one fresh constant. By
/// monotonicity, `p` is satisfiable iff its answer is nonempty there.
inline SatResult sat_datalog_positive(const Program& p) {
  if (!classify(p).is_positive_datalog)
    throw Error(ErrorCode::kNotPositiveDatalog,
                "program uses negation or inequality");
  std::set<std::string> adom = constants_of(p);
  std::size_t next = 0;
  while (adom.count(fresh_constant(next))) ++next;
  adom.insert(fresh_constant(next));
  const std::vector<std::string> domain(adom.begin(), adom.end());
  const std::vector<Fact> facts = all_facts(p.edb, domain);
  Instance full(FactSet(facts.begin(), facts.end()));
  if (eval_answers(p, full).tuples.empty()) return {};
  return {true, std::move(full)};
}

/// Boolean query obtained by fixing the answer to `target`. For UCQ
/// programs the head arguments become equality atoms; otherwise a goal rule
/// over the answer relation is added.
inline Program weak_selection(const Program& q, const Tuple& target) {
  if (target.size() != q.arity())
    throw Error(ErrorCode::kArityMismatch, "tuple arity differs from the answer");
  Program out = q;
  if (classify(q).is_ucq) {
    for (Rule& r : out.rules) {
      std::vector<Literal> eqs;
      for (std::size_t i = 0; i < r.head_args.size(); ++i)
        eqs.push_back(Literal::equal(r.head_args[i], Term::constant(target[i])));
      r.body.insert(r.body.begin(), eqs.begin(), eqs.end());
      r.head_args.clear();
    }
    out.idb[out.answer] = 0;
    return out;
  }
  Rule goal{"_goal", {}, {}};
  Literal call = Literal::positive(q.answer, {});
  for (std::size_t i = 0; i < target.size(); ++i) {
    const Term v = Term::var("X" + std::to_string(i));
    call.args.push_back(v);
    goal.body.push_back(Literal::equal(v, Term::constant(target[i])));
  }
  goal.body.insert(goal.body.begin(), call);
  out.rules.push_back(goal);
  out.idb["_goal"] = 0;
  out.answer = "_goal";
  return out;
}

/// Whether any repair places `target` in the answer. The instance does not
/// matter: any satisfying database is reachable by some update.
inline bool ma_dec(const Program& q, const Instance& inst, const Tuple& target) {
  (void)inst;
  const QueryClass c = classify(q);
  if (c.is_ucq) return sat_ucqneg(weak_selection(q, target)).satisfiable;
  if (c.is_positive_datalog)
    return sat_datalog_positive(weak_selection(q, target)).satisfiable;
  throw Error(ErrorCode::kUnsupported,
              "repair existence is only decided for UCQ and positive datalog");
}

}  // namespace mrepair
