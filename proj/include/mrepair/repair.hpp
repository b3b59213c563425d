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

// Minimum-cardinality repair solvers.
//
// All solvers return the smallest repair and break ties by the canonical
// order on updates: insertions compared first, then deletions, each as a
// sorted fact sequence. Fresh constants are interchangeable, so searches
// only visit one representative per renaming of them and then pick the
// least renaming.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrepair/classify.hpp"
#include "mrepair/engine.hpp"
#include "mrepair/model.hpp"
#include "mrepair/sat.hpp"

namespace mrepair {

enum class RepairStatus : std::uint8_t { kFound, kNoRepair, kBudgetExhausted };

inline std::string_view to_string(RepairStatus s) {
  switch (s) {
    case RepairStatus::kFound: return "found";
    case RepairStatus::kNoRepair: return "no_repair";
    case RepairStatus::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

struct RepairResult {
  RepairStatus status = RepairStatus::kNoRepair;
  std::optional<Update> repair;
  std::optional<std::size_t> size;
  std::optional<Assignment> witness_assignment;

  static RepairResult found(Update u, std::optional<Assignment> witness = {}) {
    RepairResult r;
    r.status = RepairStatus::kFound;
    r.size = update_size(u);
    r.repair = std::move(u);
    r.witness_assignment = std::move(witness);
    return r;
  }
  static RepairResult no_repair() { return {}; }
  static RepairResult budget_exhausted() {
    RepairResult r;
    r.status = RepairStatus::kBudgetExhausted;
    return r;
  }

  bool is_found() const noexcept { return status == RepairStatus::kFound; }
};

struct SizeResult {
  RepairStatus status = RepairStatus::kNoRepair;
  std::optional<std::size_t> size;
};

namespace detail {

// The first `count` names of the form _c<i> that do not occur in `taken`,
// in canonical (string) order.
inline std::vector<std::string> fresh_avoiding(const std::set<std::string>& taken,
                                               std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; out.size() < count; ++i)
    if (!taken.count(fresh_constant(i))) out.push_back(fresh_constant(i));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool update_less(const Update& a, const Update& b) {
  const std::size_t sa = update_size(a);
  const std::size_t sb = update_size(b);
  if (sa != sb) return sa < sb;
  return canonical_less(a, b);
}

inline void check_target(const Program& q, const Tuple& target) {
  if (target.size() != q.arity())
    throw Error(ErrorCode::kArityMismatch,
                "tuple has " + std::to_string(target.size()) +
                    " components but the answer relation has arity " +
                    std::to_string(q.arity()));
}

inline std::size_t max_rule_vars(const Program& q) {
  std::size_t m = 0;
  for (const Rule& r : q.rules) m = std::max(m, r.vars().size());
  return m;
}

inline std::size_t max_edb_arity(const Program& q) {
  std::size_t m = 0;
  for (const auto& [rel, arity] : q.edb) m = std::max(m, arity);
  return m;
}

}  // namespace detail

/// Constants a repair search may use: ā, the active domain, and a block of
/// fresh constants.
struct SearchDomain {
  std::vector<std::string> constants;  // everything, canonical order
  std::vector<std::string> fresh;      // the fresh block, canonical order

  /// Fresh block of size m, the largest variable count of any rule.
  static SearchDomain for_ucq(const Program& q, const Instance& inst,
                              const Tuple& target) {
    return with_fresh(q, inst, target, detail::max_rule_vars(q));
  }

  /// Fresh block of size (max extensional arity) * budget.
  static SearchDomain for_datalog(const Program& p, const Instance& inst,
                                  const Tuple& target, std::size_t budget) {
    return with_fresh(p, inst, target, detail::max_edb_arity(p) * budget);
  }

  static SearchDomain with_fresh(const Program& q, const Instance& inst,
                                 const Tuple& target, std::size_t count) {
    SearchDomain d;
    const std::set<std::string> adom = active_domain(q, inst, target);
    d.fresh = detail::fresh_avoiding(adom, count);
    std::set<std::string> all = adom;
    all.insert(d.fresh.begin(), d.fresh.end());
    d.constants.assign(all.begin(), all.end());
    return d;
  }

  /// The constants that are not fresh.
  std::vector<std::string> base() const {
    std::vector<std::string> out;
    for (const std::string& c : constants)
      if (!std::binary_search(fresh.begin(), fresh.end(), c)) out.push_back(c);
    return out;
  }
};

/// The least update making the body of `r` true under the total assignment
/// `g`, or nullopt when a comparison fails or some fact would have to be
/// both present and absent.
inline std::optional<Update> repair_for_assignment(const Rule& r,
                                                   const Assignment& g,
                                                   const Instance& inst) {
  for (const std::string& v : r.vars())
    if (!g.count(v))
      throw Error(ErrorCode::kPartialAssignment,
                  "assignment does not cover variable '" + v + "'");
  auto value = [&](const Term& t) -> const std::string& {
    return t.is_var() ? g.at(t.name) : t.name;
  };
  FactSet positive;
  FactSet negative;
  for (const Literal& lit : r.body) {
    if (lit.is_comparison()) {
      const bool equal = value(lit.lhs()) == value(lit.rhs());
      if (equal != (lit.kind == Literal::Kind::kEqual)) return std::nullopt;
      continue;
    }
    Fact f{lit.relation, {}};
    for (const Term& t : lit.args) f.args.push_back(value(t));
    (lit.is_positive() ? positive : negative).insert(std::move(f));
  }
  Update u;
  for (const Fact& f : positive) {
    if (negative.count(f)) return std::nullopt;
    if (!inst.contains(f)) u.ins.insert(f);
  }
  for (const Fact& f : negative)
    if (inst.contains(f)) u.del.insert(f);
  return u;
}

namespace detail {

struct Candidate {
  Update update;
  Assignment witness;
};

inline bool candidate_less(const Candidate& a, const Candidate& b) {
  return update_less(a.update, b.update);
}

// Exhaustive branch-and-bound over assignments of one rule that send the
// head to the target.
class RuleSearch {
 public:
  RuleSearch(const Rule& r, const Instance& inst, const Tuple& target,
             const SearchDomain& domain)
      : rule_(r), inst_(inst), base_(domain.base()), fresh_(domain.fresh) {
    const std::vector<std::string> vars = r.vars();
    for (const std::string& v : vars) {
      slot_[v] = names_.size();
      names_.push_back(v);
    }
    values_.assign(names_.size(), nullptr);
    feasible_ = bind_head(target);
    if (!feasible_) return;

    // Unbound variables in order of first occurrence in the body.
    std::vector<char> queued(names_.size(), 0);
    for (const Literal& lit : r.body)
      for (const Term& t : lit.args)
        if (t.is_var()) {
          const std::size_t s = slot_.at(t.name);
          if (!values_[s] && !queued[s]) {
            queued[s] = 1;
            order_.push_back(s);
          }
        }

    // A literal is checked at the level where its last variable is bound.
    std::vector<std::size_t> level_of(names_.size(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) level_of[order_[i]] = i + 1;
    at_level_.assign(order_.size() + 1, {});
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      std::size_t level = 0;
      for (const Term& t : r.body[i].args)
        if (t.is_var()) level = std::max(level, level_of[slot_.at(t.name)]);
      at_level_[level].push_back(i);
    }
  }

  std::optional<Candidate> run() {
    if (!feasible_) return std::nullopt;
    std::vector<Undo> undo;
    if (apply_level(0, undo)) dfs(0);
    return best_;
  }

 private:
  struct Undo {
    bool positive;
    Fact fact;
  };

  bool bind_head(const Tuple& target) {
    head_values_ = target;
    for (std::size_t i = 0; i < rule_.head_args.size(); ++i) {
      const Term& t = rule_.head_args[i];
      if (t.is_constant()) {
        if (t.name != target[i]) return false;
        continue;
      }
      const std::string*& slot = values_[slot_.at(t.name)];
      if (slot && *slot != target[i]) return false;
      slot = &head_values_[i];
    }
    return true;
  }

  const std::string& value(const Term& t) const {
    return t.is_var() ? *values_[slot_.at(t.name)] : t.name;
  }

  // Applies the literals that become ground at `level`. On conflict the
  // partial effects stay in `undo` for the caller to roll back.
  bool apply_level(std::size_t level, std::vector<Undo>& undo) {
    for (std::size_t i : at_level_[level]) {
      const Literal& lit = rule_.body[i];
      if (lit.is_comparison()) {
        if ((value(lit.lhs()) == value(lit.rhs())) !=
            (lit.kind == Literal::Kind::kEqual))
          return false;
        continue;
      }
      Fact f{lit.relation, {}};
      for (const Term& t : lit.args) f.args.push_back(value(t));
      const bool positive = lit.is_positive();
      auto& own = positive ? pos_ : neg_;
      const auto& other = positive ? neg_ : pos_;
      if (other.count(f)) return false;
      if (own[f]++ == 0 && inst_.contains(f) != positive) ++cost_;
      undo.push_back({positive, std::move(f)});
    }
    return true;
  }

  void rollback(std::vector<Undo>& undo) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      auto& own = it->positive ? pos_ : neg_;
      auto found = own.find(it->fact);
      if (--found->second == 0) {
        if (inst_.contains(it->fact) != it->positive) --cost_;
        own.erase(found);
      }
    }
    undo.clear();
  }

  bool bounded_out() const { return best_ && cost_ > update_size(best_->update); }

  void dfs(std::size_t depth) {
    if (bounded_out()) return;
    if (depth == order_.size()) {
      leaf();
      return;
    }
    const std::size_t slot = order_[depth];
    std::vector<Undo> undo;
    auto attempt = [&](const std::string& c) {
      values_[slot] = &c;
      if (apply_level(depth + 1, undo)) dfs(depth + 1);
      rollback(undo);
    };
    for (const std::string& c : base_) attempt(c);
    for (std::size_t i = 0; i < fresh_used_ && i < fresh_.size(); ++i) attempt(fresh_[i]);
    if (fresh_used_ < fresh_.size()) {
      ++fresh_used_;
      attempt(fresh_[fresh_used_ - 1]);
      --fresh_used_;
    }
    values_[slot] = nullptr;
  }

  void leaf() {
    Candidate c;
    for (const auto& [f, n] : pos_)
      if (!inst_.contains(f)) c.update.ins.insert(f);
    for (const auto& [f, n] : neg_)
      if (inst_.contains(f)) c.update.del.insert(f);
    for (std::size_t s = 0; s < names_.size(); ++s) c.witness[names_[s]] = *values_[s];

    // Least renaming of the fresh constants in use.
    std::vector<std::size_t> perm(fresh_used_);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Candidate> least;
    do {
      Renaming rho;
      for (std::size_t i = 0; i < perm.size(); ++i) rho[fresh_[i]] = fresh_[perm[i]];
      Candidate renamed{rename(c.update, rho), {}};
      for (const auto& [v, val] : c.witness) renamed.witness[v] = detail::image(rho, val);
      if (!least || candidate_less(renamed, *least)) least = std::move(renamed);
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!best_ || candidate_less(*least, *best_)) best_ = std::move(least);
  }

  const Rule& rule_;
  const Instance& inst_;
  std::vector<std::string> base_;
  std::vector<std::string> fresh_;
  std::map<std::string, std::size_t> slot_;
  std::vector<std::string> names_;
  std::vector<const std::string*> values_;
  Tuple head_values_;
  bool feasible_ = true;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> at_level_;

  std::map<Fact, std::size_t> pos_;
  std::map<Fact, std::size_t> neg_;
  std::size_t cost_ = 0;
  std::size_t fresh_used_ = 0;
  std::optional<Candidate> best_;
};

inline RepairResult to_result(const std::optional<Candidate>& c) {
  if (!c) return RepairResult::no_repair();
  return RepairResult::found(c->update, c->witness);
}

inline std::optional<Candidate> from_result(const RepairResult& r) {
  if (!r.is_found()) return std::nullopt;
  return Candidate{*r.repair, r.witness_assignment.value_or(Assignment{})};
}

}  // namespace detail

/// Rule with no bound variables: the head fixes the only assignment.
inline RepairResult ma_min_projection_free(const Rule& r, const Instance& inst,
                                           const Tuple& target) {
  if (!rule_projection_free(r))
    throw Error(ErrorCode::kNotProjectionFree,
                "rule has variables that do not occur in its head");
  if (target.size() != r.head_args.size())
    throw Error(ErrorCode::kArityMismatch, "tuple arity differs from the head");
  Assignment g;
  for (std::size_t i = 0; i < r.head_args.size(); ++i) {
    const Term& t = r.head_args[i];
    if (t.is_constant()) {
      if (t.name != target[i]) return RepairResult::no_repair();
      continue;
    }
    auto [it, inserted] = g.try_emplace(t.name, target[i]);
    if (!inserted && it->second != target[i]) return RepairResult::no_repair();
  }
  std::optional<Update> u = repair_for_assignment(r, g, inst);
  if (!u) return RepairResult::no_repair();
  return RepairResult::found(std::move(*u), std::move(g));
}

/// Rule with exactly one relational literal: a repair needs at most one
/// insertion or one deletion.
inline RepairResult ma_min_join_free(const Rule& r, const Instance& inst,
                                     const Tuple& target) {
  if (!rule_join_free(r))
    throw Error(ErrorCode::kNotJoinFree,
                "rule does not have exactly one relational literal");
  if (target.size() != r.head_args.size())
    throw Error(ErrorCode::kArityMismatch, "tuple arity differs from the head");

  detail::TermClasses classes;
  for (const Term& t : r.head_args) classes.node(t);
  for (const Literal& lit : r.body)
    for (const Term& t : lit.args) classes.node(t);
  for (std::size_t i = 0; i < target.size(); ++i)
    classes.unite(classes.node(r.head_args[i]), classes.node(Term::constant(target[i])));
  for (const Literal& lit : r.body)
    if (lit.kind == Literal::Kind::kEqual)
      classes.unite(classes.node(lit.lhs()), classes.node(lit.rhs()));

  // Classes holding a constant are determined; two constants in one class
  // make the rule unsatisfiable under this target.
  std::map<std::size_t, std::string> fixed;
  for (std::size_t x = 0; x < classes.size(); ++x) {
    const Term& t = classes.term(x);
    if (!t.is_constant()) continue;
    auto [it, inserted] = fixed.try_emplace(classes.find(x), t.name);
    if (!inserted && it->second != t.name) return RepairResult::no_repair();
  }
  for (const Literal& lit : r.body)
    if (lit.kind == Literal::Kind::kNotEqual &&
        classes.find(classes.node(lit.lhs())) == classes.find(classes.node(lit.rhs())))
      return RepairResult::no_repair();

  const Literal& beta = *std::find_if(r.body.begin(), r.body.end(),
                                      [](const Literal& l) { return l.is_relational(); });
  std::vector<std::size_t> beta_class;
  for (const Term& t : beta.args) beta_class.push_back(classes.find(classes.node(t)));

  std::set<std::string> taken = constants_of(inst);
  taken.insert(target.begin(), target.end());
  for (std::size_t x = 0; x < classes.size(); ++x)
    if (classes.term(x).is_constant()) taken.insert(classes.term(x).name);

  // Completes `values` with distinct fresh constants for the remaining
  // classes, in order of first occurrence, and reads off the witness.
  auto complete = [&](std::map<std::size_t, std::string> values) {
    std::size_t next = 0;
    Assignment g;
    for (std::size_t x = 0; x < classes.size(); ++x) {
      const Term& t = classes.term(x);
      if (!t.is_var()) continue;
      auto [it, inserted] = values.try_emplace(classes.find(x));
      if (inserted) {
        while (taken.count(fresh_constant(next))) ++next;
        it->second = fresh_constant(next++);
      }
      g[t.name] = it->second;
    }
    return std::make_pair(values, g);
  };
  auto ground = [&](const std::map<std::size_t, std::string>& values) {
    Fact f{beta.relation, {}};
    for (std::size_t c : beta_class) f.args.push_back(values.at(c));
    return f;
  };

  if (beta.is_positive()) {
    // Size 0 if an existing fact fits the determined positions and keeps
    // every inequality true.
    const auto [first, last] = inst.range(beta.relation);
    for (auto it = first; it != last; ++it) {
      if (it->args.size() != beta.args.size()) continue;
      std::map<std::size_t, std::string> values = fixed;
      bool ok = true;
      for (std::size_t j = 0; j < beta_class.size() && ok; ++j) {
        auto [v, inserted] = values.try_emplace(beta_class[j], it->args[j]);
        ok = v->second == it->args[j];
      }
      if (!ok) continue;
      auto [full, g] = complete(values);
      for (const Literal& lit : r.body)
        if (lit.kind == Literal::Kind::kNotEqual &&
            full.at(classes.find(classes.node(lit.lhs()))) ==
                full.at(classes.find(classes.node(lit.rhs()))))
          ok = false;
      if (ok) return RepairResult::found({}, g);
    }
    auto [full, g] = complete(fixed);
    Update u;
    u.ins.insert(ground(full));
    return RepairResult::found(std::move(u), g);
  }

  auto [full, g] = complete(fixed);
  const Fact f = ground(full);
  if (!inst.contains(f)) return RepairResult::found({}, g);
  Update u;
  u.del.insert(f);
  return RepairResult::found(std::move(u), g);
}

struct UcqOptions {
  /// Route projection-free and join-free rules to their direct solvers.
  bool dispatch = true;
};

/// Exact minimum repair for a union of conjunctive queries with negated
/// atoms and comparisons.
inline RepairResult ma_min_ucqneg(const Program& q, const Instance& inst,
                                  const Tuple& target,
                                  const UcqOptions& options = {}) {
  if (!classify(q).is_ucq)
    throw Error(ErrorCode::kNotUcq, "program is not a union of conjunctive queries");
  detail::check_target(q, target);
  const SearchDomain domain = SearchDomain::for_ucq(q, inst, target);
  std::optional<detail::Candidate> best;
  for (const Rule& r : q.rules) {
    std::optional<detail::Candidate> c;
    if (options.dispatch && rule_projection_free(r))
      c = detail::from_result(ma_min_projection_free(r, inst, target));
    else if (options.dispatch && rule_join_free(r))
      c = detail::from_result(ma_min_join_free(r, inst, target));
    else
      c = detail::RuleSearch(r, inst, target, domain).run();
    if (c && (!best || detail::candidate_less(*c, *best))) best = std::move(c);
  }
  return detail::to_result(best);
}

namespace detail {

// Extensional relations the answer depends on, with the polarities in which
// they occur. A minimum repair never inserts into a relation used only
// negatively nor deletes from one used only positively.
struct Polarity {
  bool positive = false;
  bool negative = false;
};

inline std::map<std::string, Polarity> relevant_edb(const Program& p) {
  std::set<std::string> reached{p.answer};
  std::vector<std::string> stack{p.answer};
  std::map<std::string, Polarity> out;
  while (!stack.empty()) {
    const std::string rel = stack.back();
    stack.pop_back();
    for (const Rule& r : p.rules) {
      if (r.head != rel) continue;
      for (const Literal& lit : r.body) {
        if (!lit.is_relational()) continue;
        if (p.is_idb(lit.relation)) {
          if (reached.insert(lit.relation).second) stack.push_back(lit.relation);
          continue;
        }
        Polarity& pol = out[lit.relation];
        (lit.is_positive() ? pol.positive : pol.negative) = true;
      }
    }
  }
  return out;
}

// Facts worth toggling over `domain`, in canonical order.
inline std::vector<Fact> toggle_candidates(const Program& p, const Instance& inst,
                                           const std::vector<std::string>& domain) {
  const std::map<std::string, Polarity> relevant = relevant_edb(p);
  std::map<std::string, std::size_t> schema;
  for (const auto& [rel, pol] : relevant) schema[rel] = p.edb.at(rel);
  std::vector<Fact> out;
  for (Fact& f : all_facts(schema, domain)) {
    const Polarity& pol = relevant.at(f.relation);
    if (inst.contains(f) ? pol.negative : pol.positive) out.push_back(std::move(f));
  }
  return out;
}

// Visits every `size`-subset of `facts` in lexicographic index order with
// the subset applied as toggles to `ev`. Stops when `visit` returns true.
// Returns false if `limit` (when nonzero) leaf visits were exceeded.
template <class Visit>
bool for_each_toggle_set(Evaluator& ev, const Instance& inst,
                         const std::vector<Fact>& facts, std::size_t size,
                         std::size_t limit, std::size_t& work, Visit&& visit) {
  std::vector<std::size_t> chosen;
  bool stopped = false;
  bool over = false;
  auto toggle = [&](const Fact& f, bool on) {
    if (inst.contains(f) == on)
      ev.erase(f);
    else
      ev.insert(f);
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (chosen.size() == size) {
      if (limit && ++work > limit) {
        over = true;
        return;
      }
      stopped = visit(chosen);
      return;
    }
    for (std::size_t i = start; i + (size - chosen.size()) <= facts.size(); ++i) {
      toggle(facts[i], true);
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
      toggle(facts[i], false);
      if (stopped || over) return;
    }
  };
  rec(rec, 0);
  return !over;
}

inline Update update_from(const Instance& inst, const std::vector<Fact>& facts,
                          const std::vector<std::size_t>& chosen) {
  Update u;
  for (std::size_t i : chosen)
    (inst.contains(facts[i]) ? u.del : u.ins).insert(facts[i]);
  return u;
}

}  // namespace detail

struct SearchOptions {
  /// Upper bound on repair size for searches that cannot prove absence.
  std::size_t budget = 8;
  /// Maximum number of candidate updates to evaluate; 0 means no limit.
  /// Exceeding it yields budget_exhausted.
  std::size_t work_limit = 0;
};

/// Insertion-only search for positive datalog, by increasing size.
inline RepairResult ma_min_datalog_positive(const Program& p, const Instance& inst,
                                            const Tuple& target,
                                            const SearchOptions& options = {}) {
  if (!classify(p).is_positive_datalog)
    throw Error(ErrorCode::kNotPositiveDatalog, "program uses negation or inequality");
  detail::check_target(p, target);
  Evaluator ev(p);
  ev.load(inst);
  if (ev.member(target)) return RepairResult::found({});

  // Completeness check: insert every fact over the domain plus one fresh
  // constant. Monotonicity makes failure here final.
  std::set<std::string> adom = active_domain(p, inst, target);
  const std::vector<std::string> domain =
      adom.empty() ? detail::fresh_avoiding(adom, 1)
                   : std::vector<std::string>(adom.begin(), adom.end());
  {
    std::set<std::string> wide = adom;
    for (const std::string& c : detail::fresh_avoiding(adom, 1)) wide.insert(c);
    for (const Fact& f : all_facts(p.edb, {wide.begin(), wide.end()})) ev.insert(f);
    const bool reachable = ev.member(target);
    ev.load(inst);
    if (!reachable) return RepairResult::no_repair();
  }

  const std::vector<Fact> facts = detail::toggle_candidates(p, inst, domain);
  std::size_t work = 0;
  for (std::size_t size = 1; size <= facts.size(); ++size) {
    std::optional<Update> hit;
    const bool within = detail::for_each_toggle_set(
        ev, inst, facts, size, options.work_limit, work,
        [&](const std::vector<std::size_t>& chosen) {
          if (!ev.member(target)) return false;
          hit = detail::update_from(inst, facts, chosen);
          return true;
        });
    if (hit) return RepairResult::found(std::move(*hit));
    if (!within) return RepairResult::budget_exhausted();
  }
  return RepairResult::no_repair();
}

/// Budgeted search for semi-positive datalog. Never reports no_repair: a
/// failed search only shows there is no repair within the budget.
inline RepairResult ma_min_spdatalog(const Program& p, const Instance& inst,
                                     const Tuple& target,
                                     const SearchOptions& options = {}) {
  if (!classify(p).is_semipositive_datalog)
    throw Error(ErrorCode::kNotSemipositive,
                "program negates an intensional relation");
  detail::check_target(p, target);
  Evaluator ev(p);
  ev.load(inst);
  if (ev.member(target)) return RepairResult::found({});

  const std::size_t arity = detail::max_edb_arity(p);
  std::size_t work = 0;
  for (std::size_t size = 1; size <= options.budget; ++size) {
    // A repair of this size mentions at most arity * size fresh constants,
    // and by symmetry they can be taken to be the first ones.
    const SearchDomain domain = SearchDomain::with_fresh(p, inst, target, arity * size);
    const std::vector<Fact> facts = detail::toggle_candidates(p, inst, domain.constants);
    std::optional<Update> best;
    const bool within = detail::for_each_toggle_set(
        ev, inst, facts, size, options.work_limit, work,
        [&](const std::vector<std::size_t>& chosen) {
          // Skip sets whose fresh constants are not a prefix of the block;
          // a renaming of them is visited instead.
          std::vector<char> used(domain.fresh.size(), 0);
          for (std::size_t i : chosen)
            for (const std::string& c : facts[i].args) {
              auto it = std::lower_bound(domain.fresh.begin(), domain.fresh.end(), c);
              if (it != domain.fresh.end() && *it == c)
                used[static_cast<std::size_t>(it - domain.fresh.begin())] = 1;
            }
          if (std::is_sorted(used.begin(), used.end(), std::greater<>())) {
            if (ev.member(target)) {
              Update u = detail::update_from(inst, facts, chosen);
              if (!best || canonical_less(u, *best)) best = std::move(u);
            }
          }
          return false;
        });
    if (best) return RepairResult::found(std::move(*best));
    if (!within) break;
  }
  return RepairResult::budget_exhausted();
}

/// Reference solver: tries every update over Facts(domain) by increasing
/// size and returns the first that works. Facts that cannot occur in a
/// minimum repair are skipped; this never changes the answer.
inline RepairResult oracle_ma_min(const Program& q, const Instance& inst,
                                  const Tuple& target, const SearchDomain& domain,
                                  std::size_t budget) {
  detail::check_target(q, target);
  Evaluator ev(q);
  ev.load(inst);
  if (ev.member(target)) return RepairResult::found({});
  const std::vector<Fact> facts = detail::toggle_candidates(q, inst, domain.constants);
  std::size_t work = 0;
  for (std::size_t size = 1; size <= budget && size <= facts.size(); ++size) {
    std::optional<Update> hit;
    detail::for_each_toggle_set(ev, inst, facts, size, 0, work,
                                [&](const std::vector<std::size_t>& chosen) {
                                  if (!ev.member(target)) return false;
                                  hit = detail::update_from(inst, facts, chosen);
                                  return true;
                                });
    if (hit) return RepairResult::found(std::move(*hit));
  }
  return RepairResult::budget_exhausted();
}

/// Routes to the exact solver for the program's fragment.
inline RepairResult ma_min(const Program& q, const Instance& inst, const Tuple& target,
                           const SearchOptions& options = {}) {
  const QueryClass c = classify(q);
  if (c.is_ucq) return ma_min_ucqneg(q, inst, target);
  if (c.is_positive_datalog) return ma_min_datalog_positive(q, inst, target, options);
  return ma_min_spdatalog(q, inst, target, options);
}

inline SizeResult ma_size(const Program& q, const Instance& inst, const Tuple& target,
                          const SearchOptions& options = {}) {
  const RepairResult r = ma_min(q, inst, target, options);
  return {r.status, r.size};
}

/// Whether a repair of size at most k exists. For semi-positive datalog the
/// search budget is k itself, which makes the answer exact.
inline bool ma_bound(const Program& q, const Instance& inst, const Tuple& target,
                     std::size_t k, const SearchOptions& options = {}) {
  SearchOptions bounded = options;
  const QueryClass c = classify(q);
  if (!c.is_ucq && !c.is_positive_datalog) bounded.budget = k;
  const RepairResult r = ma_min(q, inst, target, bounded);
  return r.is_found() && *r.size <= k;
}

}  // namespace mrepair
