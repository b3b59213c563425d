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

// Query evaluation. Constants are interned to integers and rules are
// compiled once per Evaluator, so repeated membership checks against a
// slowly changing instance (the repair oracle's access pattern) stay cheap.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrepair/classify.hpp"
#include "mrepair/model.hpp"

namespace mrepair {

struct AnswerSet {
  std::string relation;
  std::set<Tuple> tuples;

  bool contains(const Tuple& t) const { return tuples.count(t) != 0; }
  bool operator==(const AnswerSet&) const = default;
};

namespace detail {

class SymbolTable {
 public:
  int intern(const std::string& s) {
    auto [it, inserted] = ids_.try_emplace(s, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(s);
    return it->second;
  }
  int find(const std::string& s) const {
    auto it = ids_.find(s);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::string& name(int id) const { return names_[static_cast<std::size_t>(id)]; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
};

using IdTuple = std::vector<int>;
using TupleSet = std::set<IdTuple>;

struct CTerm {
  bool is_var = false;
  int id = -1;  // variable slot or constant id
};

struct CLiteral {
  Literal::Kind kind = Literal::Kind::kPositive;
  int rel = -1;
  bool idb = false;
  std::vector<CTerm> args;
};

struct CRule {
  int head_rel = -1;
  std::vector<CTerm> head;
  std::vector<CLiteral> body;
  std::size_t num_vars = 0;
  std::vector<std::size_t> idb_positions;  // positive intensional literals
};

}  // namespace detail

/// Evaluates one program against a loaded instance. Not safe for concurrent
/// use; create one Evaluator per thread.
class Evaluator {
 public:
  explicit Evaluator(const Program& p) : program_(p) {
    for (const Rule& r : p.rules)
      for (const Literal& lit : r.body)
        if (lit.is_negative() && p.is_idb(lit.relation))
          throw Error(ErrorCode::kNotDatalog,
                      "negated intensional relation '" + lit.relation + "'");
    ucq_ = classify(p).is_ucq;
    for (const Rule& r : p.rules) rules_.push_back(compile(r));
    for (const std::string& c : constants_of(p))
      program_constants_.push_back(constants_.intern(c));
    answer_rel_ = relation_id(p.answer);
  }

  const Program& program() const noexcept { return program_; }

  /// Replaces the current database.
  void load(const Instance& inst) {
    edb_.clear();
    instance_constants_.clear();
    for (const Fact& f : inst) insert(f);
    dirty_ = true;
  }

  /// Adds a fact to the loaded database; false if it was already present.
  bool insert(const Fact& f) {
    const int rel = relation_id(f.relation);
    detail::IdTuple t = intern_args(f.args);
    if (!edb_[rel].insert(t).second) return false;
    for (int c : t) ++instance_constants_[c];
    dirty_ = true;
    return true;
  }

  /// Removes a fact from the loaded database; false if it was absent.
  bool erase(const Fact& f) {
    auto rel_it = relations_.find(f.relation);
    if (rel_it == relations_.end()) return false;
    auto it = edb_.find(rel_it->second);
    if (it == edb_.end()) return false;
    detail::IdTuple t;
    for (const std::string& c : f.args) {
      const int id = constants_.find(c);
      if (id < 0) return false;
      t.push_back(id);
    }
    if (it->second.erase(t) == 0) return false;
    for (int c : t)
      if (--instance_constants_[c] == 0) instance_constants_.erase(c);
    dirty_ = true;
    return true;
  }

  /// Whether `target` is in the answer relation over the loaded database.
  bool member(const Tuple& target) {
    check_arity(target);
    const detail::IdTuple want = intern_args(target);
    if (!ucq_) {
      ensure_fixpoint();
      auto it = idb_.find(answer_rel_);
      return it != idb_.end() && it->second.count(want) != 0;
    }
    for (const detail::CRule& r : rules_) {
      std::vector<int> binding(r.num_vars, -1);
      if (!bind_head(r, want, binding)) continue;
      std::vector<char> done(r.body.size(), 0);
      auto source = [&](std::size_t i) -> const detail::TupleSet& {
        return edb_relation(r.body[i].rel);
      };
      if (search(r, binding, done, source, [](const std::vector<int>&) { return true; }))
        return true;
    }
    return false;
  }

  /// The full answer relation over the loaded database.
  AnswerSet answers() {
    if (!ucq_) return export_relation(answer_rel_, fixpoint_ids());
    detail::TupleSet out;
    for (const detail::CRule& r : rules_) {
      std::vector<int> binding(r.num_vars, -1);
      std::vector<char> done(r.body.size(), 0);
      auto source = [&](std::size_t i) -> const detail::TupleSet& {
        return edb_relation(r.body[i].rel);
      };
      search(r, binding, done, source, [&](const std::vector<int>& b) {
        out.insert(head_tuple(r, b));
        return false;
      });
    }
    return export_relation(answer_rel_, {{answer_rel_, out}});
  }

  /// Least fixpoint of every intensional relation, by semi-naive iteration.
  std::map<std::string, AnswerSet> fixpoint() {
    const auto& ids = fixpoint_ids();
    std::map<std::string, AnswerSet> out;
    for (const auto& [rel, arity] : program_.idb)
      out.emplace(rel, export_relation(relation_id(rel), ids));
    return out;
  }

 private:
  int relation_id(const std::string& name) {
    auto [it, inserted] =
        relations_.try_emplace(name, static_cast<int>(relations_.size()));
    return it->second;
  }

  detail::IdTuple intern_args(const std::vector<std::string>& args) {
    detail::IdTuple t;
    t.reserve(args.size());
    for (const std::string& c : args) t.push_back(constants_.intern(c));
    return t;
  }

  void check_arity(const Tuple& target) const {
    if (target.size() != program_.arity())
      throw Error(ErrorCode::kArityMismatch,
                  "tuple has " + std::to_string(target.size()) +
                      " components but the answer relation has arity " +
                      std::to_string(program_.arity()));
  }

  detail::CRule compile(const Rule& r) {
    detail::CRule out;
    std::map<std::string, int> slots;
    auto term = [&](const Term& t) {
      if (t.is_constant()) return detail::CTerm{false, constants_.intern(t.name)};
      auto [it, inserted] = slots.try_emplace(t.name, static_cast<int>(slots.size()));
      return detail::CTerm{true, it->second};
    };
    out.head_rel = relation_id(r.head);
    for (const Term& t : r.head_args) out.head.push_back(term(t));
    for (const Literal& lit : r.body) {
      detail::CLiteral c;
      c.kind = lit.kind;
      if (lit.is_relational()) {
        c.rel = relation_id(lit.relation);
        c.idb = program_.is_idb(lit.relation);
        if (c.idb && lit.is_positive()) out.idb_positions.push_back(out.body.size());
      }
      for (const Term& t : lit.args) c.args.push_back(term(t));
      out.body.push_back(std::move(c));
    }
    out.num_vars = slots.size();
    return out;
  }

  const detail::TupleSet& edb_relation(int rel) const {
    static const detail::TupleSet kEmpty;
    auto it = edb_.find(rel);
    return it == edb_.end() ? kEmpty : it->second;
  }

  static int value(const detail::CTerm& t, const std::vector<int>& b) {
    return t.is_var ? b[static_cast<std::size_t>(t.id)] : t.id;
  }

  static bool bind_head(const detail::CRule& r, const detail::IdTuple& want,
                        std::vector<int>& b) {
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      const detail::CTerm& t = r.head[i];
      if (!t.is_var) {
        if (t.id != want[i]) return false;
        continue;
      }
      int& slot = b[static_cast<std::size_t>(t.id)];
      if (slot >= 0 && slot != want[i]) return false;
      slot = want[i];
    }
    return true;
  }

  static detail::IdTuple head_tuple(const detail::CRule& r,
                                    const std::vector<int>& b) {
    detail::IdTuple t;
    t.reserve(r.head.size());
    for (const detail::CTerm& term : r.head) t.push_back(value(term, b));
    return t;
  }

  // Candidate values for variables that no positive literal binds (only
  // reachable for unsafe rules): the active domain, the current bindings,
  // and enough unused constants to give every variable its own.
  std::vector<int> open_domain(const detail::CRule& r, const std::vector<int>& b) {
    std::set<int> dom(program_constants_.begin(), program_constants_.end());
    for (const auto& [c, count] : instance_constants_) dom.insert(c);
    for (int v : b)
      if (v >= 0) dom.insert(v);
    std::size_t added = 0;
    for (std::size_t i = 0; added < r.num_vars; ++i) {
      const int id = constants_.intern(fresh_constant(i));
      if (dom.insert(id).second) ++added;
    }
    return {dom.begin(), dom.end()};
  }

  // Backtracking search for assignments satisfying the body of `r` that
  // extend `b`. `source(i)` gives the tuples a positive literal i ranges
  // over. Returns true as soon as `emit` does.
  template <class SourceFn, class Emit>
  bool search(const detail::CRule& r, std::vector<int>& b,
              std::vector<char>& done, SourceFn&& source, Emit&& emit) {
    std::vector<std::size_t> marked;
    std::vector<std::size_t> bound;
    auto undo = [&] {
      for (std::size_t i : marked) done[i] = 0;
      for (std::size_t v : bound) b[v] = -1;
    };

    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (done[i]) continue;
        const detail::CLiteral& lit = r.body[i];
        if (lit.kind == Literal::Kind::kEqual ||
            lit.kind == Literal::Kind::kNotEqual) {
          const int lhs = value(lit.args[0], b);
          const int rhs = value(lit.args[1], b);
          if (lhs >= 0 && rhs >= 0) {
            if ((lhs == rhs) != (lit.kind == Literal::Kind::kEqual)) {
              undo();
              return false;
            }
          } else if (lit.kind == Literal::Kind::kEqual && (lhs >= 0 || rhs >= 0)) {
            const detail::CTerm& open = lhs >= 0 ? lit.args[1] : lit.args[0];
            const auto slot = static_cast<std::size_t>(open.id);
            b[slot] = lhs >= 0 ? lhs : rhs;
            bound.push_back(slot);
          } else {
            continue;
          }
          done[i] = 1;
          marked.push_back(i);
          progress = true;
          continue;
        }
        detail::IdTuple t;
        t.reserve(lit.args.size());
        for (const detail::CTerm& a : lit.args) {
          const int v = value(a, b);
          if (v < 0) break;
          t.push_back(v);
        }
        if (t.size() != lit.args.size()) continue;
        const bool present = lit.kind == Literal::Kind::kPositive
                                 ? source(i).count(t) != 0
                                 : edb_relation(lit.rel).count(t) != 0;
        if (present != (lit.kind == Literal::Kind::kPositive)) {
          undo();
          return false;
        }
        done[i] = 1;
        marked.push_back(i);
        progress = true;
      }
    }

    // Most-bound positive literal next.
    std::size_t pick = r.body.size();
    std::size_t best_bound = 0;
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      const detail::CLiteral& lit = r.body[i];
      if (done[i] || lit.kind != Literal::Kind::kPositive) continue;
      std::size_t n = 0;
      for (const detail::CTerm& a : lit.args)
        if (value(a, b) >= 0) ++n;
      if (pick == r.body.size() || n > best_bound) {
        pick = i;
        best_bound = n;
      }
    }

    bool stop = false;
    if (pick < r.body.size()) {
      const detail::CLiteral& lit = r.body[pick];
      const detail::TupleSet& rel = source(pick);
      auto first = rel.begin();
      auto last = rel.end();
      if (!lit.args.empty() && value(lit.args[0], b) >= 0) {
        const int head = value(lit.args[0], b);
        first = rel.lower_bound(detail::IdTuple{head});
        last = rel.lower_bound(detail::IdTuple{head + 1});
      }
      done[pick] = 1;
      std::vector<std::size_t> local;
      for (auto it = first; it != last && !stop; ++it) {
        const detail::IdTuple& t = *it;
        if (t.size() != lit.args.size()) continue;
        bool ok = true;
        for (std::size_t j = 0; j < t.size() && ok; ++j) {
          const detail::CTerm& a = lit.args[j];
          const int v = value(a, b);
          if (v >= 0) {
            ok = v == t[j];
          } else {
            b[static_cast<std::size_t>(a.id)] = t[j];
            local.push_back(static_cast<std::size_t>(a.id));
          }
        }
        if (ok) stop = search(r, b, done, source, emit);
        for (std::size_t v : local) b[v] = -1;
        local.clear();
      }
      done[pick] = 0;
      undo();
      return stop;
    }

    // No positive literal left: either finished, or an unsafe variable
    // remains and ranges over the open domain.
    std::size_t open_var = r.num_vars;
    auto consider = [&](const detail::CTerm& t) {
      if (open_var == r.num_vars && t.is_var && b[static_cast<std::size_t>(t.id)] < 0)
        open_var = static_cast<std::size_t>(t.id);
    };
    for (const detail::CTerm& t : r.head) consider(t);
    for (std::size_t i = 0; i < r.body.size(); ++i)
      if (!done[i])
        for (const detail::CTerm& t : r.body[i].args) consider(t);

    if (open_var == r.num_vars) {
      stop = emit(b);
    } else {
      for (int c : open_domain(r, b)) {
        b[open_var] = c;
        if ((stop = search(r, b, done, source, emit))) break;
      }
      b[open_var] = -1;
    }
    undo();
    return stop;
  }

  void ensure_fixpoint() {
    if (!dirty_) return;
    idb_.clear();
    std::map<int, detail::TupleSet> delta;

    auto run = [&](const detail::CRule& r, std::size_t delta_pos,
                   std::map<int, detail::TupleSet>& fresh) {
      std::vector<int> binding(r.num_vars, -1);
      std::vector<char> done(r.body.size(), 0);
      auto source = [&](std::size_t i) -> const detail::TupleSet& {
        const detail::CLiteral& lit = r.body[i];
        if (!lit.idb) return edb_relation(lit.rel);
        static const detail::TupleSet kEmpty;
        const auto& store = i == delta_pos ? delta : idb_;
        auto it = store.find(lit.rel);
        return it == store.end() ? kEmpty : it->second;
      };
      search(r, binding, done, source, [&](const std::vector<int>& b) {
        detail::IdTuple t = head_tuple(r, b);
        if (!idb_[r.head_rel].count(t)) fresh[r.head_rel].insert(std::move(t));
        return false;
      });
    };

    std::map<int, detail::TupleSet> fresh;
    for (const detail::CRule& r : rules_)
      if (r.idb_positions.empty()) run(r, r.body.size(), fresh);
    while (!fresh.empty()) {
      delta = std::move(fresh);
      fresh.clear();
      for (auto& [rel, tuples] : delta) idb_[rel].insert(tuples.begin(), tuples.end());
      for (const detail::CRule& r : rules_)
        for (std::size_t p : r.idb_positions) run(r, p, fresh);
    }
    dirty_ = false;
  }

  const std::map<int, detail::TupleSet>& fixpoint_ids() {
    ensure_fixpoint();
    return idb_;
  }

  AnswerSet export_relation(int rel,
                            const std::map<int, detail::TupleSet>& store) const {
    AnswerSet out;
    for (const auto& [name, id] : relations_)
      if (id == rel) out.relation = name;
    auto it = store.find(rel);
    if (it == store.end()) return out;
    for (const detail::IdTuple& t : it->second) {
      Tuple named;
      named.reserve(t.size());
      for (int c : t) named.push_back(constants_.name(c));
      out.tuples.insert(std::move(named));
    }
    return out;
  }

  Program program_;
  bool ucq_ = false;
  detail::SymbolTable constants_;
  std::map<std::string, int> relations_;
  std::vector<detail::CRule> rules_;
  std::vector<int> program_constants_;
  int answer_rel_ = -1;

  std::map<int, detail::TupleSet> edb_;
  std::map<int, int> instance_constants_;
  std::map<int, detail::TupleSet> idb_;
  bool dirty_ = true;
};

/// Whether `target` belongs to the answer of `p` over `inst`.
inline bool eval_member(const Program& p, const Instance& inst,
                        const Tuple& target) {
  Evaluator ev(p);
  ev.load(inst);
  return ev.member(target);
}

/// Every intensional relation of `p` over `inst`.
inline std::map<std::string, AnswerSet> eval_datalog(const Program& p,
                                                     const Instance& inst) {
  Evaluator ev(p);
  ev.load(inst);
  return ev.fixpoint();
}

inline AnswerSet eval_answers(const Program& p, const Instance& inst) {
  Evaluator ev(p);
  ev.load(inst);
  return ev.answers();
}

}  // namespace mrepair
