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

// Seeded generators for property tests. Programs are produced as text and
// parsed, so every generated value has passed the same validation as user
// input.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mrepair/mrepair.hpp"

namespace mrepair::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& constant_pool() {
  static const std::vector<std::string> pool{"a", "b", "c", "d"};
  return pool;
}

struct RuleShape {
  std::size_t max_literals = 5;
  std::size_t max_vars = 4;
  double p_negative = 0.3;
  double p_comparison = 0.15;
  double p_constant = 0.15;
  bool negation = true;
  bool comparisons = true;
};

namespace detail {

inline std::string random_term(Rng& rng, std::size_t nvars, const RuleShape& shape) {
  static const std::vector<std::string> vars{"X", "Y", "Z", "W"};
  if (rng.chance(shape.p_constant)) return rng.pick(constant_pool());
  return vars[rng.below(nvars)];
}

// One body over the schema {r/2, s/1}; returns the literal texts and the
// variables that occur in positive literals.
inline std::vector<std::string> random_body(Rng& rng, const RuleShape& shape,
                                            std::vector<std::string>& positive_vars) {
  const std::size_t nvars = rng.between(1, shape.max_vars);
  const std::size_t nlits = rng.between(1, shape.max_literals);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nlits; ++i) {
    if (shape.comparisons && i > 0 && rng.chance(shape.p_comparison)) {
      const std::string op = rng.chance(0.5) ? " = " : " != ";
      out.push_back(random_term(rng, nvars, shape) + op + random_term(rng, nvars, shape));
      continue;
    }
    const bool negative = shape.negation && i > 0 && rng.chance(shape.p_negative);
    std::vector<std::string> args;
    const bool binary = rng.chance(0.65);
    args.push_back(random_term(rng, nvars, shape));
    if (binary) args.push_back(random_term(rng, nvars, shape));
    std::string lit = (negative ? "!" : "") + std::string(binary ? "r(" : "s(");
    for (std::size_t j = 0; j < args.size(); ++j) {
      lit += (j ? "," : "") + args[j];
      if (!negative && args[j][0] >= 'A' && args[j][0] <= 'Z')
        positive_vars.push_back(args[j]);
    }
    out.push_back(lit + ")");
  }
  return out;
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

}  // namespace detail

/// A safe rule text with head ans/arity, or nullopt when the draw cannot
/// supply enough positive variables for the head.
inline std::optional<std::string> random_rule_text(Rng& rng, std::size_t arity,
                                                   const RuleShape& shape) {
  std::vector<std::string> positive_vars;
  const std::vector<std::string> body = detail::random_body(rng, shape, positive_vars);
  if (arity > 0 && positive_vars.empty()) return std::nullopt;
  std::vector<std::string> head;
  for (std::size_t i = 0; i < arity; ++i) head.push_back(rng.pick(positive_vars));
  return "ans(" + detail::join(head, ",") + ") :- " + detail::join(body, ", ") + ".";
}

/// Random safe UCQ with up to max_rules rules sharing the head ans/arity.
inline Program random_ucq(Rng& rng, std::size_t max_rules, const RuleShape& shape = {},
                          std::optional<std::size_t> arity = std::nullopt) {
  while (true) {
    const std::size_t h = arity ? *arity : rng.between(0, 2);
    const std::size_t nrules = rng.between(1, max_rules);
    std::string text;
    bool ok = true;
    for (std::size_t i = 0; i < nrules && ok; ++i) {
      const std::optional<std::string> rule = random_rule_text(rng, h, shape);
      ok = rule.has_value();
      if (ok) text += *rule + "\n";
    }
    if (!ok) continue;
    try {
      return parse_program(text);
    } catch (const SourceError&) {
      // unsafe or arity clash between r/s uses; draw again
    }
  }
}

/// Every body variable also occurs in the head.
inline Program random_projection_free(Rng& rng, const RuleShape& shape = {}) {
  while (true) {
    std::vector<std::string> positive_vars;
    const std::vector<std::string> body = detail::random_body(rng, shape, positive_vars);
    std::set<std::string> all;
    for (const std::string& lit : body)
      for (char ch : lit)
        if (ch >= 'A' && ch <= 'Z') all.insert(std::string(1, ch));
    std::vector<std::string> head(all.begin(), all.end());
    std::shuffle(head.begin(), head.end(), rng.engine());
    try {
      return parse_program("ans(" + detail::join(head, ",") + ") :- " +
                           detail::join(body, ", ") + ".");
    } catch (const SourceError&) {
    }
  }
}

/// One relational literal plus comparisons. Unsafe rules are allowed, since
/// a lone negated literal is the interesting case.
inline Program random_join_free(Rng& rng, const RuleShape& shape = {}) {
  static const std::vector<std::string> vars{"X", "Y", "Z", "W"};
  ParseOptions loose;
  loose.require_safe = false;
  while (true) {
    const std::size_t nvars = rng.between(1, shape.max_vars);
    const bool binary = rng.chance(0.65);
    std::string lit = (rng.chance(0.4) ? "!" : "") + std::string(binary ? "r(" : "s(");
    lit += detail::random_term(rng, nvars, shape);
    if (binary) lit += "," + detail::random_term(rng, nvars, shape);
    lit += ")";
    std::vector<std::string> body{lit};
    const std::size_t ncmp = rng.between(0, shape.max_literals - 1);
    for (std::size_t i = 0; i < ncmp; ++i)
      body.push_back(detail::random_term(rng, nvars, shape) +
                     (rng.chance(0.5) ? " = " : " != ") +
                     detail::random_term(rng, nvars, shape));
    std::vector<std::string> head;
    const std::size_t arity = rng.between(0, 2);
    for (std::size_t i = 0; i < arity; ++i) head.push_back(vars[rng.below(nvars)]);
    try {
      return parse_program("ans(" + detail::join(head, ",") + ") :- " +
                               detail::join(body, ", ") + ".",
                           loose);
    } catch (const SourceError&) {
    }
  }
}

/// Up to max_facts facts over {r/2, s/1} and the constant pool.
inline Instance random_instance(Rng& rng, std::size_t max_facts,
                                const std::vector<std::string>& relations = {"r", "s"}) {
  Instance inst;
  const std::size_t n = rng.between(0, max_facts);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& rel = rng.pick(relations);
    const bool binary = rel == "r" || rel == "e";
    Fact f{rel, {rng.pick(constant_pool())}};
    if (binary) f.args.push_back(rng.pick(constant_pool()));
    inst.insert(std::move(f));
  }
  return inst;
}

inline Tuple random_tuple(Rng& rng, std::size_t arity) {
  Tuple t;
  for (std::size_t i = 0; i < arity; ++i) t.push_back(rng.pick(constant_pool()));
  return t;
}

/// Random recursive-capable program over EDB {e/2, v/1} and IDB
/// {ans/1, t/2, q/1}; the first rule defines ans.
inline Program random_datalog(Rng& rng, bool semipositive, std::size_t max_rules = 4,
                              std::size_t max_body = 3) {
  static const std::vector<std::string> vars{"X", "Y", "Z"};
  struct Sym {
    const char* name;
    std::size_t arity;
  };
  static const std::vector<Sym> heads{{"ans", 1}, {"t", 2}, {"q", 1}};
  static const std::vector<Sym> bodies{{"e", 2}, {"v", 1}, {"t", 2}, {"q", 1}, {"ans", 1}};
  static const std::vector<Sym> edb{{"e", 2}, {"v", 1}};
  auto atom = [&](const Sym& s) {
    std::string out = std::string(s.name) + "(";
    for (std::size_t i = 0; i < s.arity; ++i)
      out += (i ? "," : "") + (rng.chance(0.1) ? rng.pick(constant_pool()) : rng.pick(vars));
    return out + ")";
  };
  while (true) {
    std::string text;
    const std::size_t nrules = rng.between(1, max_rules);
    for (std::size_t i = 0; i < nrules; ++i) {
      const Sym& head = i == 0 ? heads[0] : rng.pick(heads);
      std::vector<std::string> body;
      const std::size_t n = rng.between(1, max_body);
      for (std::size_t j = 0; j < n; ++j) {
        if (semipositive && j > 0 && rng.chance(0.25)) {
          body.push_back("!" + atom(rng.pick(edb)));
        } else if (semipositive && j > 0 && rng.chance(0.1)) {
          body.push_back(rng.pick(vars) + " != " + rng.pick(vars));
        } else {
          body.push_back(atom(rng.pick(bodies)));
        }
      }
      text += atom(head) + " :- " + detail::join(body, ", ") + ".\n";
    }
    text += "@answer ans.\n";
    try {
      Program p = parse_program(text);
      // Keep e and v as the only extensional relations.
      bool edb_ok = true;
      for (const auto& [rel, arity] : p.edb) edb_ok = edb_ok && (rel == "e" || rel == "v");
      if (edb_ok) return p;
    } catch (const SourceError&) {
    }
  }
}

/// A bijection that moves every constant in `movable` outside `fixed` to a
/// new name. Names are drawn from a pool disjoint from both sets.
inline Renaming random_renaming(Rng& rng, const std::set<std::string>& fixed,
                                const std::set<std::string>& movable) {
  std::vector<std::string> targets;
  for (std::size_t i = 0; targets.size() < 2 * movable.size() + 2; ++i) {
    const std::string name = "k" + std::to_string(i);
    if (!fixed.count(name) && !movable.count(name)) targets.push_back(name);
  }
  std::shuffle(targets.begin(), targets.end(), rng.engine());
  Renaming rho;
  std::size_t next = 0;
  for (const std::string& c : movable)
    if (!fixed.count(c)) rho[c] = targets[next++];
  return rho;
}

/// Relational literal count of the largest rule, which bounds the size of
/// a minimum repair of a union of rules.
inline std::size_t literal_bound(const Program& q) {
  std::size_t best = 0;
  for (const Rule& r : q.rules) {
    std::size_t n = 0;
    for (const Literal& lit : r.body) n += lit.is_relational();
    best = std::max(best, n);
  }
  return best;
}

}  // namespace mrepair::testing
