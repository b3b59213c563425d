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

#include <gtest/gtest.h>

#include "mrepair/engine.hpp"
#include "mrepair/format.hpp"
#include "mrepair/parser.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

namespace mrepair {
namespace {

using mrepair::testing::Rng;

TEST(EngineTest, TriangleMembership) {
  const Program q = parse_program("s(X,Y,Z) :- r(X,Y), r(Y,Z), !r(Z,X).");
  EXPECT_TRUE(eval_member(q, parse_instance("r(1,2). r(2,3)."), {"1", "2", "3"}));
  EXPECT_FALSE(eval_member(q, parse_instance("r(1,2). r(2,3). r(3,1)."), {"1", "2", "3"}));
  EXPECT_FALSE(eval_member(q, parse_instance("r(3,1)."), {"1", "2", "3"}));
}

TEST(EngineTest, UcqAnswers) {
  const Program q = parse_program("ans(X) :- r(X,Y), X != Y. ans(X) :- s(X), !r(X,X).");
  const AnswerSet a = eval_answers(q, parse_instance("r(a,a). r(b,c). s(a). s(d)."));
  EXPECT_EQ(a.tuples, (std::set<Tuple>{{"b"}, {"d"}}));
}

TEST(EngineTest, BooleanQuery) {
  const Program q = parse_program("ans() :- r(X,X).");
  EXPECT_TRUE(eval_member(q, parse_instance("r(a,a)."), {}));
  EXPECT_FALSE(eval_member(q, parse_instance("r(a,b)."), {}));
}

TEST(EngineTest, TransitiveClosure) {
  const Program p = parse_program("t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z).");
  const AnswerSet a = eval_answers(p, parse_instance("e(a,b). e(b,c). e(c,d)."));
  EXPECT_EQ(a.tuples.size(), 6u);
  EXPECT_TRUE(a.contains({"a", "d"}));
  EXPECT_FALSE(a.contains({"d", "a"}));
}

TEST(EngineTest, SemipositiveProgram) {
  const Program p = parse_program(
      "reach(X) :- start(X). reach(Y) :- reach(X), e(X,Y), !blocked(Y). @answer reach.");
  const AnswerSet a = eval_answers(
      p, parse_instance("start(a). e(a,b). e(b,c). e(a,d). blocked(d)."));
  EXPECT_EQ(a.tuples, (std::set<Tuple>{{"a"}, {"b"}, {"c"}}));
}

TEST(EngineTest, UnsafeRulesRangeOverAnInfiniteDomain) {
  ParseOptions lax;
  lax.require_safe = false;
  // Some constant outside the instance always satisfies the negation.
  const Program q = parse_program("ans(X) :- r(X), !s(Y).", lax);
  EXPECT_TRUE(eval_member(q, parse_instance("r(a). s(a)."), {"a"}));
}

TEST(EngineTest, IncrementalUpdatesMatchReload) {
  const Program p = parse_program("t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z).");
  Evaluator ev(p);
  ev.load(parse_instance("e(a,b)."));
  EXPECT_FALSE(ev.member({"a", "c"}));
  ev.insert({"e", {"b", "c"}});
  EXPECT_TRUE(ev.member({"a", "c"}));
  ev.erase({"e", {"a", "b"}});
  EXPECT_FALSE(ev.member({"a", "c"}));
  EXPECT_TRUE(ev.member({"b", "c"}));
}

TEST(EngineTest, RejectsWrongArity) {
  const Program q = parse_program("ans(X) :- r(X,Y).");
  EXPECT_THROW(eval_member(q, {}, {"a", "b"}), Error);
}

TEST(EnginePropertyTest, UcqMembershipMatchesNaiveOracle) {
  Rng rng(21);
  for (int i = 0; i < 400; ++i) {
    const Program q = mrepair::testing::random_ucq(rng, 3);
    const Instance inst = mrepair::testing::random_instance(rng, 8);
    const Tuple t = mrepair::testing::random_tuple(rng, q.arity());
    EXPECT_EQ(eval_member(q, inst, t), mrepair::testing::naive_member(q, inst, t))
        << to_string(q) << " on " << to_string(inst) << " at " << to_string(t);
  }
}

TEST(EnginePropertyTest, FixpointMatchesNaiveOracle) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const Program p = mrepair::testing::random_datalog(rng, i % 2 == 0);
    const Instance inst = mrepair::testing::random_instance(rng, 10, {"e", "v"});
    const auto naive = mrepair::testing::naive_fixpoint(p, inst);
    for (const auto& [rel, answers] : eval_datalog(p, inst))
      EXPECT_EQ(answers.tuples, naive.at(rel)) << rel << " in " << to_string(p);
  }
}

TEST(EnginePropertyTest, EvaluationCommutesWithRenaming) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const Program q = mrepair::testing::random_ucq(rng, 2);
    const Instance inst = mrepair::testing::random_instance(rng, 8);
    const Tuple t = mrepair::testing::random_tuple(rng, q.arity());
    const Renaming rho = mrepair::testing::random_renaming(
        rng, constants_of(q), constants_of(inst));
    EXPECT_EQ(eval_member(q, inst, t), eval_member(q, rename(inst, rho), rename(t, rho)));
  }
}

}  // namespace
}  // namespace mrepair
