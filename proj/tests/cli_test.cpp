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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cli.hpp"
#include "support/random.hpp"

namespace mrepair {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mrepair_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::vector<std::string> triangle(const std::string& command, const std::string& facts,
                                    const std::string& tuple) {
    return {command, "-q", write("q.dl", "s(X,Y,Z) :- r(X,Y), r(Y,Z), !r(Z,X).\n"),
            "-d", write("i.facts", facts), "-t", tuple};
  }

  fs::path dir_;
};

TEST_F(CliTest, RepairTextOutput) {
  const Outcome o = run_cli(triangle("repair", "r(3,1).\n", "(1,2,3)"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("status: found"), std::string::npos);
  EXPECT_NE(o.out.find("size: 3"), std::string::npos);
  EXPECT_NE(o.out.find("delete: r(3,1)"), std::string::npos);
}

TEST_F(CliTest, RepairJsonIsStable) {
  const Outcome o = run_cli([&] {
    auto a = triangle("repair", "r(3,1).\n", "(1,2,3)");
    a.push_back("--json");
    return a;
  }());
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out,
            "{\"status\":\"found\",\"size\":3,\"insert\":[\"r(1,2)\",\"r(2,3)\"],"
            "\"delete\":[\"r(3,1)\"],\"witness_assignment\":{\"X\":\"1\",\"Y\":\"2\","
            "\"Z\":\"3\"}}\n");
}

TEST_F(CliTest, StatusExitCodes) {
  EXPECT_EQ(run_cli(triangle("repair", "r(3,1).\n", "(1,1,1)")).code, 1);
  EXPECT_EQ(run_cli(triangle("size", "r(3,1).\n", "(1,1,1)")).out, "no_repair\n");
  EXPECT_EQ(run_cli(triangle("eval", "r(1,2). r(2,3).\n", "(1,2,3)")).out, "true\n");
  EXPECT_EQ(run_cli(triangle("eval", "r(3,1).\n", "(1,2,3)")).code, 1);
  EXPECT_EQ(run_cli(triangle("decide", "", "(1,2,3)")).code, 0);
  auto bound = triangle("bound", "r(3,1).\n", "(1,2,3)");
  bound.insert(bound.end(), {"-k", "2"});
  EXPECT_EQ(run_cli(bound).code, 1);
}

TEST_F(CliTest, BudgetExhaustedExitCode) {
  const std::string q = write("sp.dl", "ok(X) :- e(X,Y), !bad(X). ans(X) :- ok(X). @answer ans.\n");
  const Outcome o = run_cli({"size", "-q", q, "-d", write("d.facts", "bad(a).\n"), "-t",
                             "(a)", "--budget", "1"});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(o.out, "budget_exhausted\n");
}

TEST_F(CliTest, OracleMatchesSolver) {
  auto a = triangle("repair", "r(3,1).\n", "(1,2,3)");
  a.push_back("--oracle");
  const Outcome o = run_cli(a);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("size: 3"), std::string::npos);
}

TEST_F(CliTest, InputErrorsCarryPositions) {
  const Outcome o = run_cli({"classify", "-q", write("bad.dl", "ans(X) :-\n  r(X\n")});
  EXPECT_EQ(o.code, 65);
  EXPECT_NE(o.err.find("bad.dl:"), std::string::npos);
  EXPECT_NE(o.err.find(": error: "), std::string::npos);
  EXPECT_EQ(run_cli({"classify", "-q", (dir_ / "missing.dl").string()}).code, 65);
  EXPECT_EQ(run_cli(triangle("eval", "r(3,1).\n", "(1,2)")).code, 65);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 64);
  EXPECT_EQ(run_cli({"repair"}).code, 64);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 64);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, ClassifyReport) {
  const Outcome o = run_cli({"classify", "-q", write("q.dl", "ans(X) :- r(X,Y), r(Y,Z).\n")});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("fragment: PJ\n"), std::string::npos);
  EXPECT_NE(o.out.find("is_cq: true\n"), std::string::npos);
  EXPECT_NE(o.out.find("combined_complexity: decide=P bound=NP-complete"), std::string::npos);
}

TEST_F(CliTest, SatReportsWitness) {
  const Outcome o = run_cli({"sat", "-q", write("q.dl", "ans() :- r(X,Y), !r(Y,X).\n")});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "satisfiable\nr(_c0,_c1).\n");
  EXPECT_EQ(run_cli({"sat", "-q", write("u.dl", "ans() :- r(X), !r(X).\n")}).code, 1);
}

TEST_F(CliTest, SetCoverPipeline) {
  const Outcome gen =
      run_cli({"gen-setcover", "--seed", "3", "-n", "5", "-m", "4", "--density", "0.4"});
  ASSERT_EQ(gen.code, 0);
  const std::string cover = write("x.sc", gen.out);
  const fs::path out = dir_ / "red";
  ASSERT_EQ(run_cli({"reduce-setcover", "-i", cover, "-o", out.string()}).code, 0);

  std::ifstream tuple_in(out / "tuple.txt");
  std::string tuple;
  std::getline(tuple_in, tuple);
  auto args = std::vector<std::string>{"repair", "-q", (out / "query.dl").string(), "-d",
                                       (out / "data.facts").string(), "-t", tuple, "--json"};
  const Outcome rep = run_cli(args);
  ASSERT_EQ(rep.code, 0) << rep.err;
  const std::string repair = write("repair.json", rep.out);
  const Outcome ext = run_cli({"extract-cover", "-i", cover, "--repair", repair});
  ASSERT_EQ(ext.code, 0) << ext.err;

  const SetCoverInstance x = parse_setcover(gen.out);
  std::istringstream names(ext.out);
  Cover h;
  for (std::string s; names >> s;) h.push_back(s);
  EXPECT_TRUE(covers(x, h));
  EXPECT_EQ(h.size(), nlohmann::json::parse(rep.out)["size"].get<std::size_t>());
  EXPECT_EQ(h.size(), exact_cover(x).size());
}

TEST_F(CliTest, ExtractRejectsNonRepairs) {
  const std::string cover = write("x.sc", "s1: u1\n");
  const Outcome o = run_cli({"extract-cover", "-i", cover, "--repair",
                             write("r.json", "{\"insert\": [], \"delete\": []}")});
  EXPECT_EQ(o.code, 65);
  EXPECT_NE(o.err.find("NotARepair"), std::string::npos);
}

TEST_F(CliTest, BoundZeroMatchesEval) {
  mrepair::testing::Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    const Program q = mrepair::testing::random_ucq(rng, 2);
    const Instance inst = mrepair::testing::random_instance(rng, 6);
    const Tuple t = mrepair::testing::random_tuple(rng, q.arity());
    const std::string qp = write("q.dl", to_string(q));
    const std::string dp = write("d.facts", to_string(inst));
    const int eval = run_cli({"eval", "-q", qp, "-d", dp, "-t", to_string(t)}).code;
    const int bound =
        run_cli({"bound", "-q", qp, "-d", dp, "-t", to_string(t), "-k", "0"}).code;
    EXPECT_EQ(eval, bound) << to_string(q) << " " << to_string(inst);
  }
}

}  // namespace
}  // namespace mrepair
