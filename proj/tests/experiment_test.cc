// Copyright 2026 The RoME Bandit Authors.
//
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rome/experiment.h"

namespace rome {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rome_exp_" + name);
  fs::remove_all(dir);
  return dir;
}

constexpr const char* kSmall = R"(
setting: heterogeneous
stages: 5
replications: 2
seed: 11
threads: 1
policy:
  learner: {bags: 2}
policies:
  - RoME
  - {tag: Standard, gamma: 2.0}
)";

TEST(ConfigTest, ParsesDefaultsAndOverrides) {
  const ExperimentConfig cfg = ParseConfig(kSmall);
  EXPECT_EQ(cfg.environment.kind, SettingKind::kHeterogeneous);
  EXPECT_EQ(cfg.stages, 5);
  EXPECT_EQ(cfg.replications, 2);
  ASSERT_EQ(cfg.policies.size(), 2u);
  EXPECT_EQ(cfg.policies[0].label(), "RoME");
  EXPECT_EQ(cfg.policies[0].options.learner.bags, 2);
  EXPECT_EQ(cfg.policies[1].options.learner.bags, 2);
  EXPECT_EQ(cfg.policies[0].config.gamma, 1.0);
  EXPECT_EQ(cfg.policies[1].config.gamma, 2.0);
}

TEST(ConfigTest, DumpRoundTrips) {
  const ExperimentConfig cfg = ParseConfig(kSmall);
  const std::string dumped = DumpConfig(cfg);
  EXPECT_EQ(DumpConfig(ParseConfig(dumped)), dumped);
}

TEST(ConfigTest, Rectangular) {
  const ExperimentConfig cfg = ParseConfig(
      "rectangular: {users: 4, times: 3}\npolicies: [AC]\n");
  EXPECT_EQ(cfg.MakeSchedule().size(), 12u);
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_THROW(ParseConfig("stages: 5\nbogus: 1\npolicies: [RoME]\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig("policies: [NotAPolicy]\n"), std::invalid_argument);
  EXPECT_THROW(ParseConfig("stages: 5\n"), std::invalid_argument);
  EXPECT_THROW(ParseConfig("stages: 0\npolicies: [RoME]\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig("policies: [{tag: RoME, pi_min: 0.95}]\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig("policies: [{tag: RoME, learner: {oops: 1}}]\n"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfig("policies: [RoME\n"), std::invalid_argument);
}

#ifdef ROME_CONFIG_DIR
TEST(ConfigTest, ShippedConfigsParse) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(ROME_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(LoadConfig(entry.path())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 4);
}
#endif

TEST(SeedTest, StreamsDifferByReplicationAndPolicy) {
  EXPECT_NE(EnvironmentRng(1, 0).NextU64(), EnvironmentRng(1, 1).NextU64());
  EXPECT_NE(PolicyRng(1, 0, "RoME").NextU64(), PolicyRng(1, 0, "AC").NextU64());
  EXPECT_EQ(PolicyRng(3, 2, "AC").NextU64(), PolicyRng(3, 2, "AC").NextU64());
}

TEST(ResolveThreadsTest, ExplicitWins) {
  EXPECT_EQ(ResolveThreads(3), 3);
  EXPECT_GE(ResolveThreads(0), 1);
}

TEST(PairwiseTest, CountsWinsAndTies) {
  Eigen::MatrixXd regret(4, 2);
  regret << 1, 2, 3, 3, 5, 4, 0, 1;
  const auto rows = PairwiseTable({"A", "B"}, regret);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].policy, "A");
  EXPECT_EQ(rows[0].wins, 2);
  EXPECT_EQ(rows[0].ties, 1);
  EXPECT_EQ(rows[1].wins, 1);
  EXPECT_DOUBLE_EQ(rows[0].win_percent, 50.0);
  EXPECT_DOUBLE_EQ(rows[0].p_value, rows[1].p_value);
  const std::vector<double> a = {1, 2, 3};
  EXPECT_EQ(TwoSidedPairedTTest(a, a), 1.0);
}

TEST(RunExperimentTest, WritesFilesDeterministically) {
  ExperimentConfig cfg = ParseConfig(kSmall);
  cfg.output = Scratch("a");
  const ExperimentResult first = RunExperiment(cfg);
  EXPECT_EQ(first.final_regret.rows(), 2);
  EXPECT_EQ(first.final_regret.cols(), 2);
  for (const char* f : {"regret.csv", "summary.csv", "pairwise.csv",
                        "config.yaml", "traces/RoME_rep0.jsonl",
                        "traces/RoME_rep1.jsonl", "traces/Standard_rep0.jsonl",
                        "traces/Standard_rep1.jsonl"}) {
    EXPECT_TRUE(fs::exists(cfg.output / f)) << f;
  }
  EXPECT_EQ(Lines(cfg.output / "regret.csv").size(), 1u + 2 * 2 * 5);
  EXPECT_EQ(Lines(cfg.output / "traces/RoME_rep0.jsonl").size(), 15u);

  ExperimentConfig again = cfg;
  again.output = Scratch("b");
  again.threads = 2;
  RunExperiment(again);
  for (const char* f : {"regret.csv", "summary.csv", "pairwise.csv",
                        "traces/Standard_rep1.jsonl"}) {
    EXPECT_EQ(Slurp(cfg.output / f), Slurp(again.output / f)) << f;
  }

  // Re-running from the written config reproduces the results.
  ExperimentConfig replay = LoadConfig(cfg.output / "config.yaml");
  replay.output = Scratch("c");
  RunExperiment(replay);
  EXPECT_EQ(Slurp(cfg.output / "summary.csv"),
            Slurp(replay.output / "summary.csv"));
  for (const char* d : {"a", "b", "c"}) fs::remove_all(Scratch(d));
}

TEST(RunExperimentTest, PairwiseAgreesWithSummary) {
  ExperimentConfig cfg = ParseConfig(kSmall);
  cfg.replications = 4;
  const ExperimentResult r = RunExperiment(cfg, false);
  int wins = 0, ties = 0;
  for (int k = 0; k < 4; ++k) {
    wins += r.final_regret(k, 0) < r.final_regret(k, 1);
    ties += r.final_regret(k, 0) == r.final_regret(k, 1);
  }
  ASSERT_FALSE(r.pairwise.empty());
  EXPECT_EQ(r.pairwise[0].wins, wins);
  EXPECT_EQ(r.pairwise[0].ties, ties);
  for (size_t p = 0; p < r.curves.size(); ++p) {
    for (int k = 0; k < 4; ++k) {
      EXPECT_DOUBLE_EQ(r.curves[p][k].final_regret(), r.final_regret(k, p));
    }
  }
}

#ifdef ROME_CLI_PATH
int RunCli(const std::string& args) {
  const std::string cmd = std::string(ROME_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, SimulateValidateOpe) {
  const fs::path out = Scratch("cli");
  ASSERT_EQ(RunCli("simulate --setting nonlinear --stages 60 --reps 10 "
                "--policies RoME,Standard --no-traces --out " + out.string()),
            0);
  EXPECT_EQ(Lines(out / "summary.csv").size(), 1u + 2 * 10);
  EXPECT_EQ(RunCli("validate"), 0);
  ASSERT_EQ(RunCli("synth-log --setting heterogeneous --stages 10 --out " +
                (out / "log.jsonl").string()),
            0);
  ASSERT_EQ(RunCli("ope " + (out / "log.jsonl").string() +
                " --policies RoME,AC --bootstrap 100 --out " +
                (out / "ope").string()),
            0);
  EXPECT_EQ(Lines(out / "ope" / "estimates.csv").size(), 1u + 100 * 2);
  EXPECT_NE(RunCli("simulate --setting nowhere"), 0);
  EXPECT_NE(RunCli("frobnicate"), 0);
  fs::remove_all(out);
}
#endif

}  // namespace
}  // namespace rome
