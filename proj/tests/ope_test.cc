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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rome/baselines.h"
#include "rome/environment.h"
#include "rome/ope.h"
#include "rome/stats.h"

namespace rome {
namespace {

LoggedRecord Record(int user, int time, int action, double propensity,
                    double reward) {
  LoggedRecord r;
  r.user = user;
  r.time = time;
  r.context = Eigen::Vector2d(0.1 * user, -0.1 * time);
  r.action = action;
  r.propensity = propensity;
  r.reward = reward;
  return r;
}

TEST(IpsTest, HandValues) {
  const std::vector<LoggedRecord> log = {Record(1, 1, 1, 0.25, 2.0)};
  const std::vector<double> target = {0.5};
  EXPECT_DOUBLE_EQ(Ips(log, target), 4.0);
  EXPECT_DOUBLE_EQ(Snips(log, target), 2.0);
}

TEST(IpsTest, IdentityWeightsGiveMean) {
  const std::vector<LoggedRecord> log = {Record(1, 1, 1, 0.3, 2.0),
                                         Record(1, 2, 0, 0.6, -1.0),
                                         Record(2, 1, 1, 0.9, 5.0)};
  std::vector<double> same;
  for (const auto& r : log) same.push_back(r.propensity);
  EXPECT_DOUBLE_EQ(Ips(log, same), 2.0);
  EXPECT_DOUBLE_EQ(Snips(log, same), 2.0);
}

TEST(IpsTest, ExhaustiveEnumerationIsUnbiased) {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const int horizon = 3;
    double p1[horizon], q1[horizon], r[horizon][2];
    double truth = 0.0;
    for (int t = 0; t < horizon; ++t) {
      p1[t] = rng.Uniform(0.05, 0.95);
      q1[t] = rng.Uniform(0, 1);
      r[t][0] = rng.Normal();
      r[t][1] = rng.Normal();
      truth += ((1 - q1[t]) * r[t][0] + q1[t] * r[t][1]) / horizon;
    }
    double expectation = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<LoggedRecord> log;
      std::vector<double> target;
      double prob = 1.0;
      for (int t = 0; t < horizon; ++t) {
        const int a = (mask >> t) & 1;
        const double p = a ? p1[t] : 1 - p1[t];
        log.push_back(Record(1, t + 1, a, p, r[t][a]));
        target.push_back(a ? q1[t] : 1 - q1[t]);
        prob *= p;
      }
      expectation += prob * Ips(log, target);
    }
    EXPECT_NEAR(expectation, truth, 1e-12);
  }
}

TEST(SnipsTest, ConstantRewardAndScaleInvariance) {
  Rng rng(2);
  std::vector<LoggedRecord> log;
  std::vector<double> target, scaled;
  for (int t = 0; t < 10; ++t) {
    log.push_back(Record(1, t + 1, t % 2, rng.Uniform(0.1, 0.9), 3.5));
    target.push_back(rng.Uniform(0.1, 1));
    scaled.push_back(2.7 * target.back());
  }
  EXPECT_NEAR(Snips(log, target), 3.5, 1e-14);
  for (int t = 0; t < 10; ++t) log[t].reward = rng.Normal();
  EXPECT_NEAR(Snips(log, target), Snips(log, scaled), 1e-14);
  std::vector<double> zeros(10, 0.0);
  EXPECT_THROW(Snips(log, zeros), std::domain_error);
}

TEST(SnipsTest, PermutationInvariant) {
  Rng rng(3);
  std::vector<LoggedRecord> log;
  std::vector<double> target;
  for (int t = 0; t < 8; ++t) {
    log.push_back(Record(1, t + 1, t % 2, rng.Uniform(0.1, 0.9), rng.Normal()));
    target.push_back(rng.Uniform(0.1, 1));
  }
  const double ips = Ips(log, target);
  const double snips = Snips(log, target);
  std::reverse(log.begin(), log.end());
  std::reverse(target.begin(), target.end());
  EXPECT_NEAR(Ips(log, target), ips, 1e-14);
  EXPECT_NEAR(Snips(log, target), snips, 1e-14);
}

TEST(LoggedRecordTest, Validation) {
  EXPECT_THROW(ValidateRecord(Record(1, 1, 2, 0.5, 0)), std::invalid_argument);
  EXPECT_THROW(ValidateRecord(Record(1, 1, 1, 0.0, 0)), std::invalid_argument);
  EXPECT_THROW(ValidateRecord(Record(1, 1, 1, 1.0, 0)), std::invalid_argument);
  const std::vector<LoggedRecord> log = {Record(1, 1, 1, 0.005, 0),
                                         Record(1, 2, 1, 0.5, 0),
                                         Record(1, 3, 0, 0.995, 0)};
  EXPECT_EQ(FilterByPropensity(log).size(), 1u);
  EXPECT_DOUBLE_EQ(Record(1, 1, 1, 0.3, 0).control_propensity(), 0.7);
}

TEST(LogIoTest, RoundTrip) {
  std::vector<LoggedRecord> log = {Record(2, 1, 1, 0.3, 1.5),
                                   Record(1, 1, 0, 0.6, -0.5)};
  log[0].user_features = Eigen::Vector3d(1, 2, 3);
  const auto path = std::filesystem::temp_directory_path() / "rome_log.jsonl";
  WriteLog(log, path);
  const auto back = ReadLog(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].user, 2);
  EXPECT_EQ(back[0].propensity, 0.3);
  EXPECT_EQ(back[0].user_features, log[0].user_features);
  EXPECT_EQ(back[1].context, log[1].context);
  std::filesystem::remove(path);
}

TEST(StagedOrderTest, RelabelsAndSorts) {
  const std::vector<LoggedRecord> log = {Record(7, 2, 0, 0.5, 0),
                                         Record(7, 1, 0, 0.5, 0),
                                         Record(3, 1, 0, 0.5, 0)};
  const auto ordered = StagedOrder(log);
  ASSERT_EQ(ordered.size(), 3u);
  EXPECT_EQ(ordered[0].user, 1);
  EXPECT_EQ(ordered[0].time, 1);
  EXPECT_EQ(ordered[1].user, 2);
  EXPECT_EQ(ordered[1].time, 1);
  EXPECT_EQ(ordered[2].user, 2);
  EXPECT_EQ(ordered[2].time, 2);
  const std::vector<LoggedRecord> dup = {Record(1, 1, 0, 0.5, 0),
                                         Record(1, 1, 1, 0.5, 0)};
  EXPECT_THROW(StagedOrder(dup), std::invalid_argument);
}

TEST(PairedTTestTest, DegenerateAndShifted) {
  const std::vector<double> a = {1, 2, 3, 4};
  EXPECT_EQ(PairedTTest(a, a), 1.0);
  std::vector<double> b;
  Rng rng(4);
  for (double x : a) b.push_back(x + 10 + 0.01 * rng.Normal());
  EXPECT_LT(PairedTTest(a, b), 0.01);
  EXPECT_THROW(PairedTTest(a, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(PairedTTest(std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(PairedTTestTest, SwapGivesComplement) {
  Rng rng(5);
  std::vector<double> a, b;
  for (int k = 0; k < 12; ++k) {
    a.push_back(rng.Normal());
    b.push_back(rng.Normal(0.3));
  }
  EXPECT_NEAR(PairedTTest(a, b) + PairedTTest(b, a), 1.0, 1e-12);
}

TEST(PairedTTestTest, MatchesTDistribution) {
  const std::vector<double> a = {0, 0, 0, 0, 0};
  const std::vector<double> b = {1.0, 2.0, 0.5, 1.5, -0.5};
  const double mean = 0.9;
  const double sd = std::sqrt(SampleVariance(b));
  const double t = mean / (sd / std::sqrt(5.0));
  EXPECT_NEAR(PairedTTest(a, b), 1 - StudentTCdf(t, 4), 1e-14);
}

std::vector<LoggedRecord> SyntheticLog(int stages, std::uint64_t seed) {
  const Environment env(EnvSetting::Preset(SettingKind::kHeterogeneous),
                        StagedSchedule(stages), Rng::Stream(seed, kEnvStream));
  Rng rng(seed);
  return GenerateLog(
      env, [](const Eigen::VectorXd& s) { return 0.3 + 0.4 * (s(0) > 0); },
      rng);
}

TEST(BootstrapTest, ShapeAndDeterminism) {
  const auto log = StagedOrder(SyntheticLog(8, 6));
  const std::vector<PolicyVariant> policies = {PolicyVariant::kRoME,
                                               PolicyVariant::kStandard,
                                               PolicyVariant::kAC};
  VariantOptions options;
  options.learner.bags = 2;
  const BootstrapResult a =
      BootstrapEval(log, policies, {}, options, 5, 9);
  const BootstrapResult b =
      BootstrapEval(log, policies, {}, options, 5, 9, ResampleWithReplacement, 3);
  EXPECT_EQ(a.estimates.rows(), 5);
  EXPECT_EQ(a.estimates.cols(), 3);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_TRUE(a.estimates.allFinite());
  const Eigen::MatrixXd pv = PValueMatrix(a);
  EXPECT_TRUE(std::isnan(pv(0, 0)));
  EXPECT_NEAR(pv(0, 1) + pv(1, 0), 1.0, 1e-12);
  const auto path = std::filesystem::temp_directory_path() / "rome_est.csv";
  WriteEstimatesCsv(a, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1 + 5 * 3);
  std::filesystem::remove(path);
}

TEST(BootstrapTest, IdentityResampleReproducesPointEstimate) {
  const auto log = StagedOrder(SyntheticLog(6, 7));
  const std::vector<PolicyVariant> policies = {PolicyVariant::kStandard};
  const BootstrapResult r =
      BootstrapEval(log, policies, {}, {}, 1, 3, IdentityResample);
  auto policy = MakePolicy(
      PolicyVariant::kStandard, {}, {}, LogShape(log),
      Rng::Stream(3, kPolicyStream ^ StableHash("Standard")));
  double mean = 0.0;
  for (const auto& rec : log) mean += rec.reward / log.size();
  EXPECT_DOUBLE_EQ(r.estimates(0, 0),
                   EvaluateOnline(log, *policy).snips - mean);
}

TEST(BootstrapTest, StandardErrorMatchesDeltaMethod) {
  const auto log = StagedOrder(SyntheticLog(40, 8));
  // Fixed target: treat with probability 0.8 when s2 < 0, else 0.2.
  const TargetPolicy target = [](const LoggedRecord& r, int a) {
    const double p1 = r.context(1) < 0 ? 0.8 : 0.2;
    return a == 1 ? p1 : 1 - p1;
  };
  const auto probs = TargetProbabilities(log, target);
  const double snips = Snips(log, probs);
  std::map<int, double> influence;
  double total_w = 0.0;
  for (size_t t = 0; t < log.size(); ++t) {
    const double w = probs[t] / log[t].propensity;
    influence[log[t].user] += w * (log[t].reward - snips);
    total_w += w;
  }
  double var = 0.0;
  for (const auto& [u, v] : influence) var += v * v;
  const double delta_se = std::sqrt(var) / total_w;

  Rng rng(9);
  std::vector<double> draws;
  for (int b = 0; b < 2000; ++b) {
    const auto users = ResampleWithReplacement(static_cast<int>(influence.size()), rng);
    const auto sample = ResampleUsers(log, users);
    draws.push_back(Snips(sample, TargetProbabilities(sample, target)));
  }
  const double boot_se = std::sqrt(SampleVariance(draws));
  EXPECT_NEAR(boot_se / delta_se, 1.0, 0.3);
}

TEST(ResampleTest, RelabelsDrawnUsers) {
  const std::vector<LoggedRecord> log = {Record(1, 1, 0, 0.5, 1),
                                         Record(1, 2, 0, 0.5, 2),
                                         Record(2, 1, 0, 0.5, 3)};
  const std::vector<int> users = {1, 1, 0};
  const auto out = ResampleUsers(log, users);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].user, 1);
  EXPECT_EQ(out[0].reward, 3);
  EXPECT_EQ(out[1].user, 2);
  EXPECT_EQ(out[2].user, 3);
  EXPECT_EQ(out[3].reward, 2);
}

TEST(EvaluateOnlineTest, TargetProbabilitiesAreClippedPolicyProbabilities) {
  const auto log = StagedOrder(SyntheticLog(6, 10));
  auto policy = MakePolicy(PolicyVariant::kRoME, {}, {}, LogShape(log), Rng(11));
  const OnlineEvaluation e = EvaluateOnline(log, *policy);
  ASSERT_EQ(e.target_probs.size(), log.size());
  for (double p : e.target_probs) {
    EXPECT_GE(p, 0.1);
    EXPECT_LE(p, 0.9);
  }
  EXPECT_DOUBLE_EQ(e.ips, Ips(log, e.target_probs));
  EXPECT_DOUBLE_EQ(e.snips, Snips(log, e.target_probs));
}

}  // namespace
}  // namespace rome
