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

// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--only NAME] [--seed N] [--no-diagnostic]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "rome/baselines.h"
#include "rome/environment.h"
#include "rome/experiment.h"
#include "rome/graph.h"
#include "rome/gram.h"
#include "rome/layout.h"
#include "rome/ope.h"
#include "rome/regret.h"
#include "rome/reward_model.h"
#include "rome/rng.h"
#include "rome/stats.h"
#include "rome/runner.h"

namespace rome {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CohesionGraph RandomGraph(int n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.Bernoulli(p)) edges.push_back({u, v});
    }
  }
  return CohesionGraph(n, std::move(edges));
}

// Reward model of one configuration: means under action 0 and the arm,
// working-model predictions and the control probability.
struct RewardConfig {
  double r0, ra, f0, fa, pi0;
};

RewardConfig DrawConfig(Rng& rng, double bound, double pi_min, double pi_max) {
  return {rng.Uniform(-bound, bound), rng.Uniform(-bound, bound),
          rng.Uniform(-bound, bound), rng.Uniform(-bound, bound),
          rng.Uniform(pi_min, pi_max)};
}

double DrawPseudoReward(const RewardConfig& c, double sd, Rng& rng) {
  const int action = rng.Bernoulli(1 - c.pi0) ? 1 : 0;
  const double reward = (action ? c.ra : c.r0) + rng.Normal(0.0, sd);
  return MakePseudoReward(c.fa, c.f0, 1, action, reward, c.pi0).value;
}

Verdict DoubleRobustness(std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const RewardConfig cfg = DrawConfig(rng, 3.0, 0.02, 0.98);
    const double mean =
        cfg.pi0 * MakePseudoReward(cfg.fa, cfg.f0, 1, 0, cfg.r0, cfg.pi0).value +
        (1 - cfg.pi0) *
            MakePseudoReward(cfg.fa, cfg.f0, 1, 1, cfg.ra, cfg.pi0).value;
    worst = std::max(worst, std::abs(mean - (cfg.ra - cfg.r0)));
  }
  const int n = 100000;
  double worst_z = 0.0;
  for (int c = 0; c < 5; ++c) {
    const RewardConfig cfg = DrawConfig(rng, 2.0, 0.1, 0.9);
    std::vector<double> draws(n);
    for (double& x : draws) x = DrawPseudoReward(cfg, 1.0, rng);
    const double se = std::sqrt(SampleVariance(draws) / n);
    const double mean = Mean(draws);
    worst_z = std::max(worst_z, std::abs(mean - (cfg.ra - cfg.r0)) / se);
  }
  const double secs = Seconds(start);
  return {worst <= 1e-12 && worst_z <= 3.0 && secs < 10.0,
          Format("enumeration max err %.2e (<=1e-12); Monte Carlo max |z| "
                 "%.2f (<=3); %.1fs (<10s)",
                 worst, worst_z, secs)};
}

Verdict VarianceIdentity(std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  const double bound = 2.0;
  const double sd = 0.8;
  const double pi_min = 0.1;
  const double pi_max = 0.9;
  const double v1_sq =
      PseudoRewardVarianceBound(sd * sd, bound, pi_min, pi_max);
  const int n = 1000000;
  double worst_rel = 0.0;
  double worst_ratio = 0.0;
  for (int c = 0; c < 5; ++c) {
    const RewardConfig cfg = DrawConfig(rng, bound, pi_min, pi_max);
    std::vector<double> draws(n);
    for (double& x : draws) x = DrawPseudoReward(cfg, sd, rng);
    const double mc = SampleVariance(draws);
    const double closed =
        PseudoRewardVariance(cfg.ra, cfg.r0, cfg.fa, cfg.f0, cfg.pi0, sd * sd);
    worst_rel = std::max(worst_rel, std::abs(mc - closed) / closed);
    worst_ratio = std::max(worst_ratio, std::max(mc, closed) / v1_sq);
  }
  const double secs = Seconds(start);
  return {worst_rel <= 0.05 && worst_ratio <= 1.0 && secs < 60.0,
          Format("max rel gap %.4f (<=0.05); max Var/v1^2 %.3f (<=1); "
                 "%.1fs (<60s)",
                 worst_rel, worst_ratio, secs)};
}

Verdict EstimatorEquivalence(std::uint64_t seed) {
  double worst_theta = 0.0;
  double worst_gram = 0.0;
  for (SettingKind kind : {SettingKind::kHomogeneous,
                           SettingKind::kHeterogeneous,
                           SettingKind::kNonlinear}) {
    const Environment env(EnvSetting::Preset(kind), StagedSchedule(10),
                          Rng::Stream(seed, kEnvStream));
    VariantOptions options;
    options.learner.bags = 3;
    auto policy = MakePolicy(PolicyVariant::kRoME, {}, options, env.Shape(),
                             Rng::Stream(seed, kPolicyStream));
    const RunTrace trace = RunPolicy(*policy, env);
    Eigen::MatrixXd gram = policy->state().v0().Dense();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(gram.rows());
    for (size_t n = 0; n < trace.decisions.size(); ++n) {
      const DecisionRecord& r = trace.decisions[n];
      const Eigen::VectorXd row = policy->DesignRow(
          env.Point(static_cast<int>(n)), {r.arm_bar, r.action, r.pi0, r.reward});
      const Eigen::VectorXd phi(
          policy->layout().Select(r.user, r.time).Embed(row));
      gram += r.weight * phi * phi.transpose();
      b += r.weight * r.pseudo_reward * phi;
    }
    const Eigen::VectorXd oracle = gram.ldlt().solve(b);
    worst_theta = std::max(
        worst_theta, (policy->ThetaHat() - oracle).norm() / oracle.norm());
    worst_gram = std::max(
        worst_gram, (policy->state().gram() - gram).cwiseAbs().maxCoeff() /
                        gram.cwiseAbs().maxCoeff());
  }

  // Sherman-Morrison inverse after 1000 updates, without refresh.
  Rng rng(seed);
  const int k = 10;
  const int d = 3;
  GramState state(BuildV0(k, d, 1.0, 1.0, Laplacian(RandomGraph(k, 0.3, rng)),
                          Laplacian(CohesionGraph::Chain(k))),
                  1 << 30);
  for (int n = 0; n < 1000; ++n) {
    const int i = 1 + rng.UniformInt(k);
    const int t = 1 + rng.UniformInt(k - i + 1);
    Eigen::VectorXd x(d);
    x << 1.0, rng.Uniform(-1, 1), rng.Uniform(-1, 1);
    const double pi0 = rng.Uniform(0.1, 0.9);
    state.RankOneUpdate(BuildSelector(i, t, k, d).Embed(x), pi0 * (1 - pi0),
                        rng.Normal());
  }
  const Eigen::MatrixXd inv = state.gram().inverse();
  const double inv_err = (state.Inverse() - inv).cwiseAbs().maxCoeff() /
                         inv.cwiseAbs().maxCoeff();
  return {worst_theta <= 1e-8 && worst_gram <= 1e-8 && inv_err <= 1e-8,
          Format("theta rel err %.2e, V rel err %.2e, inverse rel err after "
                 "1000 updates %.2e (all <=1e-8)",
                 worst_theta, worst_gram, inv_err)};
}

Verdict DeterminantBound(std::uint64_t seed) {
  Rng rng(seed);
  const int k = 8;
  const int d = 3;
  const double lambda = 1.0;
  double det_excess = -1e300;
  double ratio_excess = -1e300;
  int states = 0;
  for (double gamma : {1.0, 2.0, 10.0}) {
    for (int rep = 0; rep < 50; ++rep) {
      const CohesionGraph ug = RandomGraph(k, rng.Uniform(0.1, 0.6), rng);
      const CohesionGraph tg = CohesionGraph::Chain(k);
      GramState state(
          BuildV0(k, d, gamma, lambda, Laplacian(ug), Laplacian(tg)));
      const int updates = rng.UniformInt(200);
      for (int n = 0; n < updates; ++n) {
        const int i = 1 + rng.UniformInt(k);
        const int t = 1 + rng.UniformInt(k - i + 1);
        Eigen::VectorXd x(d);
        x << 1.0, rng.Uniform(-1, 1), rng.Uniform(-1, 1);
        const double pi0 = rng.Uniform(0.1, 0.9);
        state.RankOneUpdate(BuildSelector(i, t, k, d).Embed(x),
                            pi0 * (1 - pi0), rng.Normal());
      }
      const int i = 1 + rng.UniformInt(k);
      const int t = 1 + rng.UniformInt(k - i + 1);
      const BlockCovariance block =
          ComputeBlockCovariance(state, BuildSelector(i, t, k, d));
      det_excess =
          std::max(det_excess, block.log_det_cov - d * std::log(3.0 / gamma));
      const double edges = ug.num_edges() + tg.num_edges();
      const double bound = 2 * d * std::log(3.0 * k * (k + 1) / 8 +
                                            gamma * k + 2 * lambda * edges);
      ratio_excess = std::max(ratio_excess, block.log_det_ratio - bound);
      ++states;
    }
  }
  return {det_excess <= 1e-12 && ratio_excess <= 0.0,
          Format("%d states; max log det - d log(3/gamma) = %.3f (<=0); max "
                 "log-det ratio - bound = %.3f (<=0)",
                 states, det_excess, ratio_excess)};
}

Verdict LaplacianIdentity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rng.UniformInt(15);
    const int d = 1 + rng.UniformInt(5);
    const CohesionGraph g = RandomGraph(n, rng.Uniform(0.1, 0.8), rng);
    std::vector<Eigen::VectorXd> blocks;
    Eigen::MatrixXd theta(n, d);
    for (int i = 0; i < n; ++i) {
      blocks.push_back(
          Eigen::VectorXd::NullaryExpr(d, [&] { return rng.Normal(0, 3); }));
      theta.row(i) = blocks.back().transpose();
    }
    const Eigen::MatrixXd l(Laplacian(g));
    const double trace = (theta.transpose() * l * theta).trace();
    worst = std::max(worst,
                     std::abs(CohesionPenalty(blocks, Laplacian(g)) - trace));
  }

  // Fixed data, increasing lambda.
  const int k = 12;
  const int d = 3;
  const CohesionGraph ug = RandomGraph(k, 0.3, rng);
  const CohesionGraph tg = CohesionGraph::Chain(k);
  struct Obs {
    SparseVector phi;
    double w, y;
  };
  std::vector<Obs> data;
  const ParamLayout layout = ParamLayout::Staged(k, d);
  for (int i = 1; i <= k; ++i) {
    const Eigen::Vector3d user_effect(rng.Normal(0, 2), rng.Normal(0, 2),
                                      rng.Normal(0, 2));
    for (int t = 1; i + t - 1 <= k; ++t) {
      Eigen::VectorXd x(d);
      x << 1.0, rng.Uniform(-1, 1), rng.Uniform(-1, 1);
      data.push_back({layout.Select(i, t).Embed(x), 0.25,
                      x.dot(user_effect) + rng.Normal()});
    }
  }
  const std::vector<double> lambdas = {0.0, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0};
  std::vector<double> disagreement;
  for (double lambda : lambdas) {
    GramState state(BuildV0(k, d, 1.0, lambda, Laplacian(ug), Laplacian(tg)));
    for (const Obs& o : data) state.RankOneUpdate(o.phi, o.w, o.y);
    const Eigen::VectorXd theta = state.Theta();
    double total = 0.0;
    for (const Edge& e : ug.edges()) {
      total += (theta.segment(layout.UserOffset(e.u + 1), d) -
                theta.segment(layout.UserOffset(e.v + 1), d))
                   .squaredNorm();
    }
    for (const Edge& e : tg.edges()) {
      total += (theta.segment(layout.TimeOffset(e.u + 1), d) -
                theta.segment(layout.TimeOffset(e.v + 1), d))
                   .squaredNorm();
    }
    disagreement.push_back(total);
  }
  bool monotone = true;
  for (size_t j = 1; j < disagreement.size(); ++j) {
    monotone &= disagreement[j] <= disagreement[j - 1] * (1 + 1e-12);
  }
  return {worst <= 1e-10 && monotone,
          Format("identity max err %.2e (<=1e-10); edge disagreement "
                 "%.3f at lambda=0 -> %.3f at lambda=100, %s",
                 worst, disagreement.front(), disagreement.back(),
                 monotone ? "weakly decreasing" : "NOT monotone")};
}

Verdict IpsUnbiasedness(std::uint64_t seed) {
  Rng rng(seed);
  const int horizon = 3;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    double logging[horizon], target[horizon], reward[horizon][2];
    double truth = 0.0;
    for (int t = 0; t < horizon; ++t) {
      logging[t] = rng.Uniform(0.05, 0.95);
      target[t] = rng.Uniform(0.0, 1.0);
      reward[t][0] = rng.Normal(0, 2);
      reward[t][1] = rng.Normal(0, 2);
      truth += ((1 - target[t]) * reward[t][0] + target[t] * reward[t][1]) /
               horizon;
    }
    double expectation = 0.0;
    for (int mask = 0; mask < (1 << horizon); ++mask) {
      std::vector<LoggedRecord> log(horizon);
      std::vector<double> probs(horizon);
      double weight = 1.0;
      for (int t = 0; t < horizon; ++t) {
        const int a = (mask >> t) & 1;
        log[t].time = t + 1;
        log[t].context = Eigen::Vector2d::Zero();
        log[t].action = a;
        log[t].propensity = a ? logging[t] : 1 - logging[t];
        log[t].reward = reward[t][a];
        probs[t] = a ? target[t] : 1 - target[t];
        weight *= log[t].propensity;
      }
      expectation += weight * Ips(log, probs);
    }
    worst = std::max(worst, std::abs(expectation - truth));
  }

  // SNIPS: target equal to logging gives the sample mean, constant rewards
  // give the constant, and scaling the target changes nothing.
  int snips_failures = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<LoggedRecord> log(6);
    std::vector<double> same, other, scaled;
    double sample_mean = 0.0;
    for (int t = 0; t < 6; ++t) {
      log[t].time = t + 1;
      log[t].context = Eigen::Vector2d::Zero();
      log[t].action = rng.Bernoulli(0.5) ? 1 : 0;
      log[t].propensity = rng.Uniform(0.05, 0.95);
      log[t].reward = rng.Normal();
      sample_mean += log[t].reward / 6;
      same.push_back(log[t].propensity);
      other.push_back(rng.Uniform(0.05, 1.0));
      scaled.push_back(4.0 * other.back());
    }
    snips_failures += std::abs(Snips(log, same) - sample_mean) > 1e-14;
    snips_failures += std::abs(Snips(log, other) - Snips(log, scaled)) > 1e-14;
    for (auto& r : log) r.reward = -1.75;
    snips_failures += std::abs(Snips(log, other) + 1.75) > 1e-14;
  }
  return {worst <= 1e-12 && snips_failures == 0,
          Format("IPS enumeration max err %.2e (<=1e-12); SNIPS identity "
                 "failures %d/60",
                 worst, snips_failures)};
}

std::map<std::string, double> MeanFinalRegret(
    SettingKind kind, const std::vector<PolicyVariant>& variants,
    ExplorationScale rome_scale, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.environment = EnvSetting::Preset(kind);
  cfg.stages = 60;
  cfg.replications = 10;
  cfg.seed = seed;
  cfg.write_traces = false;
  for (PolicyVariant v : variants) {
    PolicyEntry entry;
    entry.variant = v;
    entry.options.rome_scale = rome_scale;
    cfg.policies.push_back(entry);
  }
  const ExperimentResult r = RunExperiment(cfg, false);
  std::map<std::string, double> out;
  for (size_t p = 0; p < r.policies.size(); ++p) {
    out[r.policies[p]] = r.final_regret.col(static_cast<Eigen::Index>(p)).mean();
  }
  return out;
}

struct Directional {
  bool nonlinear, heterogeneous, homogeneous;
  std::string detail;
};

Directional DirectionalChecks(ExplorationScale rome_scale, std::uint64_t seed) {
  auto nl = MeanFinalRegret(SettingKind::kNonlinear,
                            {PolicyVariant::kRoME, PolicyVariant::kStandard,
                             PolicyVariant::kAC},
                            rome_scale, seed);
  auto het = MeanFinalRegret(SettingKind::kHeterogeneous,
                             {PolicyVariant::kRoME, PolicyVariant::kRoMESU},
                             rome_scale, seed);
  auto hom = MeanFinalRegret(SettingKind::kHomogeneous,
                             {PolicyVariant::kRoME, PolicyVariant::kIntelPooling},
                             rome_scale, seed);
  Directional d;
  d.nonlinear = nl["RoME"] <= 0.8 * nl["Standard"] && nl["RoME"] < nl["AC"];
  d.heterogeneous = het["RoME"] < het["RoME-SU"];
  d.homogeneous = hom["RoME"] <= 1.15 * hom["IntelPooling"];
  d.detail = Format(
      "(i) nonlinear RoME %.2f vs Standard %.2f (ratio %.2f, need <=0.80) and "
      "AC %.2f: %s; (ii) heterogeneous RoME %.2f vs RoME-SU %.2f: %s; (iii) "
      "homogeneous RoME %.2f vs IntelPooling %.2f (ratio %.2f, need <=1.15): "
      "%s",
      nl["RoME"], nl["Standard"], nl["RoME"] / nl["Standard"], nl["AC"],
      d.nonlinear ? "ok" : "miss", het["RoME"], het["RoME-SU"],
      d.heterogeneous ? "ok" : "miss", hom["RoME"], hom["IntelPooling"],
      hom["RoME"] / hom["IntelPooling"], d.homogeneous ? "ok" : "miss");
  return d;
}

bool g_diagnostic = true;

Verdict DirectionalRegret(std::uint64_t seed) {
  const auto start = Clock::now();
  const Directional literal = DirectionalChecks(ExplorationScale::kBeta, seed);
  const double secs = Seconds(start);
  std::string detail = "K=60, 10 reps, lambda=1 delta=0.01 v=1 zeta=10: " +
                       literal.detail + Format("; %.0fs (<900s)", secs);
  if (g_diagnostic) {
    const Directional unit =
        DirectionalChecks(ExplorationScale::kPosterior, seed);
    std::printf("INFO directional_regret with unit posterior scale for RoME "
                "variants: %s\n",
                unit.detail.c_str());
  }
  return {literal.nonlinear && literal.heterogeneous && literal.homogeneous &&
              secs < 900.0,
          detail};
}

Verdict Throughput(std::uint64_t seed) {
  const Environment env(EnvSetting::Preset(SettingKind::kNonlinear),
                        StagedSchedule(200), Rng::Stream(seed, kEnvStream));
  auto policy = MakePolicy(PolicyVariant::kRoMEBLM, {}, {}, env.Shape(),
                           Rng::Stream(seed, kPolicyStream));
  const auto start = Clock::now();
  const RunTrace trace = RunPolicy(*policy, env);
  const double secs = Seconds(start);
  const size_t n = trace.decisions.size();
  return {n == 20100 && secs < 120.0,
          Format("RoME-BLM K=200: %zu decisions (need 20100) in %.1fs (<120s)",
                 n, secs)};
}

Verdict ScheduleBookkeeping(std::uint64_t seed) {
  const Schedule expected = {{1, 1, 1}, {2, 1, 2}, {2, 2, 1},
                             {3, 1, 3}, {3, 2, 2}, {3, 3, 1}};
  const bool order = StagedSchedule(3) == expected;

  double worst_self = 0.0;
  long decisions = 0;
  long outside = 0;
  PolicyConfig config;
  VariantOptions options;
  options.learner.bags = 3;
  for (SettingKind kind : {SettingKind::kHomogeneous,
                           SettingKind::kHeterogeneous,
                           SettingKind::kNonlinear}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Environment env(EnvSetting::Preset(kind), StagedSchedule(15),
                            EnvironmentRng(seed, rep));
      RunTrace optimal;
      for (int n = 0; n < static_cast<int>(env.schedule().size()); ++n) {
        const DecisionPoint p = env.Point(n);
        const OptimalAction best =
            OptimalPolicy(p.arm_features, env.ThetaStar(p.user, p.time),
                          config.pi_min, config.pi_max);
        DecisionRecord r;
        r.stage = p.stage;
        r.user = p.user;
        r.time = p.time;
        r.context = p.context;
        r.arm_features = p.arm_features;
        r.arm_bar = best.arm_bar;
        r.action = best.action;
        r.pi0 = best.pi0;
        optimal.decisions.push_back(std::move(r));
      }
      worst_self = std::max(
          worst_self,
          std::abs(StageRegret(optimal, env, config.pi_min, config.pi_max)
                       .final_regret()));
      for (PolicyVariant v : AllVariants()) {
        auto policy = MakePolicy(v, config, options, env.Shape(),
                                 PolicyRng(seed, rep, VariantName(v)));
        for (const DecisionRecord& r : RunPolicy(*policy, env).decisions) {
          ++decisions;
          outside += !(r.pi0 >= config.pi_min && r.pi0 <= config.pi_max);
        }
      }
    }
  }
  return {order && worst_self <= 1e-12 && outside == 0,
          Format("K=3 order %s; optimal self-regret %.1e; %ld/%ld decisions "
                 "with pi0 outside [0.1, 0.9]",
                 order ? "matches" : "MISMATCH", worst_self, outside,
                 decisions)};
}

}  // namespace
}  // namespace rome

int main(int argc, char** argv) {
  using namespace rome;
  CLI::App app("Acceptance checks");
  std::string only;
  std::uint64_t seed = 20240601;
  bool no_diagnostic = false;
  app.add_option("--only", only, "Run a single criterion");
  app.add_option("--seed", seed, "Base seed");
  app.add_flag("--no-diagnostic", no_diagnostic,
               "Skip the unit-scale directional diagnostic");
  CLI11_PARSE(app, argc, argv);
  g_diagnostic = !no_diagnostic;

  const std::vector<std::pair<std::string, std::function<Verdict(std::uint64_t)>>>
      criteria = {
          {"double_robustness", DoubleRobustness},
          {"variance_identity", VarianceIdentity},
          {"estimator_equivalence", EstimatorEquivalence},
          {"determinant_bound", DeterminantBound},
          {"laplacian_identity", LaplacianIdentity},
          {"ips_unbiasedness", IpsUnbiasedness},
          {"directional_regret", DirectionalRegret},
          {"throughput", Throughput},
          {"schedule_bookkeeping", ScheduleBookkeeping},
      };
  bool found = only.empty();
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && name != only) continue;
    found = true;
    Verdict o;
    try {
      o = check(seed);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.passed;
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion: %s\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
