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

#include "rome/validate.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "rome/baselines.h"
#include "rome/environment.h"
#include "rome/gram.h"
#include "rome/graph.h"
#include "rome/layout.h"
#include "rome/ope.h"
#include "rome/regret.h"
#include "rome/reward_model.h"
#include "rome/rng.h"
#include "rome/runner.h"

namespace rome {
namespace {

std::string Fmt(const char* label, double value) {
  std::ostringstream out;
  out.precision(3);
  out << label << '=' << value;
  return out.str();
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

CheckResult PseudoRewardUnbiased(Rng& rng) {
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const double m0 = rng.Uniform(-3, 3);
    const double delta = rng.Uniform(-2, 2);
    const double fa = rng.Uniform(-3, 3);
    const double f0 = rng.Uniform(-3, 3);
    const double pi0 = rng.Uniform(0.05, 0.95);
    const double mean =
        pi0 * MakePseudoReward(fa, f0, 1, 0, m0, pi0).value +
        (1 - pi0) * MakePseudoReward(fa, f0, 1, 1, m0 + delta, pi0).value;
    worst = std::max(worst, std::abs(mean - delta));
  }
  return {"pseudo_reward.unbiased", worst <= 1e-12, Fmt("max_err", worst)};
}

CheckResult VarianceIdentity(Rng& rng) {
  const double m = 2.0;
  const double sigma2 = 0.7;
  const double pi_min = 0.1;
  const double pi_max = 0.9;
  const double v1_sq =
      PseudoRewardVarianceBound(sigma2, m, pi_min, pi_max);
  double worst_gap = 0.0;
  double worst_ratio = 0.0;
  for (int c = 0; c < 100; ++c) {
    const double r0 = rng.Uniform(-m, m);
    const double ra = rng.Uniform(-m, m);
    const double fa = rng.Uniform(-m, m);
    const double f0 = rng.Uniform(-m, m);
    const double pi0 = rng.Uniform(pi_min, pi_max);
    const double delta = ra - r0;
    // Noise enters linearly with coefficient 1/(1{A=1} - pi0).
    const double v0 = MakePseudoReward(fa, f0, 1, 0, r0, pi0).value;
    const double v1 = MakePseudoReward(fa, f0, 1, 1, ra, pi0).value;
    const double second = pi0 * (v0 * v0 + sigma2 / (pi0 * pi0)) +
                          (1 - pi0) * (v1 * v1 + sigma2 / ((1 - pi0) *
                                                           (1 - pi0)));
    const double var = second - delta * delta;
    const double closed =
        PseudoRewardVariance(ra, r0, fa, f0, pi0, sigma2);
    worst_gap = std::max(worst_gap, std::abs(var - closed) / closed);
    worst_ratio = std::max(worst_ratio, var / v1_sq);
  }
  return {"pseudo_reward.variance",
          worst_gap <= 1e-10 && worst_ratio <= 1.0,
          Fmt("max_rel_gap", worst_gap) + " " +
              Fmt("max_var_over_v1sq", worst_ratio)};
}

CheckResult IncrementalMatchesDense(Rng& rng) {
  const int k = 4;
  const int d = 3;
  const PenaltyMatrix v0 =
      BuildV0(k, d, 1.0, 1.0, Laplacian(RandomGraph(k, 0.5, rng)),
              Laplacian(CohesionGraph::Chain(k)));
  GramState state(v0, 250);
  Eigen::MatrixXd v = v0.Dense();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(v0.dim());
  for (int n = 0; n < 1000; ++n) {
    const int i = 1 + rng.UniformInt(k);
    const int t = 1 + rng.UniformInt(k - i + 1);
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = rng.Normal();
    const SparseVector phi = BuildSelector(i, t, k, d).Embed(x);
    const double w = rng.Uniform(0.05, 0.25);
    const double y = rng.Normal(0.0, 3.0);
    state.RankOneUpdate(phi, w, y);
    const Eigen::VectorXd dense_phi(phi);
    v += w * dense_phi * dense_phi.transpose();
    b += w * y * dense_phi;
  }
  const Eigen::VectorXd oracle = v.ldlt().solve(b);
  const double theta_err =
      (state.Theta() - oracle).norm() / std::max(oracle.norm(), 1e-300);
  const Eigen::MatrixXd inv = v.inverse();
  const double inv_err = (state.Inverse() - inv).cwiseAbs().maxCoeff() /
                         inv.cwiseAbs().maxCoeff();
  return {"gram.incremental_matches_dense",
          theta_err <= 1e-8 && inv_err <= 1e-8,
          Fmt("theta_rel_err", theta_err) + " " + Fmt("inverse_rel_err",
                                                      inv_err)};
}

CheckResult DeterminantBound(Rng& rng) {
  const int k = 6;
  const int d = 3;
  double worst_det = -1e300;
  double worst_ratio = -1e300;
  double min_ratio = 1e300;
  for (double gamma : {1.0, 2.0, 10.0}) {
    for (int rep = 0; rep < 5; ++rep) {
      const CohesionGraph ug = RandomGraph(k, 0.4, rng);
      const CohesionGraph tg = CohesionGraph::Chain(k);
      const double lambda = 1.0;
      GramState state(
          BuildV0(k, d, gamma, lambda, Laplacian(ug), Laplacian(tg)));
      for (int n = 0; n < 30; ++n) {
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
      worst_det =
          std::max(worst_det, block.log_det_cov - d * std::log(3.0 / gamma));
      const double edges = ug.num_edges() + tg.num_edges();
      const double bound =
          2 * d * std::log(3.0 * k * (k + 1) / 8 + gamma * k +
                           2 * lambda * edges);
      worst_ratio = std::max(worst_ratio, block.log_det_ratio - bound);
      min_ratio = std::min(min_ratio, block.log_det_ratio);
    }
  }
  return {"gram.determinant_bound",
          worst_det <= 1e-12 && worst_ratio <= 0.0 && min_ratio >= -1e-9,
          Fmt("max_logdet_excess", worst_det) + " " +
              Fmt("min_logdet_ratio", min_ratio)};
}

CheckResult LaplacianIdentity(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + rng.UniformInt(8);
    const int d = 1 + rng.UniformInt(4);
    const CohesionGraph g = RandomGraph(n, 0.4, rng);
    std::vector<Eigen::VectorXd> blocks;
    Eigen::MatrixXd theta(n, d);
    for (int i = 0; i < n; ++i) {
      blocks.push_back(Eigen::VectorXd::NullaryExpr(
          d, [&] { return rng.Normal(); }));
      theta.row(i) = blocks.back().transpose();
    }
    const SparseMatrix l = Laplacian(g);
    const double trace =
        (theta.transpose() * Eigen::MatrixXd(l) * theta).trace();
    double edge_sum = 0.0;
    for (const Edge& e : g.edges()) {
      edge_sum += (blocks[e.u] - blocks[e.v]).squaredNorm();
    }
    const double penalty = CohesionPenalty(blocks, l);
    worst = std::max({worst, std::abs(penalty - trace),
                      std::abs(edge_sum - trace)});
  }
  return {"graph.laplacian_identity", worst <= 1e-10, Fmt("max_err", worst)};
}

CheckResult IpsEnumeration(Rng& rng) {
  const int horizon = 3;
  std::vector<LoggedRecord> base(horizon);
  double logging[horizon], target[horizon], reward[horizon][2];
  double truth = 0.0;
  for (int t = 0; t < horizon; ++t) {
    base[t].user = 1;
    base[t].time = t + 1;
    base[t].context = Eigen::Vector2d(rng.Uniform(-1, 1), rng.Uniform(-1, 1));
    logging[t] = rng.Uniform(0.1, 0.9);
    target[t] = rng.Uniform(0.0, 1.0);
    reward[t][0] = rng.Normal();
    reward[t][1] = rng.Normal();
    truth += (1 - target[t]) * reward[t][0] + target[t] * reward[t][1];
  }
  truth /= horizon;
  double expectation = 0.0;
  for (int mask = 0; mask < (1 << horizon); ++mask) {
    std::vector<LoggedRecord> log = base;
    std::vector<double> probs(horizon);
    double weight = 1.0;
    for (int t = 0; t < horizon; ++t) {
      const int a = (mask >> t) & 1;
      log[t].action = a;
      log[t].propensity = a ? logging[t] : 1 - logging[t];
      log[t].reward = reward[t][a];
      probs[t] = a ? target[t] : 1 - target[t];
      weight *= log[t].propensity;
    }
    expectation += weight * Ips(log, probs);
  }
  const double err = std::abs(expectation - truth);

  // SNIPS: target equal to logging gives the sample mean; constant rewards
  // give the constant.
  std::vector<LoggedRecord> log = base;
  std::vector<double> same(horizon), other(horizon);
  double sample_mean = 0.0;
  for (int t = 0; t < horizon; ++t) {
    log[t].action = t % 2;
    log[t].propensity = log[t].action ? logging[t] : 1 - logging[t];
    log[t].reward = reward[t][log[t].action];
    sample_mean += log[t].reward / horizon;
    same[t] = log[t].propensity;
    other[t] = rng.Uniform(0.1, 1.0);
  }
  const bool snips_mean = std::abs(Snips(log, same) - sample_mean) <= 1e-14;
  for (auto& r : log) r.reward = 2.5;
  const bool snips_const = std::abs(Snips(log, other) - 2.5) <= 1e-14;
  return {"ope.ips_enumeration", err <= 1e-12 && snips_mean && snips_const,
          Fmt("ips_err", err)};
}

CheckResult StagedOrder() {
  const Schedule expected = {{1, 1, 1}, {2, 1, 2}, {2, 2, 1},
                             {3, 1, 3}, {3, 2, 2}, {3, 3, 1}};
  const bool ok = StagedSchedule(3) == expected;
  return {"schedule.staged_order", ok, ok ? "K=3" : "order mismatch"};
}

CheckResult OptimalSelfRegret(std::uint64_t seed) {
  const double pi_min = 0.1;
  const double pi_max = 0.9;
  const Environment env(EnvSetting::Preset(SettingKind::kHeterogeneous),
                        StagedSchedule(8), Rng::Stream(seed, kEnvStream));
  RunTrace trace;
  trace.policy = "optimal";
  for (int n = 0; n < static_cast<int>(env.schedule().size()); ++n) {
    const DecisionPoint p = env.Point(n);
    const OptimalAction best = OptimalPolicy(
        p.arm_features, env.ThetaStar(p.user, p.time), pi_min, pi_max);
    DecisionRecord r;
    r.stage = p.stage;
    r.user = p.user;
    r.time = p.time;
    r.context = p.context;
    r.arm_features = p.arm_features;
    r.arm_bar = best.arm_bar;
    r.action = best.action;
    r.pi0 = best.pi0;
    trace.decisions.push_back(std::move(r));
  }
  const double regret =
      StageRegret(trace, env, pi_min, pi_max).final_regret();
  return {"regret.optimal_self_regret", std::abs(regret) <= 1e-12,
          Fmt("regret", regret)};
}

CheckResult ClippedProbabilities(std::uint64_t seed) {
  const Environment env(EnvSetting::Preset(SettingKind::kNonlinear),
                        StagedSchedule(10), Rng::Stream(seed, kEnvStream));
  PolicyConfig config;
  VariantOptions options;
  options.learner.bags = 3;
  long count = 0;
  long bad = 0;
  for (PolicyVariant v : AllVariants()) {
    auto policy = MakePolicy(v, config, options, env.Shape(),
                             Rng::Stream(seed, kPolicyStream));
    for (const auto& r : RunPolicy(*policy, env).decisions) {
      ++count;
      if (!(r.pi0 >= config.pi_min && r.pi0 <= config.pi_max)) ++bad;
    }
  }
  return {"policy.clipped_probabilities", bad == 0,
          std::to_string(bad) + "/" + std::to_string(count) +
              " outside [pi_min, pi_max]"};
}

CheckResult Guard(const std::string& name,
                  const std::function<CheckResult()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> RunInvariantSuite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(Guard("pseudo_reward.unbiased",
                      [&] { return PseudoRewardUnbiased(rng); }));
  out.push_back(Guard("pseudo_reward.variance",
                      [&] { return VarianceIdentity(rng); }));
  out.push_back(Guard("gram.incremental_matches_dense",
                      [&] { return IncrementalMatchesDense(rng); }));
  out.push_back(Guard("gram.determinant_bound",
                      [&] { return DeterminantBound(rng); }));
  out.push_back(Guard("graph.laplacian_identity",
                      [&] { return LaplacianIdentity(rng); }));
  out.push_back(
      Guard("ope.ips_enumeration", [&] { return IpsEnumeration(rng); }));
  out.push_back(Guard("schedule.staged_order", [] { return StagedOrder(); }));
  out.push_back(Guard("regret.optimal_self_regret",
                      [&] { return OptimalSelfRegret(seed); }));
  out.push_back(Guard("policy.clipped_probabilities",
                      [&] { return ClippedProbabilities(seed); }));
  return out;
}

bool AllPassed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace rome
