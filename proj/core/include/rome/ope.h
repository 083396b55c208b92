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

// Off-policy evaluation on logged binary-action data: IPS and SNIPS
// estimators, online replay of candidate policies, user-level bootstrap and
// one-sided paired t-tests.

#ifndef ROME_OPE_H_
#define ROME_OPE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rome/baselines.h"
#include "rome/environment.h"
#include "rome/policy.h"
#include "rome/rng.h"

namespace rome {

struct LoggedRecord {
  int user = 1;
  int time = 1;
  Eigen::VectorXd context;
  int action = 0;           // 0 or 1
  double propensity = 0.5;  // logging probability of `action`
  double reward = 0.0;
  Eigen::VectorXd user_features;  // optional, for the user kNN graph

  // Logging probability of action 0.
  double control_propensity() const {
    return action == 0 ? propensity : 1.0 - propensity;
  }
};

// Throws std::invalid_argument unless the action is binary, the propensity
// lies strictly inside (0,1) and the values are finite.
void ValidateRecord(const LoggedRecord& record);

// Keeps records whose propensity lies in [lo, hi].
std::vector<LoggedRecord> FilterByPropensity(std::span<const LoggedRecord> log,
                                             double lo = 0.01,
                                             double hi = 0.99);

// JSONL: {"user", "time", "context", "action", "propensity", "reward"
// [, "user_features"]} per line.
std::vector<LoggedRecord> ReadLog(const std::filesystem::path& path);
void WriteLog(std::span<const LoggedRecord> log,
              const std::filesystem::path& path);

// (1/T) sum (pi_t / p_t) r_t, with pi_t the target probability of the
// logged action.
double Ips(std::span<const LoggedRecord> log,
           std::span<const double> target_probs);
// sum w_t r_t / sum w_t with w_t = pi_t / p_t. Throws std::domain_error if
// every weight is zero.
double Snips(std::span<const LoggedRecord> log,
             std::span<const double> target_probs);

using TargetPolicy = std::function<double(const LoggedRecord&, int action)>;
std::vector<double> TargetProbabilities(std::span<const LoggedRecord> log,
                                        const TargetPolicy& target);

// Users relabeled 1..N in increasing id order, records sorted into staged
// order (stage = user + time - 1, then user). Throws on duplicate
// (user, time) pairs.
std::vector<LoggedRecord> StagedOrder(std::span<const LoggedRecord> log);

// Study shape of a staged-ordered log. The user graph is the kNN graph on
// user_features when every user has them, otherwise empty.
ProblemShape LogShape(std::span<const LoggedRecord> log, int neighbors = 5);

struct OnlineEvaluation {
  std::vector<double> target_probs;
  double ips = 0.0;
  double snips = 0.0;
};

// Replays a staged-ordered log through `policy`: each record is decided
// (giving the target probability of the logged action) and then observed
// with the logged action, reward and logging control probability.
OnlineEvaluation EvaluateOnline(std::span<const LoggedRecord> log,
                                Policy& policy);

// Draws user indices (0-based, into the distinct users of the log).
using Resampler = std::function<std::vector<int>(int num_users, Rng& rng)>;
std::vector<int> ResampleWithReplacement(int num_users, Rng& rng);
std::vector<int> IdentityResample(int num_users, Rng& rng);

// Builds the resampled log; the k-th drawn user becomes user k+1.
std::vector<LoggedRecord> ResampleUsers(std::span<const LoggedRecord> log,
                                        std::span<const int> users);

struct BootstrapResult {
  std::vector<std::string> policies;
  // replicates x policies: SNIPS minus the mean logged reward of the
  // replicate.
  Eigen::MatrixXd estimates;
};

// Each replicate draws users, then runs every policy online with a fresh
// seed derived from `seed`, the replicate and the policy name.
BootstrapResult BootstrapEval(std::span<const LoggedRecord> log,
                              std::span<const PolicyVariant> policies,
                              const PolicyConfig& config,
                              const VariantOptions& options, int replicates,
                              std::uint64_t seed,
                              const Resampler& resampler =
                                  ResampleWithReplacement,
                              int threads = 1);

// One-sided paired t-test of H1: mean(b - a) > 0. Zero-variance differences
// give p = 1 when the mean difference is <= 0 and p = 0 otherwise. Throws
// std::invalid_argument on length mismatch or fewer than two pairs.
double PairedTTest(std::span<const double> a, std::span<const double> b);

// Entry (r, c): p-value that policy r beats policy c; NaN on the diagonal.
Eigen::MatrixXd PValueMatrix(const BootstrapResult& result);

// Long form: policy,replicate,estimate.
void WriteEstimatesCsv(const BootstrapResult& result,
                       const std::filesystem::path& path);
void WritePValueCsv(const BootstrapResult& result,
                    const std::filesystem::path& path);

// Logs an environment's schedule under a fixed logging policy that treats
// with probability p_treat(s).
std::vector<LoggedRecord> GenerateLog(
    const Environment& env,
    const std::function<double(const Eigen::VectorXd&)>& p_treat, Rng& rng);

// Stable 64-bit FNV-1a hash, used to derive per-policy seed streams.
std::uint64_t StableHash(const std::string& text);

}  // namespace rome

#endif  // ROME_OPE_H_
