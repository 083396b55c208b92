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

// Experiment configuration and orchestration: replications x policies run on
// a worker pool, with traces and regret tables written deterministically.
//
// Output directory layout:
//   traces/<policy>_rep<r>.jsonl   one decision per line
//   regret.csv                     policy,replication,stage,cum_regret
//   summary.csv                    policy,replication,final_regret
//   pairwise.csv                   policy,opponent,wins,ties,replications,
//                                  win_percent,p_value
//   config.yaml                    the resolved configuration

#ifndef ROME_EXPERIMENT_H_
#define ROME_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rome/baselines.h"
#include "rome/environment.h"
#include "rome/policy.h"
#include "rome/regret.h"

namespace rome {

struct PolicyEntry {
  PolicyVariant variant = PolicyVariant::kRoME;
  PolicyConfig config;
  VariantOptions options;
  std::string label() const { return VariantName(variant); }
};

struct ExperimentConfig {
  EnvSetting environment = EnvSetting::Preset(SettingKind::kHomogeneous);
  int stages = 200;
  // Rectangular design when both are set; otherwise staged with `stages`.
  std::optional<int> users;
  std::optional<int> times;
  int replications = 50;
  std::uint64_t seed = 1;
  // 0 means: ROME_THREADS from the environment, else hardware concurrency.
  int threads = 0;
  std::filesystem::path output = "results";
  bool write_traces = true;
  std::vector<PolicyEntry> policies;

  Schedule MakeSchedule() const;
  // Throws std::invalid_argument on an invalid configuration.
  void Validate() const;
};

// YAML configuration; see configs/ for the schema. Throws
// std::invalid_argument with the offending key on bad input.
ExperimentConfig ParseConfig(const std::string& yaml_text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
std::string DumpConfig(const ExperimentConfig& config);

int ResolveThreads(int requested);

// Deterministic seeds: replication r uses base seed + r; the environment and
// each policy draw from separate streams of it.
Rng EnvironmentRng(std::uint64_t base_seed, int replication);
Rng PolicyRng(std::uint64_t base_seed, int replication,
              const std::string& policy);

struct PairwiseRow {
  std::string policy;
  std::string opponent;
  int wins = 0;
  int ties = 0;
  int replications = 0;
  double win_percent = 0.0;
  double p_value = 1.0;  // two-sided paired t-test on final regret
};

struct ExperimentResult {
  std::vector<std::string> policies;
  // final_regret(r, p)
  Eigen::MatrixXd final_regret;
  // curves[p][r]
  std::vector<std::vector<RegretCurve>> curves;
  std::vector<PairwiseRow> pairwise;
};

// Runs one (policy, replication) cell.
RunTrace RunCell(const ExperimentConfig& config, const PolicyEntry& policy,
                 int replication, RegretCurve* curve);

// Runs every cell and writes the output files when `write_files` is true.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               bool write_files = true);

// Lower regret wins. Two-sided paired t-test p-values; identical samples
// give p = 1.
std::vector<PairwiseRow> PairwiseTable(const std::vector<std::string>& names,
                                       const Eigen::MatrixXd& final_regret);

double TwoSidedPairedTTest(std::span<const double> a,
                           std::span<const double> b);

}  // namespace rome

#endif  // ROME_EXPERIMENT_H_
