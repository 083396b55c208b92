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

// rome: simulation, off-policy evaluation and validation front end.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rome/environment.h"
#include "rome/experiment.h"
#include "rome/ope.h"
#include "rome/stats.h"
#include "rome/validate.h"

namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SimulateArgs {
  std::string config;
  std::string setting;
  int stages = 0;
  int reps = 0;
  long long seed = -1;
  std::string out;
  int threads = -1;
  std::string policies;
  bool no_traces = false;
};

int Simulate(const SimulateArgs& args) {
  rome::ExperimentConfig cfg;
  if (!args.config.empty()) {
    cfg = rome::LoadConfig(args.config);
  } else {
    for (rome::PolicyVariant v : rome::AllVariants()) {
      cfg.policies.push_back({v, {}, {}});
    }
  }
  if (!args.setting.empty()) {
    cfg.environment =
        rome::EnvSetting::Preset(rome::ParseSetting(args.setting));
  }
  if (args.stages > 0) {
    cfg.stages = args.stages;
    cfg.users.reset();
    cfg.times.reset();
  }
  if (args.reps > 0) cfg.replications = args.reps;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.out.empty()) cfg.output = args.out;
  if (args.threads >= 0) cfg.threads = args.threads;
  if (args.no_traces) cfg.write_traces = false;
  if (!args.policies.empty()) {
    const rome::PolicyEntry defaults =
        cfg.policies.empty() ? rome::PolicyEntry{} : cfg.policies.front();
    cfg.policies.clear();
    for (const auto& tag : SplitList(args.policies)) {
      rome::PolicyEntry e = defaults;
      e.variant = rome::ParseVariant(tag);
      cfg.policies.push_back(e);
    }
  }
  const rome::ExperimentResult result = rome::RunExperiment(cfg, true);
  std::printf("%-18s %12s %10s\n", "policy", "mean_regret", "se");
  for (size_t p = 0; p < result.policies.size(); ++p) {
    std::vector<double> col(result.final_regret.rows());
    for (Eigen::Index r = 0; r < result.final_regret.rows(); ++r) {
      col[r] = result.final_regret(r, p);
    }
    const double se =
        std::sqrt(rome::SampleVariance(col) / static_cast<double>(col.size()));
    std::printf("%-18s %12.4f %10.4f\n", result.policies[p].c_str(),
                rome::Mean(col), se);
  }
  std::printf("results written to %s\n", cfg.output.string().c_str());
  return 0;
}

struct OpeArgs {
  std::string log;
  std::string policies = "RoME,RoME-SU,RoME-BLM,NNR-Linear,Standard,AC";
  int bootstrap = 100;
  long long seed = 1;
  std::string out = "ope";
  int threads = 0;
  double clip_lo = 0.01;
  double clip_hi = 0.99;
};

int Ope(const OpeArgs& args) {
  auto log = rome::FilterByPropensity(rome::ReadLog(args.log), args.clip_lo,
                                      args.clip_hi);
  log = rome::StagedOrder(log);
  std::vector<rome::PolicyVariant> variants;
  for (const auto& tag : SplitList(args.policies)) {
    variants.push_back(rome::ParseVariant(tag));
  }
  if (variants.empty()) throw std::invalid_argument("no policies given");
  const rome::BootstrapResult result = rome::BootstrapEval(
      log, variants, rome::PolicyConfig{}, rome::VariantOptions{},
      args.bootstrap, static_cast<std::uint64_t>(args.seed),
      rome::ResampleWithReplacement, rome::ResolveThreads(args.threads));
  std::filesystem::create_directories(args.out);
  rome::WriteEstimatesCsv(result, std::filesystem::path(args.out) /
                                      "estimates.csv");
  rome::WritePValueCsv(result,
                       std::filesystem::path(args.out) / "pvalues.csv");
  std::printf("%zu records, %d replicates\n", log.size(), args.bootstrap);
  std::printf("%-18s %12s\n", "policy", "mean_gain");
  for (size_t p = 0; p < result.policies.size(); ++p) {
    std::printf("%-18s %12.5f\n", result.policies[p].c_str(),
                result.estimates.col(p).mean());
  }
  return 0;
}

struct TruthArgs {
  std::string setting = "heterogeneous";
  int stages = 200;
  long long seed = 1;
  int replication = 0;
  int grid = 101;
  std::string out = "truth";
};

int EmitTruth(const TruthArgs& args) {
  rome::ExperimentConfig cfg;
  cfg.environment = rome::EnvSetting::Preset(rome::ParseSetting(args.setting));
  cfg.stages = args.stages;
  const rome::Environment env(
      cfg.environment, cfg.MakeSchedule(),
      rome::EnvironmentRng(static_cast<std::uint64_t>(args.seed),
                           args.replication));
  std::filesystem::create_directories(args.out);
  env.WriteThetaCsv(std::filesystem::path(args.out) / "theta.csv");
  env.WriteBaselineCsv(std::filesystem::path(args.out) / "baseline.csv",
                       args.grid);
  std::printf("wrote theta.csv and baseline.csv to %s\n", args.out.c_str());
  return 0;
}

struct SynthArgs {
  std::string setting = "heterogeneous";
  int stages = 40;
  long long seed = 1;
  double p_treat = 0.5;
  std::string out = "log.jsonl";
};

int SynthLog(const SynthArgs& args) {
  const rome::Environment env(
      rome::EnvSetting::Preset(rome::ParseSetting(args.setting)),
      rome::StagedSchedule(args.stages),
      rome::EnvironmentRng(static_cast<std::uint64_t>(args.seed), 0));
  rome::Rng rng = rome::Rng::Stream(args.seed, 0x6c6f67);
  const double p = args.p_treat;
  const auto log =
      rome::GenerateLog(env, [p](const Eigen::VectorXd&) { return p; }, rng);
  rome::WriteLog(log, args.out);
  std::printf("wrote %zu records to %s\n", log.size(), args.out.c_str());
  return 0;
}

int Validate(long long seed) {
  const auto results = rome::RunInvariantSuite(static_cast<std::uint64_t>(seed));
  for (const auto& r : results) {
    std::printf("%s %-32s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
  }
  return rome::AllPassed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RoME mixed-effects bandit simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a regret experiment");
  s->add_option("config", sim.config, "YAML experiment config")
      ->check(CLI::ExistingFile);
  s->add_option("--setting", sim.setting,
                "homogeneous, heterogeneous or nonlinear");
  s->add_option("--stages", sim.stages, "Number of stages K")
      ->check(CLI::PositiveNumber);
  s->add_option("--reps", sim.reps, "Replications")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", sim.seed, "Base seed")->check(CLI::NonNegativeNumber);
  s->add_option("--out", sim.out, "Output directory");
  s->add_option("--threads", sim.threads, "Worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--policies", sim.policies, "Comma-separated policy tags");
  s->add_flag("--no-traces", sim.no_traces, "Skip per-decision JSONL traces");

  OpeArgs ope;
  auto* o = app.add_subcommand("ope", "Bootstrap off-policy evaluation");
  o->add_option("log", ope.log, "Logged data (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  o->add_option("--policies", ope.policies, "Comma-separated policy tags");
  o->add_option("--bootstrap", ope.bootstrap, "Bootstrap replicates B")
      ->check(CLI::PositiveNumber);
  o->add_option("--seed", ope.seed, "Seed")->check(CLI::NonNegativeNumber);
  o->add_option("--out", ope.out, "Output directory");
  o->add_option("--threads", ope.threads, "Worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  o->add_option("--clip-lo", ope.clip_lo, "Drop propensities below");
  o->add_option("--clip-hi", ope.clip_hi, "Drop propensities above");

  long long validate_seed = 7;
  auto* v = app.add_subcommand("validate", "Run the invariant suite");
  v->add_option("--seed", validate_seed, "Seed")
      ->check(CLI::NonNegativeNumber);

  TruthArgs truth;
  auto* t = app.add_subcommand("emit-truth",
                               "Write true effects and baseline grid");
  t->add_option("--setting", truth.setting, "Setting");
  t->add_option("--stages", truth.stages, "Number of stages K")
      ->check(CLI::PositiveNumber);
  t->add_option("--seed", truth.seed, "Base seed")
      ->check(CLI::NonNegativeNumber);
  t->add_option("--replication", truth.replication, "Replication index")
      ->check(CLI::NonNegativeNumber);
  t->add_option("--grid", truth.grid, "Grid points per side")
      ->check(CLI::Range(2, 10000));
  t->add_option("--out", truth.out, "Output directory");

  SynthArgs synth;
  auto* g = app.add_subcommand("synth-log",
                               "Log a simulated study under fixed "
                               "randomization");
  g->add_option("--setting", synth.setting, "Setting");
  g->add_option("--stages", synth.stages, "Number of stages K")
      ->check(CLI::PositiveNumber);
  g->add_option("--seed", synth.seed, "Seed")->check(CLI::NonNegativeNumber);
  g->add_option("--p-treat", synth.p_treat, "Treatment probability")
      ->check(CLI::Range(0.0, 1.0));
  g->add_option("--out", synth.out, "Output JSONL path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) return Simulate(sim);
    if (*o) return Ope(ope);
    if (*v) return Validate(validate_seed);
    if (*t) return EmitTruth(truth);
    if (*g) return SynthLog(synth);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
