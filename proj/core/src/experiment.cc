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

#include "rome/experiment.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "rome/ope.h"
#include "rome/parallel.h"
#include "rome/runner.h"
#include "rome/stats.h"

namespace rome {
namespace {

void CheckKeys(const YAML::Node& node, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!node.IsMap()) throw std::invalid_argument(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const YAML::Node& node, const char* key, T& out) {
  if (node[key]) {
    try {
      out = node[key].as<T>();
    } catch (const YAML::Exception&) {
      throw std::invalid_argument(std::string("bad value for '") + key + "'");
    }
  }
}

const std::set<std::string> kPolicyKeys = {
    "tag",         "pi_min",           "pi_max",
    "delta",       "v",                "zeta",
    "gamma",       "lambda",           "perturbation",
    "dof",         "rome_exploration", "baseline_exploration",
    "posterior_scale", "learner",      "folds",
    "blm_degree",  "intelpooling",     "fourier",
    "batch",       "audit_folds"};

void ApplyPolicyNode(const YAML::Node& node, PolicyConfig& c,
                     VariantOptions& o, const std::string& where) {
  CheckKeys(node, kPolicyKeys, where);
  Read(node, "pi_min", c.pi_min);
  Read(node, "pi_max", c.pi_max);
  Read(node, "delta", c.delta);
  Read(node, "v", c.v);
  Read(node, "zeta", c.zeta);
  Read(node, "gamma", c.gamma);
  Read(node, "lambda", c.lambda);
  Read(node, "dof", c.ts.dof);
  if (node["perturbation"]) {
    c.ts = ParseTsDistribution(node["perturbation"].as<std::string>(),
                               c.ts.dof);
  }
  if (node["rome_exploration"]) {
    o.rome_scale =
        ParseExplorationScale(node["rome_exploration"].as<std::string>());
  }
  if (node["baseline_exploration"]) {
    o.baseline_scale =
        ParseExplorationScale(node["baseline_exploration"].as<std::string>());
  }
  Read(node, "posterior_scale", o.posterior_scale);
  Read(node, "blm_degree", o.blm_degree);
  Read(node, "batch", o.batch);
  Read(node, "audit_folds", o.audit_folds);
  if (const YAML::Node l = node["learner"]) {
    CheckKeys(l,
              {"kind", "bags", "subsample", "degree", "penalty", "max_depth",
               "min_samples_split", "min_samples_leaf", "min_gain_fraction",
               "bound", "bound_multiplier"},
              where + ".learner");
    if (l["kind"]) o.learner.kind = ParseLearnerKind(l["kind"].as<std::string>());
    Read(l, "bags", o.learner.bags);
    Read(l, "subsample", o.learner.subsample);
    Read(l, "degree", o.learner.ridge_degree);
    Read(l, "penalty", o.learner.ridge_penalty);
    Read(l, "max_depth", o.learner.tree.max_depth);
    Read(l, "min_samples_split", o.learner.tree.min_samples_split);
    Read(l, "min_samples_leaf", o.learner.tree.min_samples_leaf);
    Read(l, "min_gain_fraction", o.learner.tree.min_gain_fraction);
    Read(l, "bound_multiplier", o.learner.bound.multiplier);
    if (l["bound"]) {
      if (l["bound"].IsNull()) {
        o.learner.bound.fixed.reset();
      } else {
        o.learner.bound.fixed = l["bound"].as<double>();
      }
    }
  }
  if (const YAML::Node f = node["folds"]) {
    CheckKeys(f, {"mode", "count"}, where + ".folds");
    if (f["mode"]) o.fold_mode = ParseFoldMode(f["mode"].as<std::string>());
    Read(f, "count", o.num_folds);
  }
  if (const YAML::Node ip = node["intelpooling"]) {
    CheckKeys(ip, {"shared", "user", "time"}, where + ".intelpooling");
    PenaltySpec p = o.intelpooling_penalty.value_or(
        PenaltySpec{c.gamma, c.gamma, c.gamma, 0.0, 0.0});
    Read(ip, "shared", p.shared_ridge);
    Read(ip, "user", p.user_ridge);
    Read(ip, "time", p.time_ridge);
    o.intelpooling_penalty = p;
  }
  if (const YAML::Node f = node["fourier"]) {
    CheckKeys(f, {"features", "bandwidth"}, where + ".fourier");
    Read(f, "features", o.fourier_features);
    Read(f, "bandwidth", o.fourier_bandwidth);
  }
}

void EmitPolicy(YAML::Emitter& e, const PolicyEntry& p) {
  const PolicyConfig& c = p.config;
  const VariantOptions& o = p.options;
  e << YAML::BeginMap;
  e << YAML::Key << "tag" << YAML::Value << p.label();
  e << YAML::Key << "pi_min" << YAML::Value << c.pi_min;
  e << YAML::Key << "pi_max" << YAML::Value << c.pi_max;
  e << YAML::Key << "delta" << YAML::Value << c.delta;
  e << YAML::Key << "v" << YAML::Value << c.v;
  e << YAML::Key << "zeta" << YAML::Value << c.zeta;
  e << YAML::Key << "gamma" << YAML::Value << c.gamma;
  e << YAML::Key << "lambda" << YAML::Value << c.lambda;
  e << YAML::Key << "perturbation" << YAML::Value << TsDistributionName(c.ts);
  e << YAML::Key << "dof" << YAML::Value << c.ts.dof;
  e << YAML::Key << "rome_exploration" << YAML::Value
    << ExplorationScaleName(o.rome_scale);
  e << YAML::Key << "baseline_exploration" << YAML::Value
    << ExplorationScaleName(o.baseline_scale);
  e << YAML::Key << "posterior_scale" << YAML::Value << o.posterior_scale;
  e << YAML::Key << "batch" << YAML::Value << o.batch;
  e << YAML::Key << "learner" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << LearnerKindName(o.learner.kind);
  e << YAML::Key << "bags" << YAML::Value << o.learner.bags;
  e << YAML::Key << "subsample" << YAML::Value << o.learner.subsample;
  e << YAML::Key << "degree" << YAML::Value << o.learner.ridge_degree;
  e << YAML::Key << "penalty" << YAML::Value << o.learner.ridge_penalty;
  e << YAML::Key << "max_depth" << YAML::Value << o.learner.tree.max_depth;
  e << YAML::Key << "min_samples_split" << YAML::Value
    << o.learner.tree.min_samples_split;
  e << YAML::Key << "min_samples_leaf" << YAML::Value
    << o.learner.tree.min_samples_leaf;
  e << YAML::Key << "min_gain_fraction" << YAML::Value
    << o.learner.tree.min_gain_fraction;
  e << YAML::Key << "bound" << YAML::Value;
  if (o.learner.bound.fixed) {
    e << *o.learner.bound.fixed;
  } else {
    e << YAML::Null;
  }
  e << YAML::Key << "bound_multiplier" << YAML::Value
    << o.learner.bound.multiplier;
  e << YAML::EndMap;
  e << YAML::Key << "folds" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << FoldModeName(o.fold_mode);
  e << YAML::Key << "count" << YAML::Value << o.num_folds;
  e << YAML::EndMap;
  e << YAML::Key << "blm_degree" << YAML::Value << o.blm_degree;
  if (o.intelpooling_penalty) {
    e << YAML::Key << "intelpooling" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "shared" << YAML::Value
      << o.intelpooling_penalty->shared_ridge;
    e << YAML::Key << "user" << YAML::Value
      << o.intelpooling_penalty->user_ridge;
    e << YAML::Key << "time" << YAML::Value
      << o.intelpooling_penalty->time_ridge;
    e << YAML::EndMap;
  }
  e << YAML::Key << "fourier" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "features" << YAML::Value << o.fourier_features;
  e << YAML::Key << "bandwidth" << YAML::Value << o.fourier_bandwidth;
  e << YAML::EndMap;
  e << YAML::EndMap;
}

void WriteCsvs(const ExperimentConfig& config, const ExperimentResult& result) {
  const auto& dir = config.output;
  std::ofstream regret(dir / "regret.csv");
  std::ofstream summary(dir / "summary.csv");
  std::ofstream pairwise(dir / "pairwise.csv");
  if (!regret || !summary || !pairwise) {
    throw std::runtime_error("cannot write results under " + dir.string());
  }
  regret.precision(17);
  summary.precision(17);
  pairwise.precision(17);
  regret << "policy,replication,stage,cum_regret\n";
  summary << "policy,replication,final_regret\n";
  for (size_t p = 0; p < result.policies.size(); ++p) {
    for (size_t r = 0; r < result.curves[p].size(); ++r) {
      const RegretCurve& c = result.curves[p][r];
      for (size_t k = 0; k < c.cumulative.size(); ++k) {
        regret << result.policies[p] << ',' << r << ',' << k + 1 << ','
               << c.cumulative[k] << '\n';
      }
      summary << result.policies[p] << ',' << r << ',' << c.final_regret()
              << '\n';
    }
  }
  pairwise << "policy,opponent,wins,ties,replications,win_percent,p_value\n";
  for (const auto& row : result.pairwise) {
    pairwise << row.policy << ',' << row.opponent << ',' << row.wins << ','
             << row.ties << ',' << row.replications << ',' << row.win_percent
             << ',' << row.p_value << '\n';
  }
}

}  // namespace

Schedule ExperimentConfig::MakeSchedule() const {
  if (users && times) return RectangularSchedule(*users, *times);
  return StagedSchedule(stages);
}

void ExperimentConfig::Validate() const {
  if (users.has_value() != times.has_value()) {
    throw std::invalid_argument("rectangular design needs users and times");
  }
  if (!users && stages < 1) throw std::invalid_argument("stages must be >= 1");
  if (users && (*users < 1 || *times < 1)) {
    throw std::invalid_argument("users and times must be >= 1");
  }
  if (replications < 1) {
    throw std::invalid_argument("replications must be >= 1");
  }
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (policies.empty()) throw std::invalid_argument("no policies configured");
  std::set<std::string> seen;
  for (const auto& p : policies) {
    p.config.Validate();
    if (!seen.insert(p.label()).second) {
      throw std::invalid_argument("policy listed twice: " + p.label());
    }
  }
}

ExperimentConfig ParseConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("malformed YAML: ") + e.what());
  }
  CheckKeys(root,
            {"setting", "stages", "rectangular", "replications", "seed",
             "threads", "output", "write_traces", "environment", "policy",
             "policies"},
            "config");
  ExperimentConfig cfg;
  if (root["setting"]) {
    cfg.environment =
        EnvSetting::Preset(ParseSetting(root["setting"].as<std::string>()));
  }
  Read(root, "stages", cfg.stages);
  if (const YAML::Node r = root["rectangular"]) {
    CheckKeys(r, {"users", "times"}, "rectangular");
    cfg.users = r["users"].as<int>();
    cfg.times = r["times"].as<int>();
  }
  Read(root, "replications", cfg.replications);
  Read(root, "seed", cfg.seed);
  Read(root, "threads", cfg.threads);
  if (root["output"]) cfg.output = root["output"].as<std::string>();
  Read(root, "write_traces", cfg.write_traces);
  if (const YAML::Node e = root["environment"]) {
    CheckKeys(e,
              {"noise_sd", "user_noise_sd", "time_effect_scale", "neighbors",
               "nonlinear_baseline"},
              "environment");
    Read(e, "noise_sd", cfg.environment.noise_sd);
    Read(e, "user_noise_sd", cfg.environment.user_noise_sd);
    Read(e, "time_effect_scale", cfg.environment.time_effect_scale);
    Read(e, "neighbors", cfg.environment.neighbors);
    Read(e, "nonlinear_baseline", cfg.environment.nonlinear_baseline);
  }

  PolicyConfig base_config;
  VariantOptions base_options;
  if (const YAML::Node p = root["policy"]) {
    if (p["tag"]) throw std::invalid_argument("'policy' defaults take no tag");
    ApplyPolicyNode(p, base_config, base_options, "policy");
  }
  const YAML::Node list = root["policies"];
  if (!list || !list.IsSequence()) {
    throw std::invalid_argument("'policies' must be a list");
  }
  for (const auto& item : list) {
    PolicyEntry entry;
    entry.config = base_config;
    entry.options = base_options;
    if (item.IsScalar()) {
      entry.variant = ParseVariant(item.as<std::string>());
    } else {
      if (!item["tag"]) throw std::invalid_argument("policy entry needs a tag");
      entry.variant = ParseVariant(item["tag"].as<std::string>());
      ApplyPolicyNode(item, entry.config, entry.options,
                      "policies." + entry.label());
    }
    cfg.policies.push_back(std::move(entry));
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string DumpConfig(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "setting" << YAML::Value
    << SettingName(cfg.environment.kind);
  if (cfg.users && cfg.times) {
    e << YAML::Key << "rectangular" << YAML::Value << YAML::BeginMap
      << YAML::Key << "users" << YAML::Value << *cfg.users << YAML::Key
      << "times" << YAML::Value << *cfg.times << YAML::EndMap;
  } else {
    e << YAML::Key << "stages" << YAML::Value << cfg.stages;
  }
  e << YAML::Key << "replications" << YAML::Value << cfg.replications;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed;
  e << YAML::Key << "threads" << YAML::Value << cfg.threads;
  e << YAML::Key << "output" << YAML::Value << cfg.output.string();
  e << YAML::Key << "write_traces" << YAML::Value << cfg.write_traces;
  e << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "noise_sd" << YAML::Value << cfg.environment.noise_sd;
  e << YAML::Key << "user_noise_sd" << YAML::Value
    << cfg.environment.user_noise_sd;
  e << YAML::Key << "time_effect_scale" << YAML::Value
    << cfg.environment.time_effect_scale;
  e << YAML::Key << "neighbors" << YAML::Value << cfg.environment.neighbors;
  e << YAML::Key << "nonlinear_baseline" << YAML::Value
    << cfg.environment.nonlinear_baseline;
  e << YAML::EndMap;
  e << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : cfg.policies) EmitPolicy(e, p);
  e << YAML::EndSeq;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ROME_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Rng EnvironmentRng(std::uint64_t base_seed, int replication) {
  return Rng::Stream(base_seed + static_cast<std::uint64_t>(replication),
                     kEnvStream);
}

Rng PolicyRng(std::uint64_t base_seed, int replication,
              const std::string& policy) {
  return Rng::Stream(base_seed + static_cast<std::uint64_t>(replication),
                     kPolicyStream ^ StableHash(policy));
}

RunTrace RunCell(const ExperimentConfig& config, const PolicyEntry& policy,
                 int replication, RegretCurve* curve) {
  const Environment env(config.environment, config.MakeSchedule(),
                        EnvironmentRng(config.seed, replication));
  auto p = MakePolicy(policy.variant, policy.config, policy.options,
                      env.Shape(),
                      PolicyRng(config.seed, replication, policy.label()));
  RunTrace trace = RunPolicy(*p, env, replication);
  if (curve) {
    *curve = StageRegret(trace, env, policy.config.pi_min,
                         policy.config.pi_max);
  }
  return trace;
}

double TwoSidedPairedTTest(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  if (a.size() < 2) throw std::invalid_argument("need at least two pairs");
  std::vector<double> diff(a.size());
  for (size_t k = 0; k < a.size(); ++k) diff[k] = b[k] - a[k];
  const double mean = Mean(diff);
  const double var = SampleVariance(diff);
  if (!(var > 0.0)) return mean == 0.0 ? 1.0 : 0.0;
  const double n = static_cast<double>(diff.size());
  const double t = std::abs(mean) / std::sqrt(var / n);
  return 2.0 * (1.0 - StudentTCdf(t, n - 1.0));
}

std::vector<PairwiseRow> PairwiseTable(const std::vector<std::string>& names,
                                       const Eigen::MatrixXd& final_regret) {
  const int reps = static_cast<int>(final_regret.rows());
  std::vector<PairwiseRow> rows;
  for (int p = 0; p < static_cast<int>(names.size()); ++p) {
    for (int q = 0; q < static_cast<int>(names.size()); ++q) {
      if (p == q) continue;
      PairwiseRow row;
      row.policy = names[p];
      row.opponent = names[q];
      row.replications = reps;
      for (int r = 0; r < reps; ++r) {
        if (final_regret(r, p) < final_regret(r, q)) ++row.wins;
        if (final_regret(r, p) == final_regret(r, q)) ++row.ties;
      }
      row.win_percent = reps > 0 ? 100.0 * row.wins / reps : 0.0;
      if (reps >= 2) {
        std::vector<double> a(reps), b(reps);
        for (int r = 0; r < reps; ++r) {
          a[r] = final_regret(r, p);
          b[r] = final_regret(r, q);
        }
        row.p_value = TwoSidedPairedTTest(a, b);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               bool write_files) {
  config.Validate();
  const int num_policies = static_cast<int>(config.policies.size());
  const int reps = config.replications;
  ExperimentResult result;
  for (const auto& p : config.policies) result.policies.push_back(p.label());
  result.curves.assign(num_policies, std::vector<RegretCurve>(reps));
  result.final_regret.resize(reps, num_policies);

  if (write_files) {
    std::filesystem::create_directories(config.output);
    if (config.write_traces) {
      std::filesystem::create_directories(config.output / "traces");
    }
  }
  ParallelFor(num_policies * reps, ResolveThreads(config.threads), [&](int k) {
    const int p = k / reps;
    const int r = k % reps;
    RegretCurve curve;
    RunTrace trace = RunCell(config, config.policies[p], r, &curve);
    if (write_files && config.write_traces) {
      WriteTrace(trace, config.output / "traces" /
                            (result.policies[p] + "_rep" + std::to_string(r) +
                             ".jsonl"));
    }
    result.final_regret(r, p) = curve.final_regret();
    result.curves[p][r] = std::move(curve);
  });
  result.pairwise = PairwiseTable(result.policies, result.final_regret);
  if (write_files) {
    WriteCsvs(config, result);
    std::ofstream(config.output / "config.yaml") << DumpConfig(config);
  }
  return result;
}

}  // namespace rome
