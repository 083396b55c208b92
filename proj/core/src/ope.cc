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

#include "rome/ope.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rome/parallel.h"
#include "rome/stats.h"

namespace rome {
namespace {

using nlohmann::json;

Eigen::VectorXd ToVector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

DecisionPoint PointOf(const LoggedRecord& r) {
  DecisionPoint p;
  p.stage = r.user + r.time - 1;
  p.user = r.user;
  p.time = r.time;
  p.context = r.context;
  p.arm_features = {ArmFeatures(r.context, 1)};
  return p;
}

void CheckProbs(std::span<const LoggedRecord> log,
                std::span<const double> target_probs) {
  if (log.empty()) throw std::invalid_argument("empty log");
  if (log.size() != target_probs.size()) {
    throw std::invalid_argument("one target probability per record needed");
  }
}

}  // namespace

void ValidateRecord(const LoggedRecord& r) {
  if (r.action != 0 && r.action != 1) {
    throw std::invalid_argument("logged actions must be binary");
  }
  if (!(r.propensity > 0.0 && r.propensity < 1.0)) {
    throw std::invalid_argument("logging propensity must lie in (0, 1)");
  }
  if (!std::isfinite(r.reward) || !r.context.allFinite()) {
    throw std::invalid_argument("non-finite logged record");
  }
  if (r.user < 0 || r.time < 1) {
    throw std::invalid_argument("invalid user or time index");
  }
}

std::vector<LoggedRecord> FilterByPropensity(std::span<const LoggedRecord> log,
                                             double lo, double hi) {
  std::vector<LoggedRecord> out;
  for (const auto& r : log) {
    if (r.propensity >= lo && r.propensity <= hi) out.push_back(r);
  }
  return out;
}

std::vector<LoggedRecord> ReadLog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<LoggedRecord> log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      LoggedRecord r;
      r.user = j.at("user").get<int>();
      r.time = j.at("time").get<int>();
      r.context = ToVector(j.at("context"));
      r.action = j.at("action").get<int>();
      r.propensity = j.at("propensity").get<double>();
      r.reward = j.at("reward").get<double>();
      if (j.contains("user_features")) {
        r.user_features = ToVector(j.at("user_features"));
      }
      ValidateRecord(r);
      log.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return log;
}

void WriteLog(std::span<const LoggedRecord> log,
              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : log) {
    json j = {{"user", r.user},         {"time", r.time},
              {"context", ToStd(r.context)}, {"action", r.action},
              {"propensity", r.propensity},  {"reward", r.reward}};
    if (r.user_features.size() > 0) {
      j["user_features"] = ToStd(r.user_features);
    }
    out << j.dump() << '\n';
  }
}

double Ips(std::span<const LoggedRecord> log,
           std::span<const double> target_probs) {
  CheckProbs(log, target_probs);
  double total = 0.0;
  for (size_t t = 0; t < log.size(); ++t) {
    ValidateRecord(log[t]);
    total += target_probs[t] / log[t].propensity * log[t].reward;
  }
  return total / static_cast<double>(log.size());
}

double Snips(std::span<const LoggedRecord> log,
             std::span<const double> target_probs) {
  CheckProbs(log, target_probs);
  double num = 0.0, den = 0.0;
  for (size_t t = 0; t < log.size(); ++t) {
    ValidateRecord(log[t]);
    const double w = target_probs[t] / log[t].propensity;
    num += w * log[t].reward;
    den += w;
  }
  if (!(den > 0.0)) throw std::domain_error("all importance weights are zero");
  return num / den;
}

std::vector<double> TargetProbabilities(std::span<const LoggedRecord> log,
                                        const TargetPolicy& target) {
  std::vector<double> probs;
  probs.reserve(log.size());
  for (const auto& r : log) probs.push_back(target(r, r.action));
  return probs;
}

std::vector<LoggedRecord> StagedOrder(std::span<const LoggedRecord> log) {
  std::map<int, int> relabel;
  for (const auto& r : log) relabel.emplace(r.user, 0);
  int next = 1;
  for (auto& [id, label] : relabel) label = next++;
  std::vector<LoggedRecord> out(log.begin(), log.end());
  for (auto& r : out) r.user = relabel.at(r.user);
  std::stable_sort(out.begin(), out.end(),
                   [](const LoggedRecord& a, const LoggedRecord& b) {
                     const int sa = a.user + a.time, sb = b.user + b.time;
                     if (sa != sb) return sa < sb;
                     return a.user < b.user;
                   });
  for (size_t k = 1; k < out.size(); ++k) {
    if (out[k].user == out[k - 1].user && out[k].time == out[k - 1].time) {
      throw std::invalid_argument("duplicate (user, time) in log");
    }
  }
  return out;
}

ProblemShape LogShape(std::span<const LoggedRecord> log, int neighbors) {
  if (log.empty()) throw std::invalid_argument("empty log");
  ProblemShape shape;
  shape.num_users = 0;
  shape.num_times = 0;
  shape.num_stages = 0;
  for (const auto& r : log) {
    shape.num_users = std::max(shape.num_users, r.user);
    shape.num_times = std::max(shape.num_times, r.time);
    shape.num_stages = std::max(shape.num_stages, r.user + r.time - 1);
    shape.units.push_back({r.user, r.time});
  }
  shape.context_dim = static_cast<int>(log.front().context.size());
  shape.feature_dim = shape.context_dim + 1;
  shape.num_arms = 1;

  std::vector<Eigen::VectorXd> features(shape.num_users);
  bool complete = shape.num_users >= 2;
  for (const auto& r : log) {
    if (r.user_features.size() == 0) complete = false;
    if (r.user >= 1) features[r.user - 1] = r.user_features;
  }
  for (const auto& f : features) {
    if (f.size() == 0 || f.size() != features.front().size()) complete = false;
  }
  if (complete) {
    shape.user_graph =
        KnnGraph(features, std::min(neighbors, shape.num_users - 1));
  } else {
    shape.user_graph = CohesionGraph(shape.num_users, {});
  }
  shape.time_graph = CohesionGraph::Chain(shape.num_times);
  return shape;
}

OnlineEvaluation EvaluateOnline(std::span<const LoggedRecord> log,
                                Policy& policy) {
  if (log.empty()) throw std::invalid_argument("empty log");
  OnlineEvaluation out;
  out.target_probs.reserve(log.size());
  int stage = 0;
  for (const auto& r : log) {
    ValidateRecord(r);
    const DecisionPoint point = PointOf(r);
    if (point.stage < stage) {
      throw std::invalid_argument("log is not in staged order");
    }
    if (point.stage != stage) {
      if (stage > 0) policy.EndStage(stage);
      stage = point.stage;
      policy.BeginStage(stage);
    }
    const Decision d = policy.Decide(point);
    out.target_probs.push_back(r.action == 0 ? d.pi0 : 1.0 - d.pi0);
    policy.Observe(point, {1, r.action, r.control_propensity(), r.reward});
  }
  if (stage > 0) policy.EndStage(stage);
  out.ips = Ips(log, out.target_probs);
  out.snips = Snips(log, out.target_probs);
  return out;
}

std::vector<int> ResampleWithReplacement(int num_users, Rng& rng) {
  std::vector<int> users(num_users);
  for (auto& u : users) u = rng.UniformInt(num_users);
  return users;
}

std::vector<int> IdentityResample(int num_users, Rng& /*rng*/) {
  std::vector<int> users(num_users);
  for (int k = 0; k < num_users; ++k) users[k] = k;
  return users;
}

std::vector<LoggedRecord> ResampleUsers(std::span<const LoggedRecord> log,
                                        std::span<const int> users) {
  std::map<int, std::vector<const LoggedRecord*>> by_user;
  for (const auto& r : log) by_user[r.user].push_back(&r);
  std::vector<const std::vector<const LoggedRecord*>*> distinct;
  for (const auto& [id, records] : by_user) distinct.push_back(&records);
  std::vector<LoggedRecord> out;
  for (size_t k = 0; k < users.size(); ++k) {
    const int u = users[k];
    if (u < 0 || u >= static_cast<int>(distinct.size())) {
      throw std::out_of_range("resampled user index out of range");
    }
    for (const LoggedRecord* r : *distinct[u]) {
      out.push_back(*r);
      out.back().user = static_cast<int>(k) + 1;
    }
  }
  return StagedOrder(out);
}

std::uint64_t StableHash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

BootstrapResult BootstrapEval(std::span<const LoggedRecord> log,
                              std::span<const PolicyVariant> policies,
                              const PolicyConfig& config,
                              const VariantOptions& options, int replicates,
                              std::uint64_t seed, const Resampler& resampler,
                              int threads) {
  if (log.empty()) throw std::invalid_argument("empty log");
  if (replicates < 1) throw std::invalid_argument("need at least 1 replicate");
  if (policies.empty()) throw std::invalid_argument("no policies to evaluate");
  std::map<int, int> distinct;
  for (const auto& r : log) distinct.emplace(r.user, 0);
  const int num_users = static_cast<int>(distinct.size());

  BootstrapResult result;
  for (PolicyVariant p : policies) result.policies.push_back(VariantName(p));
  const int num_policies = static_cast<int>(policies.size());
  result.estimates.resize(replicates, num_policies);

  ParallelFor(replicates, threads, [&](int b) {
    Rng draw_rng = Rng::Stream(seed, 2 * static_cast<std::uint64_t>(b));
    const std::vector<LoggedRecord> sample =
        ResampleUsers(log, resampler(num_users, draw_rng));
    double logged_mean = 0.0;
    for (const auto& r : sample) logged_mean += r.reward;
    logged_mean /= static_cast<double>(sample.size());
    const ProblemShape shape = LogShape(sample);
    for (int p = 0; p < num_policies; ++p) {
      Rng policy_rng = Rng::Stream(
          seed + static_cast<std::uint64_t>(b),
          kPolicyStream ^ StableHash(result.policies[p]));
      auto policy =
          MakePolicy(policies[p], config, options, shape, policy_rng);
      result.estimates(b, p) = EvaluateOnline(sample, *policy).snips -
                               logged_mean;
    }
  });
  return result;
}

double PairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  if (a.size() < 2) throw std::invalid_argument("need at least two pairs");
  std::vector<double> diff(a.size());
  for (size_t k = 0; k < a.size(); ++k) diff[k] = b[k] - a[k];
  const double mean = Mean(diff);
  const double var = SampleVariance(diff);
  if (!(var > 0.0)) return mean <= 0.0 ? 1.0 : 0.0;
  const double n = static_cast<double>(diff.size());
  const double t = mean / std::sqrt(var / n);
  return 1.0 - StudentTCdf(t, n - 1.0);
}

Eigen::MatrixXd PValueMatrix(const BootstrapResult& result) {
  const int p = static_cast<int>(result.policies.size());
  const int n = static_cast<int>(result.estimates.rows());
  Eigen::MatrixXd out(p, p);
  std::vector<std::vector<double>> cols(p);
  for (int c = 0; c < p; ++c) {
    cols[c].assign(result.estimates.col(c).data(),
                   result.estimates.col(c).data() + n);
  }
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      out(r, c) = r == c ? std::numeric_limits<double>::quiet_NaN()
                         : PairedTTest(cols[c], cols[r]);
    }
  }
  return out;
}

void WriteEstimatesCsv(const BootstrapResult& result,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "policy,replicate,estimate\n";
  for (int p = 0; p < static_cast<int>(result.policies.size()); ++p) {
    for (int b = 0; b < result.estimates.rows(); ++b) {
      out << result.policies[p] << ',' << b << ',' << result.estimates(b, p)
          << '\n';
    }
  }
}

void WritePValueCsv(const BootstrapResult& result,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  const Eigen::MatrixXd pv = PValueMatrix(result);
  out << "policy";
  for (const auto& name : result.policies) out << ',' << name;
  out << '\n';
  for (int r = 0; r < pv.rows(); ++r) {
    out << result.policies[r];
    for (int c = 0; c < pv.cols(); ++c) {
      out << ',';
      if (r != c) out << pv(r, c);
    }
    out << '\n';
  }
}

std::vector<LoggedRecord> GenerateLog(
    const Environment& env,
    const std::function<double(const Eigen::VectorXd&)>& p_treat, Rng& rng) {
  std::vector<LoggedRecord> log;
  log.reserve(env.schedule().size());
  for (const auto& p : env.schedule()) {
    LoggedRecord r;
    r.user = p.user;
    r.time = p.time;
    r.context = env.Context(p.user, p.time);
    const double q = p_treat(r.context);
    if (!(q > 0.0 && q < 1.0)) {
      throw std::invalid_argument("logging probability must lie in (0, 1)");
    }
    r.action = rng.Bernoulli(q) ? 1 : 0;
    r.propensity = r.action == 1 ? q : 1.0 - q;
    r.reward = env.Reward(p.user, p.time, r.action);
    r.user_features = env.UserEffect(p.user);
    log.push_back(std::move(r));
  }
  return log;
}

}  // namespace rome
