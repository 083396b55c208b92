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

#include "rome/environment.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rome {
namespace {

struct Bump {
  double amplitude, cx, cy, sx, sy, angle;
};

constexpr std::array<Bump, 6> kBumps{{
    {4.0, -0.50, -0.40, 0.35, 0.15, 0.6},
    {-3.5, 0.45, 0.50, 0.25, 0.40, -0.4},
    {3.0, 0.60, -0.55, 0.20, 0.30, 1.1},
    {-2.5, -0.60, 0.60, 0.30, 0.20, -0.9},
    {2.0, 0.00, 0.10, 0.15, 0.15, 0.0},
    {-2.0, -0.10, -0.80, 0.40, 0.12, 0.3},
}};

constexpr double kNonlinearIntercept = 2.0;

double PartitionOffset(double s1, double s2) {
  if (s1 <= 0.15) return s2 <= -0.2 ? 1.0 : -0.5;
  return s2 <= 0.35 ? -1.0 : 0.75;
}

}  // namespace

Schedule StagedSchedule(int num_stages) {
  if (num_stages < 1) throw std::invalid_argument("K must be >= 1");
  Schedule out;
  out.reserve(static_cast<size_t>(num_stages) * (num_stages + 1) / 2);
  for (int k = 1; k <= num_stages; ++k) {
    for (int i = 1; i <= k; ++i) out.push_back({k, i, k + 1 - i});
  }
  return out;
}

Schedule RectangularSchedule(int num_users, int num_times) {
  if (num_users < 1 || num_times < 1) {
    throw std::invalid_argument("N and T must be >= 1");
  }
  Schedule out;
  out.reserve(static_cast<size_t>(num_users) * num_times);
  const int stages = num_users + num_times - 1;
  for (int k = 1; k <= stages; ++k) {
    for (int i = std::max(1, k - num_times + 1); i <= std::min(k, num_users);
         ++i) {
      out.push_back({k, i, k + 1 - i});
    }
  }
  return out;
}

int NumStages(const Schedule& schedule) {
  int stages = 0;
  for (const auto& p : schedule) stages = std::max(stages, p.stage);
  return stages;
}

SettingKind ParseSetting(const std::string& name) {
  if (name == "homogeneous") return SettingKind::kHomogeneous;
  if (name == "heterogeneous") return SettingKind::kHeterogeneous;
  if (name == "nonlinear") return SettingKind::kNonlinear;
  throw std::invalid_argument("unknown setting: " + name);
}

std::string SettingName(SettingKind kind) {
  switch (kind) {
    case SettingKind::kHomogeneous:
      return "homogeneous";
    case SettingKind::kHeterogeneous:
      return "heterogeneous";
    case SettingKind::kNonlinear:
      return "nonlinear";
  }
  return "unknown";
}

EnvSetting EnvSetting::Preset(SettingKind kind) {
  EnvSetting s;
  s.kind = kind;
  if (kind != SettingKind::kHomogeneous) s.user_noise_sd = 1.0;
  if (kind == SettingKind::kNonlinear) {
    s.time_effect_scale = 3.0;
    s.nonlinear_baseline = true;
  }
  return s;
}

Eigen::VectorXd SampleContext(Rng& rng) {
  Eigen::VectorXd s(2);
  s(0) = rng.Uniform(-1.0, 1.0);
  s(1) = rng.Uniform(-1.0, 1.0);
  return s;
}

Eigen::VectorXd ArmFeatures(const Eigen::VectorXd& context, int action) {
  Eigen::VectorXd x(1 + context.size());
  x(0) = 1.0;
  x.tail(context.size()) = context;
  return static_cast<double>(action) * x;
}

double LinearBaseline(const Eigen::VectorXd& context) {
  return 2.0 - 2.0 * context(0) + 3.0 * context(1);
}

double NonlinearBaseline(const Eigen::VectorXd& context) {
  const double s1 = context(0), s2 = context(1);
  double g = kNonlinearIntercept + PartitionOffset(s1, s2);
  for (const Bump& b : kBumps) {
    const double c = std::cos(b.angle), s = std::sin(b.angle);
    const double dx = s1 - b.cx, dy = s2 - b.cy;
    const double u = (c * dx + s * dy) / b.sx;
    const double v = (-s * dx + c * dy) / b.sy;
    g += b.amplitude * std::exp(-0.5 * (u * u + v * v));
  }
  return g;
}

double NonlinearBaselineBound() {
  double bound = std::abs(kNonlinearIntercept) + 1.0;
  for (const Bump& b : kBumps) bound += std::abs(b.amplitude);
  return bound;
}

Eigen::VectorXd TimeEffect(int time, int num_times, double scale,
                           const Eigen::VectorXd& direction) {
  if (num_times < 1) throw std::invalid_argument("num_times must be >= 1");
  const double tau = num_times / 10.0;
  return scale * std::exp(-time / tau) * direction;
}

OptimalAction OptimalPolicy(std::span<const Eigen::VectorXd> arm_features,
                            const Eigen::VectorXd& theta, double pi_min,
                            double pi_max) {
  if (arm_features.empty()) throw std::invalid_argument("no arms");
  OptimalAction out;
  out.arm_bar = 1;
  out.advantage = arm_features[0].dot(theta);
  for (size_t a = 1; a < arm_features.size(); ++a) {
    const double adv = arm_features[a].dot(theta);
    if (adv > out.advantage) {
      out.advantage = adv;
      out.arm_bar = static_cast<int>(a) + 1;
    }
  }
  if (out.advantage > 0.0) {
    out.action = out.arm_bar;
    out.pi0 = pi_min;
  } else {
    out.action = 0;
    out.pi0 = pi_max;
  }
  return out;
}

Environment::Environment(EnvSetting setting, Schedule schedule, Rng rng)
    : setting_(std::move(setting)), schedule_(std::move(schedule)) {
  if (schedule_.empty()) throw std::invalid_argument("empty schedule");
  const int d = static_cast<int>(setting_.theta_base.size());
  if (d != 3) throw std::invalid_argument("theta_base must have 3 entries");
  if (setting_.time_direction.size() != d) {
    throw std::invalid_argument("time direction dimension mismatch");
  }
  for (const auto& p : schedule_) {
    num_users_ = std::max(num_users_, p.user);
    num_times_ = std::max(num_times_, p.time);
  }
  num_stages_ = NumStages(schedule_);
  index_.assign(static_cast<size_t>(num_users_) * num_times_, -1);

  user_effects_.resize(num_users_);
  for (auto& u : user_effects_) {
    u.resize(d);
    for (int j = 0; j < d; ++j) u(j) = rng.Normal(0.0, 1.0);
    u *= setting_.user_noise_sd;
  }
  contexts_.reserve(schedule_.size());
  noise_.reserve(schedule_.size());
  for (size_t k = 0; k < schedule_.size(); ++k) {
    const auto& p = schedule_[k];
    int& slot = index_[(p.user - 1) * num_times_ + (p.time - 1)];
    if (slot >= 0) throw std::invalid_argument("duplicate decision point");
    slot = static_cast<int>(k);
    contexts_.push_back(SampleContext(rng));
    noise_.push_back(rng.Normal(0.0, setting_.noise_sd));
  }

  if (num_users_ >= 2) {
    const int k = std::min(setting_.neighbors, num_users_ - 1);
    user_graph_ = KnnGraph(user_effects_, k);
  } else {
    user_graph_ = CohesionGraph(num_users_, {});
  }
  time_graph_ = CohesionGraph::Chain(num_times_);
}

int Environment::IndexOf(int user, int time) const {
  if (user < 1 || user > num_users_ || time < 1 || time > num_times_) {
    throw std::out_of_range("decision point outside the study");
  }
  const int k = index_[(user - 1) * num_times_ + (time - 1)];
  if (k < 0) throw std::out_of_range("decision point is not scheduled");
  return k;
}

DecisionPoint Environment::Point(int index) const {
  const auto& p = schedule_.at(index);
  DecisionPoint out;
  out.stage = p.stage;
  out.user = p.user;
  out.time = p.time;
  out.context = contexts_[index];
  out.arm_features = {ArmFeatures(out.context, 1)};
  return out;
}

const Eigen::VectorXd& Environment::Context(int user, int time) const {
  return contexts_[IndexOf(user, time)];
}

double Environment::Noise(int user, int time) const {
  return noise_[IndexOf(user, time)];
}

double Environment::Baseline(const Eigen::VectorXd& context) const {
  return setting_.nonlinear_baseline ? NonlinearBaseline(context)
                                     : LinearBaseline(context);
}

const Eigen::VectorXd& Environment::UserEffect(int user) const {
  return user_effects_.at(user - 1);
}

Eigen::VectorXd Environment::ThetaStar(int user, int time) const {
  Eigen::VectorXd theta = setting_.theta_base + UserEffect(user);
  if (setting_.time_effect_scale != 0.0) {
    theta += TimeEffect(time, num_times_, setting_.time_effect_scale,
                        setting_.time_direction);
  }
  return theta;
}

double Environment::MeanReward(int user, int time, int action) const {
  if (action < 0 || action > num_arms()) {
    throw std::invalid_argument("action out of range");
  }
  const Eigen::VectorXd& s = Context(user, time);
  return Baseline(s) + ArmFeatures(s, action).dot(ThetaStar(user, time));
}

double Environment::Reward(int user, int time, int action) const {
  return MeanReward(user, time, action) + Noise(user, time);
}

ProblemShape Environment::Shape() const {
  ProblemShape shape;
  shape.num_stages = num_stages_;
  shape.num_users = num_users_;
  shape.num_times = num_times_;
  shape.context_dim = 2;
  shape.feature_dim = static_cast<int>(setting_.theta_base.size());
  shape.num_arms = num_arms();
  shape.user_graph = user_graph_;
  shape.time_graph = time_graph_;
  shape.units.reserve(schedule_.size());
  for (const auto& p : schedule_) shape.units.push_back({p.user, p.time});
  return shape;
}

void Environment::WriteThetaCsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "user,time";
  for (int j = 0; j < setting_.theta_base.size(); ++j) out << ",theta_" << j;
  out << '\n';
  for (const auto& p : schedule_) {
    out << p.user << ',' << p.time;
    const Eigen::VectorXd theta = ThetaStar(p.user, p.time);
    for (int j = 0; j < theta.size(); ++j) out << ',' << theta(j);
    out << '\n';
  }
}

void Environment::WriteBaselineCsv(const std::filesystem::path& path,
                                   int n) const {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "s1,s2,g\n";
  Eigen::VectorXd s(2);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      s << -1.0 + 2.0 * a / (n - 1), -1.0 + 2.0 * b / (n - 1);
      out << s(0) << ',' << s(1) << ',' << Baseline(s) << '\n';
    }
  }
}

}  // namespace rome
