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

// Simulation environments: staged and rectangular recruitment schedules,
// contexts, baseline and advantage functions, user and time effects, and the
// clipped optimal policy.
//
//   R_it = g(S) + x(S, A)^T theta_it + eps_it,   x(s, a) = a (1, s1, s2).

#ifndef ROME_ENVIRONMENT_H_
#define ROME_ENVIRONMENT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rome/graph.h"
#include "rome/policy.h"
#include "rome/rng.h"

namespace rome {

struct SchedulePoint {
  int stage = 1;
  int user = 1;
  int time = 1;
  friend bool operator==(const SchedulePoint&, const SchedulePoint&) = default;
};

using Schedule = std::vector<SchedulePoint>;

// Stage k visits (1,k), (2,k-1), ..., (k,1).
Schedule StagedSchedule(int num_stages);
// Staged entry of `num_users` users, each leaving after `num_times`
// decisions. Stage k visits (i, k+1-i) for the users still enrolled.
Schedule RectangularSchedule(int num_users, int num_times);
int NumStages(const Schedule& schedule);

enum class SettingKind { kHomogeneous, kHeterogeneous, kNonlinear };

SettingKind ParseSetting(const std::string& name);
std::string SettingName(SettingKind kind);

struct EnvSetting {
  SettingKind kind = SettingKind::kHomogeneous;
  Eigen::VectorXd theta_base = Eigen::Vector3d(1.0, 0.5, -4.0);
  double user_noise_sd = 0.0;
  double time_effect_scale = 0.0;
  Eigen::VectorXd time_direction = Eigen::Vector3d(-2.0, 1.0, 2.0) / 3.0;
  bool nonlinear_baseline = false;
  double noise_sd = 1.0;
  int neighbors = 5;

  static EnvSetting Preset(SettingKind kind);
};

// s ~ U(-1, 1)^2.
Eigen::VectorXd SampleContext(Rng& rng);
// a (1, s1, s2).
Eigen::VectorXd ArmFeatures(const Eigen::VectorXd& context, int action);

// 2 - 2 s1 + 3 s2.
double LinearBaseline(const Eigen::VectorXd& context);
// Sum of six rotated anisotropic Gaussian bumps plus a piecewise-constant
// offset over a two-level axis-aligned partition.
double NonlinearBaseline(const Eigen::VectorXd& context);
// Upper bound on |NonlinearBaseline| over the plane.
double NonlinearBaselineBound();

// scale * exp(-t / tau) * direction with tau = num_times / 10.
Eigen::VectorXd TimeEffect(int time, int num_times, double scale,
                           const Eigen::VectorXd& direction);

struct OptimalAction {
  int action = 0;    // A*
  int arm_bar = 1;   // best non-baseline arm
  double pi0 = 0.5;  // pi*(0 | s)
  double advantage = 0.0;  // x(s, arm_bar)^T theta
};

// A* = arm_bar when its advantage is positive, else 0 (ties go to 0).
OptimalAction OptimalPolicy(std::span<const Eigen::VectorXd> arm_features,
                            const Eigen::VectorXd& theta, double pi_min,
                            double pi_max);

class Environment {
 public:
  // Draws user effects, then the context and noise of every scheduled
  // decision point, so contexts never depend on the actions taken.
  Environment(EnvSetting setting, Schedule schedule, Rng rng);

  const EnvSetting& setting() const { return setting_; }
  const Schedule& schedule() const { return schedule_; }
  int num_users() const { return num_users_; }
  int num_times() const { return num_times_; }
  int num_stages() const { return num_stages_; }
  int num_arms() const { return 1; }
  const CohesionGraph& user_graph() const { return user_graph_; }
  const CohesionGraph& time_graph() const { return time_graph_; }

  // Throws std::out_of_range for a point that is not scheduled.
  int IndexOf(int user, int time) const;
  DecisionPoint Point(int index) const;
  const Eigen::VectorXd& Context(int user, int time) const;
  double Noise(int user, int time) const;

  double Baseline(const Eigen::VectorXd& context) const;
  const Eigen::VectorXd& UserEffect(int user) const;
  Eigen::VectorXd ThetaStar(int user, int time) const;
  double MeanReward(int user, int time, int action) const;
  double Reward(int user, int time, int action) const;

  ProblemShape Shape() const;

  // user,time,theta_0..theta_{d-1}
  void WriteThetaCsv(const std::filesystem::path& path) const;
  // s1,s2,g on a regular grid over [-1, 1]^2 with `n` points per side.
  void WriteBaselineCsv(const std::filesystem::path& path, int n) const;

 private:
  EnvSetting setting_;
  Schedule schedule_;
  int num_users_ = 0;
  int num_times_ = 0;
  int num_stages_ = 0;
  std::vector<int> index_;  // (user-1) * num_times + (time-1) -> schedule
  std::vector<Eigen::VectorXd> contexts_;
  std::vector<double> noise_;
  std::vector<Eigen::VectorXd> user_effects_;
  CohesionGraph user_graph_{1, {}};
  CohesionGraph time_graph_{1, {}};
};

}  // namespace rome

#endif  // ROME_ENVIRONMENT_H_
