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

#include "rome/regret.h"

#include <stdexcept>
#include <string>

namespace rome {

double DecisionRegret(const OptimalAction& optimal,
                      std::span<const Eigen::VectorXd> arm_features,
                      const Eigen::VectorXd& theta, int arm_bar, double pi0) {
  if (arm_bar < 1 || arm_bar > static_cast<int>(arm_features.size())) {
    throw std::invalid_argument("proposed arm out of range");
  }
  const double best = (1.0 - optimal.pi0) *
                      arm_features[optimal.arm_bar - 1].dot(theta);
  const double played = (1.0 - pi0) * arm_features[arm_bar - 1].dot(theta);
  return best - played;
}

RegretCurve StageRegret(const RunTrace& trace, const Environment& env,
                        double pi_min, double pi_max) {
  const Schedule& schedule = env.schedule();
  if (trace.decisions.size() != schedule.size()) {
    throw std::invalid_argument("trace length " +
                                std::to_string(trace.decisions.size()) +
                                " does not match the schedule");
  }
  const int stages = env.num_stages();
  std::vector<double> total(stages, 0.0);
  std::vector<int> count(stages, 0);
  for (const auto& p : schedule) ++count[p.stage - 1];
  std::vector<bool> seen(schedule.size(), false);
  for (const auto& r : trace.decisions) {
    const int k = env.IndexOf(r.user, r.time);
    if (seen[k] || schedule[k].stage != r.stage) {
      throw std::invalid_argument("trace decision (" + std::to_string(r.user) +
                                  ", " + std::to_string(r.time) +
                                  ") is misaligned with the schedule");
    }
    seen[k] = true;
    const Eigen::VectorXd& s = env.Context(r.user, r.time);
    if (r.context.size() != s.size() ||
        (r.context - s).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("trace context differs from the truth");
    }
    const Eigen::VectorXd theta = env.ThetaStar(r.user, r.time);
    const OptimalAction opt =
        OptimalPolicy(r.arm_features, theta, pi_min, pi_max);
    total[r.stage - 1] +=
        DecisionRegret(opt, r.arm_features, theta, r.arm_bar, r.pi0);
  }
  RegretCurve curve;
  curve.per_stage.resize(stages);
  curve.cumulative.resize(stages);
  double running = 0.0;
  for (int k = 0; k < stages; ++k) {
    curve.per_stage[k] = count[k] > 0 ? total[k] / count[k] : 0.0;
    running += curve.per_stage[k];
    curve.cumulative[k] = running;
  }
  return curve;
}

}  // namespace rome
