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

// Pseudo-regret against the clipped optimal policy, averaged within stages
// and summed across stages.

#ifndef ROME_REGRET_H_
#define ROME_REGRET_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rome/environment.h"
#include "rome/trace_io.h"

namespace rome {

// pi*(arm*|s) x(s,arm*)^T theta - (1 - pi0) x(s,arm_bar)^T theta.
double DecisionRegret(const OptimalAction& optimal,
                      std::span<const Eigen::VectorXd> arm_features,
                      const Eigen::VectorXd& theta, int arm_bar, double pi0);

struct RegretCurve {
  std::vector<double> per_stage;
  std::vector<double> cumulative;
  double final_regret() const {
    return cumulative.empty() ? 0.0 : cumulative.back();
  }
};

// Stage k contributes the mean decision regret over its decision points.
// Throws std::invalid_argument when the trace does not cover the
// environment's schedule point for point.
RegretCurve StageRegret(const RunTrace& trace, const Environment& env,
                        double pi_min, double pi_max);

}  // namespace rome

#endif  // ROME_REGRET_H_
