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

// Randomized exploration: the confidence radius, Thompson-style parameter
// draws and the clipped probability of the control action.

#ifndef ROME_EXPLORATION_H_
#define ROME_EXPLORATION_H_

#include <span>
#include <string>

#include <Eigen/Dense>

#include "rome/rng.h"

namespace rome {

enum class TsKind { kGaussian, kStudentT };

// Perturbation law for eta. The Student-t option is multivariate t with
// `dof` degrees of freedom, so every linear functional is a scaled
// univariate t.
struct TsDistribution {
  TsKind kind = TsKind::kGaussian;
  double dof = 3.0;
};

TsDistribution ParseTsDistribution(const std::string& name, double dof = 3.0);
std::string TsDistributionName(const TsDistribution& dist);

// beta = v sqrt(2 log(2K(K+1)/delta) + logdet_ratio)
//        + zeta max(log^{3/4} K, 1).
// logdet_ratio in [-1e-9, 0) is treated as 0. Throws std::invalid_argument
// for delta outside (0,1), negative v or zeta, K < 1 or a negative ratio.
double Beta(double delta, double v, double zeta, int num_stages,
            double logdet_ratio);

// One draw of eta in R^dim.
Eigen::VectorXd DrawPerturbation(int dim, const TsDistribution& dist,
                                 Rng& rng);

struct ThetaDraw {
  Eigen::VectorXd theta;  // mean + beta * cov_sqrt * eta
  Eigen::VectorXd eta;
  double beta = 0.0;
};

ThetaDraw DrawTheta(const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov_sqrt, double beta,
                    const TsDistribution& dist, Rng& rng);

// Pr(score < 0) for score = mean_score + scale * Z, Z from the perturbation
// law. A zero scale gives 1{mean_score < 0}.
double NegativeProbability(double mean_score, double scale,
                           const TsDistribution& dist);

// Pr(x^T theta~ < 0) with theta~ = mean + beta cov^{1/2} eta, clipped to
// [pi_min, pi_max].
double ControlProbability(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov, double beta,
                          const TsDistribution& dist, double pi_min,
                          double pi_max);

// 1-based index of the arm maximizing x_a^T theta; ties go to the lowest
// index. Throws std::invalid_argument for an empty candidate set.
int ArgmaxArm(std::span<const Eigen::VectorXd> arm_features,
              const Eigen::VectorXd& theta);

}  // namespace rome

#endif  // ROME_EXPLORATION_H_
