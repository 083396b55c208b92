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

#include "rome/exploration.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rome/stats.h"

namespace rome {

TsDistribution ParseTsDistribution(const std::string& name, double dof) {
  if (name == "gaussian" || name == "normal") return {TsKind::kGaussian, dof};
  if (name == "student_t" || name == "t") {
    if (!(dof > 2.0)) {
      throw std::invalid_argument("Student-t perturbations need dof > 2");
    }
    return {TsKind::kStudentT, dof};
  }
  throw std::invalid_argument("unknown perturbation distribution: " + name);
}

std::string TsDistributionName(const TsDistribution& dist) {
  return dist.kind == TsKind::kGaussian ? "gaussian" : "student_t";
}

double Beta(double delta, double v, double zeta, int num_stages,
            double logdet_ratio) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (v < 0.0 || zeta < 0.0) {
    throw std::invalid_argument("v and zeta must be non-negative");
  }
  if (num_stages < 1) throw std::invalid_argument("K must be >= 1");
  if (logdet_ratio < 0.0) {
    if (logdet_ratio < -1e-9) {
      throw std::invalid_argument("negative log-determinant ratio");
    }
    logdet_ratio = 0.0;
  }
  const double k = num_stages;
  const double radius =
      std::sqrt(2.0 * std::log(2.0 * k * (k + 1.0) / delta) + logdet_ratio);
  const double growth = std::max(std::pow(std::log(k), 0.75), 1.0);
  return v * radius + zeta * growth;
}

Eigen::VectorXd DrawPerturbation(int dim, const TsDistribution& dist,
                                 Rng& rng) {
  Eigen::VectorXd eta(dim);
  for (int j = 0; j < dim; ++j) eta(j) = rng.Normal();
  if (dist.kind == TsKind::kStudentT) {
    eta *= std::sqrt(dist.dof / rng.ChiSquared(dist.dof));
  }
  return eta;
}

ThetaDraw DrawTheta(const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov_sqrt, double beta,
                    const TsDistribution& dist, Rng& rng) {
  ThetaDraw draw;
  draw.beta = beta;
  draw.eta = DrawPerturbation(static_cast<int>(mean.size()), dist, rng);
  draw.theta = mean + beta * (cov_sqrt * draw.eta);
  return draw;
}

double NegativeProbability(double mean_score, double scale,
                           const TsDistribution& dist) {
  if (!(scale > 0.0)) return mean_score < 0.0 ? 1.0 : 0.0;
  const double z = -mean_score / scale;
  return dist.kind == TsKind::kGaussian ? NormalCdf(z)
                                        : StudentTCdf(z, dist.dof);
}

double ControlProbability(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov, double beta,
                          const TsDistribution& dist, double pi_min,
                          double pi_max) {
  const double var = std::max(x.dot(cov * x), 0.0);
  const double raw =
      NegativeProbability(x.dot(mean), beta * std::sqrt(var), dist);
  return std::clamp(raw, pi_min, pi_max);
}

int ArgmaxArm(std::span<const Eigen::VectorXd> arm_features,
              const Eigen::VectorXd& theta) {
  if (arm_features.empty()) {
    throw std::invalid_argument("no candidate arms");
  }
  int best = 0;
  double best_score = arm_features[0].dot(theta);
  for (size_t a = 1; a < arm_features.size(); ++a) {
    const double score = arm_features[a].dot(theta);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(a);
    }
  }
  return best + 1;
}

}  // namespace rome
