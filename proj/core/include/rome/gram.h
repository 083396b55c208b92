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

// Penalized weighted Gram matrix with an incrementally maintained inverse.
//
//   V = V0 + sum_n w_n phi_n phi_n^T,   b = sum_n w_n y_n phi_n,
//   theta_hat = V^{-1} b.
//
// The inverse is kept up to date with Sherman-Morrison updates and recomputed
// exactly from V every `refresh_interval` updates.

#ifndef ROME_GRAM_H_
#define ROME_GRAM_H_

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rome/graph.h"

namespace rome {

using SparseVector = Eigen::SparseVector<double>;

// Thrown when a matrix that must be positive definite is numerically
// singular. Carries an estimate of its condition number.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Selector C = sum_k E_k where E_k places I_d at column offset k. C theta sums
// the selected d-blocks; C^T x copies x into each of them.
struct Selector {
  int dim = 0;
  int d = 0;
  std::vector<int> offsets;

  Eigen::VectorXd Apply(const Eigen::VectorXd& theta) const;
  SparseVector Embed(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd Dense() const;
};

class GramState {
 public:
  static constexpr int kDefaultRefreshInterval = 5000;

  // V = V0, b = 0. Throws std::domain_error if V0 is singular.
  explicit GramState(PenaltyMatrix v0,
                     int refresh_interval = kDefaultRefreshInterval);

  int dim() const { return dim_; }
  long update_count() const { return update_count_; }
  const PenaltyMatrix& v0() const { return v0_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& b() const { return b_; }

  // V += w phi phi^T, b += w y phi, Sherman-Morrison on the inverse. Cost is
  // O(dim * nnz(phi)) for the product plus one symmetric rank-one update.
  // Requires w > 0 and finite inputs.
  void RankOneUpdate(const SparseVector& phi, double weight, double target);

  // V^{-1} b.
  Eigen::VectorXd Theta() const;

  // Full symmetric copy of the maintained inverse.
  Eigen::MatrixXd Inverse() const;
  double InverseEntry(int row, int col) const;

  // V^{-1} C^T for a selector, dim x d.
  Eigen::MatrixXd InverseTimesSelector(const Selector& c) const;
  // V^{-1} phi for a sparse vector.
  Eigen::VectorXd InverseTimes(const SparseVector& phi) const;

  // max |V V^{-1} - I|.
  double InverseResidual() const;
  // Recomputes the inverse from V when the residual exceeds `tol`. Returns
  // true if a recompute happened.
  bool EnsureConsistent(double tol = 1e-6);
  // Exact recompute of the inverse from V.
  void Refresh();

 private:
  // out += scale * column k of the symmetric inverse.
  void AccumulateColumn(int k, double scale, Eigen::VectorXd& out) const;

  PenaltyMatrix v0_;
  int dim_;
  int refresh_interval_;
  long update_count_ = 0;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd inverse_;  // only the lower triangle is meaningful
  Eigen::VectorXd b_;
};

// Per-decision covariance quantities for the selector C of one decision
// point.
struct BlockCovariance {
  Eigen::VectorXd mean;          // C theta_hat
  Eigen::MatrixXd cov;           // C V^{-1} C^T
  Eigen::MatrixXd cov_sqrt;      // PSD square root of cov
  Eigen::MatrixXd lambda0;       // C V^{-1} V0 V^{-1} C^T
  double log_det_cov = 0.0;
  double log_det_lambda0 = 0.0;
  double log_det_ratio = 0.0;    // log det cov - log det lambda0
};

// Throws NumericalError when cov or lambda0 is not numerically positive
// definite.
BlockCovariance ComputeBlockCovariance(const GramState& state,
                                       const Selector& c);

// Symmetric PSD square root with eigenvalues below `floor` clipped to zero.
Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, double floor = 1e-12);

// log det of a symmetric positive definite matrix via Cholesky. Throws
// NumericalError otherwise.
double LogDetSpd(const Eigen::MatrixXd& m, const char* name);

}  // namespace rome

#endif  // ROME_GRAM_H_
