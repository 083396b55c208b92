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

#include "rome/gram.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace rome {

Eigen::VectorXd Selector::Apply(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int off : offsets) out += theta.segment(off, d);
  return out;
}

SparseVector Selector::Embed(const Eigen::VectorXd& x) const {
  SparseVector phi(dim);
  phi.reserve(static_cast<Eigen::Index>(offsets.size()) * d);
  std::vector<int> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  for (int off : sorted) {
    for (int j = 0; j < d; ++j) {
      if (x[j] != 0.0) phi.insertBack(off + j) = x[j];
    }
  }
  return phi;
}

Eigen::MatrixXd Selector::Dense() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, dim);
  for (int off : offsets) c.middleCols(off, d) += Eigen::MatrixXd::Identity(d, d);
  return c;
}

GramState::GramState(PenaltyMatrix v0, int refresh_interval)
    : v0_(std::move(v0)),
      dim_(v0_.dim()),
      refresh_interval_(refresh_interval),
      gram_(v0_.Dense()),
      inverse_(v0_.Inverse()),
      b_(Eigen::VectorXd::Zero(v0_.dim())) {}

void GramState::AccumulateColumn(int k, double scale,
                                 Eigen::VectorXd& out) const {
  const int tail = dim_ - k;
  out.tail(tail) += scale * inverse_.col(k).tail(tail);
  if (k > 0) out.head(k) += scale * inverse_.row(k).head(k).transpose();
}

Eigen::VectorXd GramState::InverseTimes(const SparseVector& phi) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (SparseVector::InnerIterator it(phi); it; ++it) {
    AccumulateColumn(static_cast<int>(it.index()), it.value(), out);
  }
  return out;
}

Eigen::MatrixXd GramState::InverseTimesSelector(const Selector& c) const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim_, c.d);
  for (int j = 0; j < c.d; ++j) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(dim_);
    for (int off : c.offsets) AccumulateColumn(off + j, 1.0, col);
    w.col(j) = col;
  }
  return w;
}

void GramState::RankOneUpdate(const SparseVector& phi, double weight,
                              double target) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("RankOneUpdate: weight must be finite and > 0");
  }
  if (!std::isfinite(target)) {
    throw std::invalid_argument("RankOneUpdate: non-finite target");
  }
  if (phi.size() != dim_) {
    throw std::invalid_argument("RankOneUpdate: feature dimension mismatch");
  }
  for (SparseVector::InnerIterator it(phi); it; ++it) {
    if (!std::isfinite(it.value())) {
      throw std::invalid_argument("RankOneUpdate: non-finite feature");
    }
  }

  for (SparseVector::InnerIterator i(phi); i; ++i) {
    b_[i.index()] += weight * target * i.value();
    for (SparseVector::InnerIterator j(phi); j; ++j) {
      gram_(i.index(), j.index()) += weight * i.value() * j.value();
    }
  }

  // (V + w u u^T)^{-1} = V^{-1} - w V^{-1}u u^T V^{-1} / (1 + w u^T V^{-1} u)
  const Eigen::VectorXd u = InverseTimes(phi);
  double quad = 0.0;
  for (SparseVector::InnerIterator it(phi); it; ++it) {
    quad += it.value() * u[it.index()];
  }
  const double scale = weight / (1.0 + weight * quad);
  inverse_.selfadjointView<Eigen::Lower>().rankUpdate(u, -scale);

  ++update_count_;
  if (refresh_interval_ > 0 && update_count_ % refresh_interval_ == 0) {
    Refresh();
  }
}

Eigen::VectorXd GramState::Theta() const {
  return inverse_.selfadjointView<Eigen::Lower>() * b_;
}

Eigen::MatrixXd GramState::Inverse() const {
  Eigen::MatrixXd full = inverse_.selfadjointView<Eigen::Lower>();
  return full;
}

double GramState::InverseEntry(int row, int col) const {
  return row >= col ? inverse_(row, col) : inverse_(col, row);
}

double GramState::InverseResidual() const {
  const Eigen::MatrixXd product =
      gram_ * Eigen::MatrixXd(inverse_.selfadjointView<Eigen::Lower>());
  return (product - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
}

bool GramState::EnsureConsistent(double tol) {
  if (InverseResidual() <= tol) return false;
  Refresh();
  return true;
}

void GramState::Refresh() {
  Eigen::LLT<Eigen::MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("GramState: V lost positive definiteness",
                         std::numeric_limits<double>::infinity());
  }
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
}

Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd values = eig.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values[i] = values[i] > floor ? std::sqrt(values[i]) : 0.0;
  }
  return eig.eigenvectors() * values.asDiagonal() *
         eig.eigenvectors().transpose();
}

namespace {

double ConditionEstimate(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

double LogDetSpd(const Eigen::MatrixXd& m, const char* name) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    const double cond = ConditionEstimate(m);
    throw NumericalError(std::string(name) +
                             " is numerically singular (condition estimate " +
                             std::to_string(cond) + ")",
                         cond);
  }
  const Eigen::MatrixXd l = llt.matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

BlockCovariance ComputeBlockCovariance(const GramState& state,
                                       const Selector& c) {
  const Eigen::MatrixXd w = state.InverseTimesSelector(c);  // V^{-1} C^T
  BlockCovariance out;
  out.mean = w.transpose() * state.b();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(c.d, c.d);
  for (int off : c.offsets) cov += w.middleRows(off, c.d);
  out.cov = 0.5 * (cov + cov.transpose());
  const Eigen::MatrixXd v0w = state.v0().sparse() * w;
  const Eigen::MatrixXd lambda0 = w.transpose() * v0w;
  out.lambda0 = 0.5 * (lambda0 + lambda0.transpose());
  out.cov_sqrt = PsdSqrt(out.cov);
  out.log_det_cov = LogDetSpd(out.cov, "C V^-1 C^T");
  out.log_det_lambda0 = LogDetSpd(out.lambda0, "Lambda0");
  out.log_det_ratio = out.log_det_cov - out.log_det_lambda0;
  return out;
}

}  // namespace rome
