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

#include "rome/policy.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rome {
namespace {

ParamLayout MakeLayout(const EngineSpec& spec, const ProblemShape& shape,
                       int block) {
  return ParamLayout(shape.num_users, shape.num_times, block, spec.layout);
}

PenaltyMatrix MakePenalty(const EngineSpec& spec, const ProblemShape& shape,
                          const ParamLayout& layout) {
  if (shape.user_graph.num_vertices() != shape.num_users ||
      shape.time_graph.num_vertices() != shape.num_times) {
    throw std::invalid_argument("graph sizes do not match the study shape");
  }
  return BuildPenalty(layout, spec.penalty, Laplacian(shape.user_graph),
                      Laplacian(shape.time_graph));
}

}  // namespace

void PolicyConfig::Validate() const {
  if (!(pi_min > 0.0 && pi_max < 1.0 && pi_min < pi_max)) {
    throw std::invalid_argument("need 0 < pi_min < pi_max < 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(v > 0.0)) throw std::invalid_argument("v must be positive");
  if (!(zeta >= 0.0)) throw std::invalid_argument("zeta must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (ts.kind == TsKind::kStudentT && !(ts.dof > 2.0)) {
    throw std::invalid_argument("Student-t perturbations need dof > 2");
  }
  if (num_arms < 1) throw std::invalid_argument("need at least one arm");
}

ExplorationScale ParseExplorationScale(const std::string& name) {
  if (name == "beta") return ExplorationScale::kBeta;
  if (name == "posterior") return ExplorationScale::kPosterior;
  throw std::invalid_argument("unknown exploration scale: " + name);
}

std::string ExplorationScaleName(ExplorationScale scale) {
  return scale == ExplorationScale::kBeta ? "beta" : "posterior";
}

BaselineMap::BaselineMap(BaselineFeatures kind, int context_dim,
                         int num_features, double bandwidth,
                         std::uint64_t seed)
    : kind_(kind), context_dim_(context_dim) {
  switch (kind) {
    case BaselineFeatures::kNone:
      dim_ = 0;
      break;
    case BaselineFeatures::kLinear:
      dim_ = 1 + context_dim;
      break;
    case BaselineFeatures::kRandomFourier: {
      if (num_features < 1 || !(bandwidth > 0.0)) {
        throw std::invalid_argument("invalid random feature map");
      }
      dim_ = 1 + context_dim + num_features;
      Rng rng(seed);
      frequencies_.resize(num_features, context_dim);
      phases_.resize(num_features);
      for (int m = 0; m < num_features; ++m) {
        for (int j = 0; j < context_dim; ++j) {
          frequencies_(m, j) = rng.Normal(0.0, 1.0 / bandwidth);
        }
        phases_(m) = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      }
      break;
    }
  }
}

Eigen::VectorXd BaselineMap::operator()(const Eigen::VectorXd& context) const {
  Eigen::VectorXd z(dim_);
  if (dim_ == 0) return z;
  z(0) = 1.0;
  z.segment(1, context_dim_) = context;
  if (kind_ == BaselineFeatures::kRandomFourier) {
    const double scale = std::sqrt(2.0 / static_cast<double>(phases_.size()));
    z.tail(phases_.size()) =
        scale * ((frequencies_ * context + phases_).array().cos()).matrix();
  }
  return z;
}

MixedEffectsPolicy::MixedEffectsPolicy(EngineSpec spec, PolicyConfig config,
                                       const ProblemShape& shape, Rng rng)
    : spec_(std::move(spec)),
      config_(config),
      num_stages_(shape.num_stages),
      feature_dim_(shape.feature_dim),
      baseline_(spec_.target == Target::kRawReward ? spec_.baseline
                                                   : BaselineFeatures::kNone,
                shape.context_dim, spec_.fourier_features,
                spec_.fourier_bandwidth, spec_.fourier_seed),
      layout_(MakeLayout(spec_, shape, baseline_.dim() + shape.feature_dim)),
      state_(MakePenalty(spec_, shape, layout_)),
      rng_(rng) {
  config_.Validate();
  if (shape.num_arms != config_.num_arms) {
    throw std::invalid_argument("arm count differs between shape and config");
  }
  if (spec_.scale == ExplorationScale::kPosterior &&
      !(spec_.posterior_scale > 0.0)) {
    throw std::invalid_argument("posterior scale must be positive");
  }
  if (spec_.target == Target::kPseudoReward &&
      spec_.learner.kind != LearnerKind::kZero) {
    Rng fold_rng = rng_.Split();
    FoldAssignment folds = FoldAssignment::Assign(
        spec_.fold_mode, spec_.num_folds, shape.units, fold_rng);
    std::vector<std::unique_ptr<WorkingModel>> models;
    for (int j = 0; j < spec_.num_folds; ++j) {
      models.push_back(MakeWorkingModel(spec_.learner, shape.context_dim,
                                        shape.num_arms, rng_.Split()));
    }
    model_ = std::make_unique<CrossFittedModel>(
        std::move(folds), std::move(models), spec_.audit_folds);
  }
}

double MixedEffectsPolicy::Radius(const BlockCovariance& block) const {
  if (spec_.scale == ExplorationScale::kPosterior) return spec_.posterior_scale;
  return Beta(config_.delta, config_.v, config_.zeta, num_stages_,
              block.log_det_ratio);
}

Decision MixedEffectsPolicy::Decide(const DecisionPoint& point) {
  if (static_cast<int>(point.arm_features.size()) != config_.num_arms) {
    throw std::invalid_argument("expected one feature vector per arm");
  }
  const Selector sel = layout_.Select(point.user, point.time);
  const BlockCovariance block = ComputeBlockCovariance(state_, sel);
  const double beta = Radius(block);
  const int p = baseline_.dim();
  const int d = feature_dim_;

  Decision out;
  out.draw = DrawTheta(block.mean, block.cov_sqrt, beta, config_.ts, rng_);
  const Eigen::VectorXd advantage = out.draw.theta.segment(p, d);
  out.arm_bar = ArgmaxArm(point.arm_features, advantage);
  out.pi0 = ControlProbability(point.arm_features[out.arm_bar - 1],
                               block.mean.segment(p, d),
                               block.cov.block(p, p, d, d), beta, config_.ts,
                               config_.pi_min, config_.pi_max);
  out.action = rng_.Bernoulli(out.pi0) ? 0 : out.arm_bar;
  return out;
}

Eigen::VectorXd MixedEffectsPolicy::DesignRow(const DecisionPoint& point,
                                              const Outcome& outcome) const {
  if (spec_.target == Target::kPseudoReward) {
    return point.arm_features.at(outcome.arm_bar - 1);
  }
  Eigen::VectorXd row = Eigen::VectorXd::Zero(baseline_.dim() + feature_dim_);
  row.head(baseline_.dim()) = baseline_(point.context);
  if (outcome.action > 0) {
    row.tail(feature_dim_) = point.arm_features.at(outcome.action - 1);
  }
  return row;
}

UpdateRecord MixedEffectsPolicy::Observe(const DecisionPoint& point,
                                         const Outcome& outcome) {
  if (outcome.arm_bar < 1 || outcome.arm_bar > config_.num_arms) {
    throw std::invalid_argument("proposed arm out of range");
  }
  const Unit unit{point.user, point.time};
  UpdateRecord rec;
  if (spec_.target == Target::kPseudoReward) {
    double f_arm = 0.0, f_zero = 0.0;
    if (model_) {
      f_arm = model_->Predict(unit, point.context, outcome.arm_bar);
      f_zero = model_->Predict(unit, point.context, 0);
    }
    const PseudoReward pr =
        MakePseudoReward(f_arm, f_zero, outcome.arm_bar, outcome.action,
                         outcome.reward, outcome.pi0);
    rec = {pr.value, pr.weight};
  } else {
    if (outcome.action < 0 || outcome.action > config_.num_arms) {
      throw std::invalid_argument("action out of range");
    }
    rec = {outcome.reward, 1.0};
  }
  const Selector sel = layout_.Select(point.user, point.time);
  Pending p{sel.Embed(DesignRow(point, outcome)), rec.weight, rec.target, unit,
            point.context, outcome.action, outcome.reward};
  if (spec_.batch) {
    pending_.push_back(std::move(p));
  } else {
    Apply(p);
  }
  return rec;
}

void MixedEffectsPolicy::Apply(const Pending& p) {
  state_.RankOneUpdate(p.phi, p.weight, p.target);
  if (model_) model_->Update(p.unit, p.context, p.action, p.reward);
}

void MixedEffectsPolicy::BeginStage(int /*stage*/) {}

void MixedEffectsPolicy::EndStage(int /*stage*/) {
  for (const Pending& p : pending_) Apply(p);
  pending_.clear();
}

}  // namespace rome
