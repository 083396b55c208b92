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

#include "rome/reward_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rome {

FixedModel::FixedModel(Fn fn, double bound) : fn_(std::move(fn)), bound_(bound) {
  if (!fn_ || !(bound > 0.0)) {
    throw std::invalid_argument("FixedModel needs a function and bound > 0");
  }
}

double FixedModel::Predict(const Eigen::VectorXd& context, int action) const {
  return std::clamp(fn_(context, action), -bound_, bound_);
}

BaggedRegressor::BaggedRegressor(const OnlineRegressor& prototype, int bags,
                                 double subsample, Rng rng, BoundRule bound)
    : subsample_(subsample), rng_(rng), bound_rule_(bound) {
  if (bags < 1) throw std::invalid_argument("bags must be >= 1");
  if (!(subsample > 0.0 && subsample <= 1.0)) {
    throw std::invalid_argument("subsample must lie in (0, 1]");
  }
  if (bound.fixed && !(*bound.fixed > 0.0)) {
    throw std::invalid_argument("working-model bound must be positive");
  }
  if (!(bound.multiplier > 0.0)) {
    throw std::invalid_argument("bound multiplier must be positive");
  }
  bags_.reserve(bags);
  for (int b = 0; b < bags; ++b) bags_.push_back(prototype.Clone());
}

double BaggedRegressor::bound() const {
  if (bound_rule_.fixed) return *bound_rule_.fixed;
  return bound_rule_.multiplier * max_abs_reward_;
}

double BaggedRegressor::Predict(const Eigen::VectorXd& context,
                                int action) const {
  double total = 0.0;
  for (const auto& bag : bags_) total += bag->Predict(context, action);
  const double m = bound();
  return std::clamp(total / static_cast<double>(bags_.size()), -m, m);
}

void BaggedRegressor::Update(const Eigen::VectorXd& context, int action,
                             double reward) {
  if (!std::isfinite(reward) || !context.allFinite()) {
    throw std::invalid_argument("non-finite training record");
  }
  max_abs_reward_ = std::max(max_abs_reward_, std::abs(reward));
  ++records_seen_;
  for (auto& bag : bags_) {
    if (subsample_ >= 1.0 || rng_.Bernoulli(subsample_)) {
      bag->Update(context, action, reward);
    }
  }
}

LearnerKind ParseLearnerKind(const std::string& name) {
  if (name == "zero") return LearnerKind::kZero;
  if (name == "ridge") return LearnerKind::kRidge;
  if (name == "tree") return LearnerKind::kTree;
  throw std::invalid_argument("unknown learner: " + name);
}

std::string LearnerKindName(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kZero:
      return "zero";
    case LearnerKind::kRidge:
      return "ridge";
    case LearnerKind::kTree:
      return "tree";
  }
  return "unknown";
}

std::unique_ptr<WorkingModel> MakeWorkingModel(const LearnerSpec& spec,
                                               int context_dim, int num_arms,
                                               Rng rng) {
  switch (spec.kind) {
    case LearnerKind::kZero:
      return std::make_unique<ZeroModel>();
    case LearnerKind::kRidge: {
      OnlineRidge proto(context_dim, num_arms, spec.ridge_degree,
                        spec.ridge_penalty);
      return std::make_unique<BaggedRegressor>(proto, spec.bags,
                                               spec.subsample, rng, spec.bound);
    }
    case LearnerKind::kTree: {
      OnlineRegressionTree proto(context_dim, num_arms, spec.tree);
      return std::make_unique<BaggedRegressor>(proto, spec.bags,
                                               spec.subsample, rng, spec.bound);
    }
  }
  throw std::invalid_argument("invalid learner kind");
}

PseudoReward MakePseudoReward(double f_arm, double f_zero, int arm, int action,
                              double reward, double pi0) {
  if (arm < 1) throw std::invalid_argument("arm must be a non-baseline arm");
  if (action != 0 && action != arm) {
    throw std::invalid_argument("action must be 0 or the proposed arm");
  }
  if (!(pi0 > 0.0 && pi0 < 1.0)) {
    throw std::invalid_argument("pi0 must lie in (0, 1)");
  }
  if (!std::isfinite(reward) || !std::isfinite(f_arm) ||
      !std::isfinite(f_zero)) {
    throw std::invalid_argument("non-finite pseudo-reward input");
  }
  const double f_taken = action == arm ? f_arm : f_zero;
  const double indicator = action == arm ? 1.0 : 0.0;
  PseudoReward out;
  out.value = (f_arm - f_zero) + (reward - f_taken) / (indicator - pi0);
  out.weight = pi0 * (1.0 - pi0);
  out.arm = arm;
  return out;
}

double PseudoRewardVariance(double r_arm, double r_zero, double f_arm,
                            double f_zero, double pi0, double sigma2) {
  if (!(pi0 > 0.0 && pi0 < 1.0)) {
    throw std::invalid_argument("pi0 must lie in (0, 1)");
  }
  const double ea = r_arm - f_arm;
  const double e0 = r_zero - f_zero;
  return (ea * ea + sigma2) / (1.0 - pi0) + (e0 * e0 + sigma2) / pi0 -
         (ea - e0) * (ea - e0);
}

double PseudoRewardVarianceBound(double sigma2, double bound, double pi_min,
                                 double pi_max) {
  const double m2 = bound * bound;
  return (2.0 * sigma2 + 4.0 * m2) / std::min(pi_min, 1.0 - pi_max) +
         8.0 * m2;
}

PseudoReward MakePseudoReward(const WorkingModel& f,
                              const Eigen::VectorXd& context, int arm,
                              int action, double reward, double pi0) {
  return MakePseudoReward(f.Predict(context, arm), f.Predict(context, 0), arm,
                          action, reward, pi0);
}

FoldMode ParseFoldMode(const std::string& name) {
  if (name == "user" || name == "option1") return FoldMode::kByUser;
  if (name == "decision" || name == "option2") return FoldMode::kByDecision;
  throw std::invalid_argument("unknown fold mode: " + name);
}

std::string FoldModeName(FoldMode mode) {
  return mode == FoldMode::kByUser ? "user" : "decision";
}

std::uint64_t FoldAssignment::Key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

FoldAssignment FoldAssignment::Assign(FoldMode mode, int num_folds,
                                      std::span<const Unit> units, Rng& rng) {
  if (num_folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (units.empty()) throw std::invalid_argument("no units to assign");
  FoldAssignment out;
  out.mode_ = mode;
  out.num_folds_ = num_folds;
  for (const Unit& u : units) {
    const std::uint64_t key =
        mode == FoldMode::kByUser ? Key(u.user, 0) : Key(u.user, u.time);
    if (!out.folds_.contains(key)) out.folds_[key] = rng.UniformInt(num_folds);
  }
  return out;
}

bool FoldAssignment::Contains(const Unit& unit) const {
  const std::uint64_t key = mode_ == FoldMode::kByUser
                                ? Key(unit.user, 0)
                                : Key(unit.user, unit.time);
  return folds_.contains(key);
}

int FoldAssignment::Fold(const Unit& unit) const {
  const std::uint64_t key = mode_ == FoldMode::kByUser
                                ? Key(unit.user, 0)
                                : Key(unit.user, unit.time);
  auto it = folds_.find(key);
  if (it == folds_.end()) {
    throw std::out_of_range("unit (" + std::to_string(unit.user) + ", " +
                            std::to_string(unit.time) + ") has no fold");
  }
  return it->second;
}

CrossFittedModel::CrossFittedModel(
    FoldAssignment assignment,
    std::vector<std::unique_ptr<WorkingModel>> models, bool keep_training_log)
    : assignment_(std::move(assignment)),
      models_(std::move(models)),
      keep_training_log_(keep_training_log) {
  if (static_cast<int>(models_.size()) != assignment_.num_folds()) {
    throw std::invalid_argument("need one working model per fold");
  }
  for (const auto& m : models_) {
    if (!m) throw std::invalid_argument("null working model");
  }
  training_log_.resize(models_.size());
}

const WorkingModel& CrossFittedModel::ModelFor(const Unit& unit) const {
  return *models_[assignment_.Fold(unit)];
}

double CrossFittedModel::Predict(const Unit& unit,
                                 const Eigen::VectorXd& context,
                                 int action) const {
  const WorkingModel& m = ModelFor(unit);
  return std::clamp(m.Predict(context, action), -m.bound(), m.bound());
}

void CrossFittedModel::Update(const Unit& unit, const Eigen::VectorXd& context,
                              int action, double reward) {
  const int own = assignment_.Fold(unit);
  for (int j = 0; j < static_cast<int>(models_.size()); ++j) {
    if (j == own) continue;
    models_[j]->Update(context, action, reward);
    if (keep_training_log_) training_log_[j].push_back(unit);
  }
}

}  // namespace rome
