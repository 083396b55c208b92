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

// Working models for the conditional mean reward, sample splitting across
// folds, and doubly robust pseudo-rewards for the differential reward.

#ifndef ROME_REWARD_MODEL_H_
#define ROME_REWARD_MODEL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rome/learners.h"
#include "rome/rng.h"

namespace rome {

// Bounded estimate f(s, a) of the mean reward. Predictions are clipped to
// [-bound(), bound()].
class WorkingModel {
 public:
  virtual ~WorkingModel() = default;
  virtual double Predict(const Eigen::VectorXd& context, int action) const = 0;
  virtual void Update(const Eigen::VectorXd& context, int action,
                      double reward) = 0;
  virtual double bound() const = 0;
};

// f = 0.
class ZeroModel final : public WorkingModel {
 public:
  double Predict(const Eigen::VectorXd&, int) const override { return 0.0; }
  void Update(const Eigen::VectorXd&, int, double) override {}
  double bound() const override { return 1.0; }
};

// Fixed function, clipped to the given bound. Ignores updates.
class FixedModel final : public WorkingModel {
 public:
  using Fn = std::function<double(const Eigen::VectorXd&, int)>;
  FixedModel(Fn fn, double bound);
  double Predict(const Eigen::VectorXd& context, int action) const override;
  void Update(const Eigen::VectorXd&, int, double) override {}
  double bound() const override { return bound_; }

 private:
  Fn fn_;
  double bound_;
};

// Either a fixed bound or `multiplier` times the largest |R| seen so far.
struct BoundRule {
  std::optional<double> fixed;
  double multiplier = 10.0;
};

// Online bagging: each record enters each bag with probability `subsample`.
// Predicts the clipped mean of the bag predictions.
class BaggedRegressor final : public WorkingModel {
 public:
  BaggedRegressor(const OnlineRegressor& prototype, int bags, double subsample,
                  Rng rng, BoundRule bound = {});

  double Predict(const Eigen::VectorXd& context, int action) const override;
  void Update(const Eigen::VectorXd& context, int action,
              double reward) override;
  double bound() const override;

  int bags() const { return static_cast<int>(bags_.size()); }
  long records_seen() const { return records_seen_; }

 private:
  std::vector<std::unique_ptr<OnlineRegressor>> bags_;
  double subsample_;
  Rng rng_;
  BoundRule bound_rule_;
  double max_abs_reward_ = 0.0;
  long records_seen_ = 0;
};

enum class LearnerKind { kZero, kRidge, kTree };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kTree;
  int bags = 10;
  double subsample = 0.8;
  int ridge_degree = 2;
  double ridge_penalty = 1.0;
  TreeOptions tree;
  BoundRule bound;
};

LearnerKind ParseLearnerKind(const std::string& name);
std::string LearnerKindName(LearnerKind kind);

// Throws std::invalid_argument for an invalid spec.
std::unique_ptr<WorkingModel> MakeWorkingModel(const LearnerSpec& spec,
                                               int context_dim, int num_arms,
                                               Rng rng);

struct PseudoReward {
  double value = 0.0;
  double weight = 0.0;  // pi0 (1 - pi0)
  int user = 0;
  int time = 0;
  int arm = 0;
};

// R~ = f(s,arm) - f(s,0) + (R - f(s,A)) / (1{A=arm} - pi0), where f_arm,
// f_zero are the working-model predictions at (s,arm) and (s,0). Throws
// std::invalid_argument if A is not 0 or `arm`, or pi0 is outside (0,1).
PseudoReward MakePseudoReward(double f_arm, double f_zero, int arm, int action,
                              double reward, double pi0);
PseudoReward MakePseudoReward(const WorkingModel& f,
                              const Eigen::VectorXd& context, int arm,
                              int action, double reward, double pi0);

// Var(R~) for mean rewards r_arm, r_zero, working-model values f_arm, f_zero
// and noise variance sigma2:
//   ((r_arm - f_arm)^2 + sigma2) / (1 - pi0) + ((r_zero - f_zero)^2 + sigma2)
//   / pi0 - (Delta - Delta_f)^2.
double PseudoRewardVariance(double r_arm, double r_zero, double f_arm,
                            double f_zero, double pi0, double sigma2);

// (2 sigma2 + 4 M^2) / min(pi_min, 1 - pi_max) + 8 M^2.
double PseudoRewardVarianceBound(double sigma2, double bound, double pi_min,
                                 double pi_max);

// Decision point (user, time), 1-based.
struct Unit {
  int user = 0;
  int time = 0;
  friend bool operator==(const Unit&, const Unit&) = default;
};

enum class FoldMode {
  kByUser,      // every decision of a user shares a fold
  kByDecision,  // each (user, time) pair is assigned independently
};

FoldMode ParseFoldMode(const std::string& name);
std::string FoldModeName(FoldMode mode);

class FoldAssignment {
 public:
  // Uniform random fold for each unit (or each distinct user). Throws if
  // num_folds < 2 or `units` is empty.
  static FoldAssignment Assign(FoldMode mode, int num_folds,
                               std::span<const Unit> units, Rng& rng);

  FoldMode mode() const { return mode_; }
  int num_folds() const { return num_folds_; }
  bool Contains(const Unit& unit) const;
  // Throws std::out_of_range for an unassigned unit.
  int Fold(const Unit& unit) const;

 private:
  static std::uint64_t Key(int a, int b);

  FoldMode mode_ = FoldMode::kByDecision;
  int num_folds_ = 0;
  std::unordered_map<std::uint64_t, int> folds_;
};

// One working model per fold. A unit in fold j is predicted by model j, which
// is trained only on records from other folds.
class CrossFittedModel {
 public:
  CrossFittedModel(FoldAssignment assignment,
                   std::vector<std::unique_ptr<WorkingModel>> models,
                   bool keep_training_log = false);

  double Predict(const Unit& unit, const Eigen::VectorXd& context,
                 int action) const;
  void Update(const Unit& unit, const Eigen::VectorXd& context, int action,
              double reward);
  const WorkingModel& ModelFor(const Unit& unit) const;

  const FoldAssignment& assignment() const { return assignment_; }
  // Units each fold model was trained on; empty unless logging is enabled.
  const std::vector<std::vector<Unit>>& training_log() const {
    return training_log_;
  }

 private:
  FoldAssignment assignment_;
  std::vector<std::unique_ptr<WorkingModel>> models_;
  bool keep_training_log_;
  std::vector<std::vector<Unit>> training_log_;
};

}  // namespace rome

#endif  // ROME_REWARD_MODEL_H_
