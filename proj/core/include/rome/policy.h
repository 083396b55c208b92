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

// Decision interface shared by all policies, and the mixed-effects engine
// behind RoME and the linear baselines.
//
// The engine keeps one GramState over a block layout. Each decision point
// (i, t) selects its blocks, draws a perturbed parameter, proposes the arm
// with the largest perturbed advantage and plays the control action with
// the clipped probability that the advantage is negative. Observations are
// either doubly robust pseudo-rewards of the advantage (weight pi0(1-pi0))
// or raw rewards regressed on [baseline features, x(s,A)] (weight 1).

#ifndef ROME_POLICY_H_
#define ROME_POLICY_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rome/exploration.h"
#include "rome/gram.h"
#include "rome/graph.h"
#include "rome/layout.h"
#include "rome/reward_model.h"
#include "rome/rng.h"

namespace rome {

struct PolicyConfig {
  double pi_min = 0.1;
  double pi_max = 0.9;
  double delta = 0.01;
  double v = 1.0;
  double zeta = 10.0;
  double gamma = 1.0;
  double lambda = 1.0;
  TsDistribution ts;
  int num_arms = 1;

  // Throws std::invalid_argument when a value is out of range.
  void Validate() const;
};

// Everything a policy needs to know about the study before it starts.
struct ProblemShape {
  int num_stages = 1;
  int num_users = 1;
  int num_times = 1;
  int context_dim = 2;
  int feature_dim = 3;
  int num_arms = 1;
  CohesionGraph user_graph{1, {}};
  CohesionGraph time_graph{1, {}};
  std::vector<Unit> units;
};

struct DecisionPoint {
  int stage = 1;
  int user = 1;
  int time = 1;
  Eigen::VectorXd context;
  std::vector<Eigen::VectorXd> arm_features;  // x(s, a) for a = 1..q
};

struct Decision {
  int arm_bar = 1;
  int action = 0;
  double pi0 = 0.5;
  ThetaDraw draw;
};

// What is fed back after a decision. In simulation this mirrors the
// Decision; in off-policy evaluation it carries the logged action and the
// logging policy's control probability.
struct Outcome {
  int arm_bar = 1;
  int action = 0;
  double pi0 = 0.5;
  double reward = 0.0;
};

// Regression target and weight applied to the Gram state.
struct UpdateRecord {
  double target = 0.0;
  double weight = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual const std::string& name() const = 0;
  virtual Decision Decide(const DecisionPoint& point) = 0;
  virtual UpdateRecord Observe(const DecisionPoint& point,
                               const Outcome& outcome) = 0;
  virtual void BeginStage(int /*stage*/) {}
  virtual void EndStage(int /*stage*/) {}
};

enum class Target { kPseudoReward, kRawReward };
enum class ExplorationScale { kBeta, kPosterior };
enum class BaselineFeatures { kNone, kLinear, kRandomFourier };

ExplorationScale ParseExplorationScale(const std::string& name);
std::string ExplorationScaleName(ExplorationScale scale);

struct EngineSpec {
  std::string name = "RoME";
  LayoutOptions layout;
  PenaltySpec penalty;
  Target target = Target::kPseudoReward;
  BaselineFeatures baseline = BaselineFeatures::kNone;
  int fourier_features = 16;
  double fourier_bandwidth = 0.5;
  std::uint64_t fourier_seed = 20240917;
  LearnerSpec learner;
  FoldMode fold_mode = FoldMode::kByDecision;
  int num_folds = 2;
  ExplorationScale scale = ExplorationScale::kBeta;
  double posterior_scale = 1.0;
  // All decisions of a stage use the state at the start of the stage.
  bool batch = false;
  bool audit_folds = false;
};

// Fixed map z(s) for the baseline reward in raw-reward models.
class BaselineMap {
 public:
  BaselineMap(BaselineFeatures kind, int context_dim, int num_features,
              double bandwidth, std::uint64_t seed);
  int dim() const { return dim_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& context) const;

 private:
  BaselineFeatures kind_;
  int context_dim_;
  int dim_;
  Eigen::MatrixXd frequencies_;
  Eigen::VectorXd phases_;
};

class MixedEffectsPolicy final : public Policy {
 public:
  MixedEffectsPolicy(EngineSpec spec, PolicyConfig config,
                     const ProblemShape& shape, Rng rng);

  const std::string& name() const override { return spec_.name; }
  Decision Decide(const DecisionPoint& point) override;
  UpdateRecord Observe(const DecisionPoint& point,
                       const Outcome& outcome) override;
  void BeginStage(int stage) override;
  void EndStage(int stage) override;

  const EngineSpec& spec() const { return spec_; }
  const PolicyConfig& config() const { return config_; }
  const ParamLayout& layout() const { return layout_; }
  const GramState& state() const { return state_; }
  // Null unless the target is a pseudo-reward with a learned working model.
  const CrossFittedModel* working_model() const { return model_.get(); }
  int baseline_dim() const { return baseline_.dim(); }
  int feature_dim() const { return feature_dim_; }

  Eigen::VectorXd ThetaHat() const { return state_.Theta(); }
  // Row of the regression design for one observation: the advantage
  // features for pseudo-rewards, [z(s), x(s,A)] for raw rewards.
  Eigen::VectorXd DesignRow(const DecisionPoint& point,
                            const Outcome& outcome) const;
  // beta for a decision point under the current state.
  double Radius(const BlockCovariance& block) const;

 private:
  struct Pending {
    SparseVector phi;
    double weight;
    double target;
    Unit unit;
    Eigen::VectorXd context;
    int action;
    double reward;
  };
  void Apply(const Pending& p);

  EngineSpec spec_;
  PolicyConfig config_;
  int num_stages_;
  int feature_dim_;
  BaselineMap baseline_;
  ParamLayout layout_;
  GramState state_;
  std::unique_ptr<CrossFittedModel> model_;
  Rng rng_;
  std::vector<Pending> pending_;
};

}  // namespace rome

#endif  // ROME_POLICY_H_
