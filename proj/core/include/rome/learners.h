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

// Online base learners for reward working models. Each learner sees
// (context, action, reward) records one at a time and predicts the mean
// reward of an action at a context.

#ifndef ROME_LEARNERS_H_
#define ROME_LEARNERS_H_

#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace rome {

class OnlineRegressor {
 public:
  virtual ~OnlineRegressor() = default;
  virtual double Predict(const Eigen::VectorXd& context, int action) const = 0;
  virtual void Update(const Eigen::VectorXd& context, int action,
                      double reward) = 0;
  virtual std::unique_ptr<OnlineRegressor> Clone() const = 0;
};

// All monomials of `context` with total degree <= `degree`, constant first.
Eigen::VectorXd PolynomialFeatures(const Eigen::VectorXd& context, int degree);

// Ridge regression on [p(s), 1{a=1} p(s), ..., 1{a=q} p(s)] with p the
// polynomial map. The inverse Gram matrix is maintained by rank-one updates.
class OnlineRidge final : public OnlineRegressor {
 public:
  OnlineRidge(int context_dim, int num_arms, int degree, double penalty);

  double Predict(const Eigen::VectorXd& context, int action) const override;
  void Update(const Eigen::VectorXd& context, int action,
              double reward) override;
  std::unique_ptr<OnlineRegressor> Clone() const override;

  Eigen::VectorXd Features(const Eigen::VectorXd& context, int action) const;
  const Eigen::VectorXd& coefficients() const { return coef_; }

 private:
  int num_arms_;
  int degree_;
  int block_;
  Eigen::MatrixXd inverse_;
  Eigen::VectorXd xty_;
  Eigen::VectorXd coef_;
};

struct TreeOptions {
  int max_depth = 6;
  int min_samples_split = 24;
  int min_samples_leaf = 6;
  // A split must remove at least this fraction of the node's squared error.
  double min_gain_fraction = 0.02;
  // Pseudo-count pulling an action's leaf mean toward the pooled leaf mean.
  double action_prior_count = 2.0;
};

// Regression tree grown online over the context. Each leaf buffers its
// records until it holds `min_samples_split` of them, then takes the best
// axis-aligned split by exact search; buffered records move to the children.
// Leaves predict per-action means shrunk toward the pooled leaf mean.
class OnlineRegressionTree final : public OnlineRegressor {
 public:
  OnlineRegressionTree(int context_dim, int num_arms, TreeOptions options = {});
  OnlineRegressionTree(const OnlineRegressionTree& other);
  OnlineRegressionTree& operator=(const OnlineRegressionTree&) = delete;

  double Predict(const Eigen::VectorXd& context, int action) const override;
  void Update(const Eigen::VectorXd& context, int action,
              double reward) override;
  std::unique_ptr<OnlineRegressor> Clone() const override;

  int num_leaves() const;
  int depth() const;

 private:
  struct Sample {
    Eigen::VectorXd context;
    int action;
    double reward;
  };
  struct Node {
    int depth = 0;
    int feature = -1;
    double threshold = 0.0;
    std::unique_ptr<Node> left, right;
    // Leaf statistics indexed by action.
    std::vector<double> count, sum;
    std::vector<Sample> buffer;
    int since_last_try = 0;
    bool is_leaf() const { return feature < 0; }
  };

  std::unique_ptr<Node> NewLeaf(int depth) const;
  std::unique_ptr<Node> CopyNode(const Node& node) const;
  void AddToLeaf(Node& leaf, Sample sample) const;
  void TrySplit(Node& leaf) const;
  double SquaredError(const std::vector<double>& count,
                      const std::vector<double>& sum,
                      const std::vector<double>& sum_sq) const;
  const Node& FindLeaf(const Eigen::VectorXd& context) const;
  Node& FindLeaf(const Eigen::VectorXd& context);

  int context_dim_;
  int num_arms_;
  TreeOptions options_;
  std::unique_ptr<Node> root_;
};

}  // namespace rome

#endif  // ROME_LEARNERS_H_
