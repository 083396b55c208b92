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

#include "rome/learners.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rome {
Eigen::VectorXd PolynomialFeatures(const Eigen::VectorXd& context,
                                   int degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
  std::vector<double> terms{1.0};
  // Graded order: all degree-1 terms, then degree-2, and so on.
  for (int deg = 1; deg <= degree; ++deg) {
    std::vector<double> level;
    std::vector<int> idx(deg, 0);
    while (true) {
      double v = 1.0;
      for (int j : idx) v *= context(j);
      level.push_back(v);
      int pos = deg - 1;
      while (pos >= 0 && idx[pos] == context.size() - 1) --pos;
      if (pos < 0) break;
      const int next = idx[pos] + 1;
      for (int q = pos; q < deg; ++q) idx[q] = next;
    }
    terms.insert(terms.end(), level.begin(), level.end());
  }
  return Eigen::Map<Eigen::VectorXd>(terms.data(),
                                     static_cast<Eigen::Index>(terms.size()));
}

OnlineRidge::OnlineRidge(int context_dim, int num_arms, int degree,
                         double penalty)
    : num_arms_(num_arms), degree_(degree) {
  if (context_dim < 1 || num_arms < 1 || degree < 0 || !(penalty > 0.0)) {
    throw std::invalid_argument("invalid OnlineRidge configuration");
  }
  block_ = static_cast<int>(
      PolynomialFeatures(Eigen::VectorXd::Zero(context_dim), degree).size());
  const int dim = (num_arms + 1) * block_;
  inverse_ = Eigen::MatrixXd::Identity(dim, dim) / penalty;
  xty_ = Eigen::VectorXd::Zero(dim);
  coef_ = Eigen::VectorXd::Zero(dim);
}

Eigen::VectorXd OnlineRidge::Features(const Eigen::VectorXd& context,
                                      int action) const {
  if (action < 0 || action > num_arms_) {
    throw std::invalid_argument("action out of range");
  }
  const Eigen::VectorXd p = PolynomialFeatures(context, degree_);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(xty_.size());
  z.head(block_) = p;
  if (action > 0) z.segment(action * block_, block_) = p;
  return z;
}

double OnlineRidge::Predict(const Eigen::VectorXd& context, int action) const {
  return Features(context, action).dot(coef_);
}

void OnlineRidge::Update(const Eigen::VectorXd& context, int action,
                         double reward) {
  const Eigen::VectorXd z = Features(context, action);
  const Eigen::VectorXd u = inverse_ * z;
  inverse_.noalias() -= (u * u.transpose()) / (1.0 + z.dot(u));
  xty_ += reward * z;
  coef_.noalias() = inverse_ * xty_;
}

std::unique_ptr<OnlineRegressor> OnlineRidge::Clone() const {
  return std::make_unique<OnlineRidge>(*this);
}

OnlineRegressionTree::OnlineRegressionTree(int context_dim, int num_arms,
                                           TreeOptions options)
    : context_dim_(context_dim), num_arms_(num_arms), options_(options) {
  if (context_dim < 1 || num_arms < 1 || options.max_depth < 0 ||
      options.min_samples_leaf < 1 ||
      options.min_samples_split < 2 * options.min_samples_leaf ||
      options.action_prior_count < 0.0) {
    throw std::invalid_argument("invalid OnlineRegressionTree configuration");
  }
  root_ = NewLeaf(0);
}

OnlineRegressionTree::OnlineRegressionTree(const OnlineRegressionTree& other)
    : context_dim_(other.context_dim_),
      num_arms_(other.num_arms_),
      options_(other.options_),
      root_(CopyNode(*other.root_)) {}

std::unique_ptr<OnlineRegressionTree::Node> OnlineRegressionTree::NewLeaf(
    int depth) const {
  auto node = std::make_unique<Node>();
  node->depth = depth;
  node->count.assign(num_arms_ + 1, 0.0);
  node->sum.assign(num_arms_ + 1, 0.0);
  return node;
}

std::unique_ptr<OnlineRegressionTree::Node> OnlineRegressionTree::CopyNode(
    const Node& node) const {
  auto copy = std::make_unique<Node>();
  copy->depth = node.depth;
  copy->feature = node.feature;
  copy->threshold = node.threshold;
  copy->count = node.count;
  copy->sum = node.sum;
  copy->buffer = node.buffer;
  copy->since_last_try = node.since_last_try;
  if (node.left) copy->left = CopyNode(*node.left);
  if (node.right) copy->right = CopyNode(*node.right);
  return copy;
}

const OnlineRegressionTree::Node& OnlineRegressionTree::FindLeaf(
    const Eigen::VectorXd& context) const {
  const Node* node = root_.get();
  while (!node->is_leaf()) {
    node = context(node->feature) <= node->threshold ? node->left.get()
                                                     : node->right.get();
  }
  return *node;
}

OnlineRegressionTree::Node& OnlineRegressionTree::FindLeaf(
    const Eigen::VectorXd& context) {
  Node* node = root_.get();
  while (!node->is_leaf()) {
    node = context(node->feature) <= node->threshold ? node->left.get()
                                                     : node->right.get();
  }
  return *node;
}

double OnlineRegressionTree::Predict(const Eigen::VectorXd& context,
                                     int action) const {
  if (action < 0 || action > num_arms_) {
    throw std::invalid_argument("action out of range");
  }
  const Node& leaf = FindLeaf(context);
  const double n = std::accumulate(leaf.count.begin(), leaf.count.end(), 0.0);
  if (n == 0.0) return 0.0;
  const double pooled =
      std::accumulate(leaf.sum.begin(), leaf.sum.end(), 0.0) / n;
  const double k = options_.action_prior_count;
  if (leaf.count[action] + k == 0.0) return pooled;
  return (leaf.sum[action] + k * pooled) / (leaf.count[action] + k);
}

void OnlineRegressionTree::Update(const Eigen::VectorXd& context, int action,
                                  double reward) {
  if (context.size() != context_dim_) {
    throw std::invalid_argument("context dimension mismatch");
  }
  if (action < 0 || action > num_arms_) {
    throw std::invalid_argument("action out of range");
  }
  AddToLeaf(FindLeaf(context), Sample{context, action, reward});
}

void OnlineRegressionTree::AddToLeaf(Node& leaf, Sample sample) const {
  leaf.count[sample.action] += 1.0;
  leaf.sum[sample.action] += sample.reward;
  if (leaf.depth >= options_.max_depth) return;
  leaf.buffer.push_back(std::move(sample));
  ++leaf.since_last_try;
  // Retry at geometrically spaced sizes so split search stays amortized
  // O(n log n) per leaf.
  const int size = static_cast<int>(leaf.buffer.size());
  const int wait = std::max(options_.min_samples_split / 2, size / 2);
  if (size >= options_.min_samples_split && leaf.since_last_try >= wait) {
    leaf.since_last_try = 0;
    TrySplit(leaf);
  }
}

double OnlineRegressionTree::SquaredError(
    const std::vector<double>& count, const std::vector<double>& sum,
    const std::vector<double>& sum_sq) const {
  double sse = 0.0;
  for (size_t a = 0; a < count.size(); ++a) {
    if (count[a] > 0.0) sse += sum_sq[a] - sum[a] * sum[a] / count[a];
  }
  return std::max(sse, 0.0);
}

void OnlineRegressionTree::TrySplit(Node& leaf) const {
  const auto& buf = leaf.buffer;
  const int n = static_cast<int>(buf.size());
  const int arms = num_arms_ + 1;
  std::vector<double> tot_c(arms, 0.0), tot_s(arms, 0.0), tot_q(arms, 0.0);
  for (const Sample& x : buf) {
    tot_c[x.action] += 1.0;
    tot_s[x.action] += x.reward;
    tot_q[x.action] += x.reward * x.reward;
  }
  const double parent_sse = SquaredError(tot_c, tot_s, tot_q);
  if (parent_sse <= 0.0) return;

  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<int> order(n);
  std::vector<double> lc(arms), ls(arms), lq(arms), rc(arms), rs(arms),
      rq(arms);
  for (int j = 0; j < context_dim_; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return buf[a].context(j) < buf[b].context(j);
    });
    std::fill(lc.begin(), lc.end(), 0.0);
    std::fill(ls.begin(), ls.end(), 0.0);
    std::fill(lq.begin(), lq.end(), 0.0);
    for (int m = 0; m + 1 < n; ++m) {
      const Sample& x = buf[order[m]];
      lc[x.action] += 1.0;
      ls[x.action] += x.reward;
      lq[x.action] += x.reward * x.reward;
      const int left = m + 1;
      if (left < options_.min_samples_leaf) continue;
      if (n - left < options_.min_samples_leaf) break;
      const double lo = x.context(j);
      const double hi = buf[order[m + 1]].context(j);
      if (!(lo < hi)) continue;
      for (int a = 0; a < arms; ++a) {
        rc[a] = tot_c[a] - lc[a];
        rs[a] = tot_s[a] - ls[a];
        rq[a] = tot_q[a] - lq[a];
      }
      const double gain = parent_sse - SquaredError(lc, ls, lq) -
                          SquaredError(rc, rs, rq);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = j;
        best_threshold = 0.5 * (lo + hi);
      }
    }
  }
  if (best_feature < 0 || best_gain < options_.min_gain_fraction * parent_sse) {
    return;
  }

  leaf.feature = best_feature;
  leaf.threshold = best_threshold;
  leaf.left = NewLeaf(leaf.depth + 1);
  leaf.right = NewLeaf(leaf.depth + 1);
  std::vector<Sample> moved;
  moved.swap(leaf.buffer);
  for (Sample& x : moved) {
    Node& child = x.context(best_feature) <= best_threshold ? *leaf.left
                                                             : *leaf.right;
    child.count[x.action] += 1.0;
    child.sum[x.action] += x.reward;
    if (child.depth < options_.max_depth) child.buffer.push_back(std::move(x));
  }
  for (Node* child : {leaf.left.get(), leaf.right.get()}) {
    child->since_last_try = static_cast<int>(child->buffer.size());
    if (static_cast<int>(child->buffer.size()) >= options_.min_samples_split) {
      child->since_last_try = 0;
      TrySplit(*child);
    }
  }
}

int OnlineRegressionTree::num_leaves() const {
  int leaves = 0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      ++leaves;
    } else {
      stack.push_back(node->left.get());
      stack.push_back(node->right.get());
    }
  }
  return leaves;
}

int OnlineRegressionTree::depth() const {
  int deepest = 0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, node->depth);
    if (!node->is_leaf()) {
      stack.push_back(node->left.get());
      stack.push_back(node->right.get());
    }
  }
  return deepest;
}

std::unique_ptr<OnlineRegressor> OnlineRegressionTree::Clone() const {
  return std::make_unique<OnlineRegressionTree>(*this);
}

}  // namespace rome
