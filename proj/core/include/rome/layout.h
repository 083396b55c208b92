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

// Block layout of the stacked parameter vector
//   theta = vec(theta_shared, theta_user_1..N, theta_time_1..T)
// and the per-decision selectors over it.

#ifndef ROME_LAYOUT_H_
#define ROME_LAYOUT_H_

#include <Eigen/Dense>

#include "rome/graph.h"
#include "rome/gram.h"

namespace rome {

struct LayoutOptions {
  bool shared = true;
  bool user = true;
  bool time = true;
};

class ParamLayout {
 public:
  // `block` is the width of every block. Throws std::invalid_argument when
  // no block group is enabled or a size is non-positive.
  ParamLayout(int num_users, int num_times, int block,
              LayoutOptions options = {});

  // Shared, K user and K time blocks of width d: dim (2K+1) d.
  static ParamLayout Staged(int num_stages, int d);

  int num_users() const { return num_users_; }
  int num_times() const { return num_times_; }
  int block() const { return block_; }
  int dim() const { return dim_; }
  const LayoutOptions& options() const { return options_; }

  // Offsets of the blocks; users and times are 1-based. Throw
  // std::out_of_range when the block is absent or the index is invalid.
  int SharedOffset() const;
  int UserOffset(int user) const;
  int TimeOffset(int time) const;

  // Selector over every enabled block for decision point (user, time).
  Selector Select(int user, int time) const;

 private:
  int num_users_;
  int num_times_;
  int block_;
  LayoutOptions options_;
  int user_start_;
  int time_start_;
  int dim_;
};

// Selector C_{i,t} of the full staged layout; requires i, t >= 1 and
// i + t - 1 <= K.
Selector BuildSelector(int user, int time, int num_stages, int d);

// Ridge weights per block group and cohesion weights for the user and time
// Laplacians.
struct PenaltySpec {
  double shared_ridge = 1.0;
  double user_ridge = 1.0;
  double time_ridge = 1.0;
  double user_cohesion = 1.0;
  double time_cohesion = 1.0;
};

// Block-diagonal penalty matching `layout`: ridge * I for the shared block,
// ridge * I + cohesion * (L (x) I_block) for the user and time groups. The
// Laplacians must match the number of users and times. Throws
// std::invalid_argument for non-positive ridges or negative cohesion.
PenaltyMatrix BuildPenalty(const ParamLayout& layout, const PenaltySpec& spec,
                           const SparseMatrix& user_laplacian,
                           const SparseMatrix& time_laplacian);

}  // namespace rome

#endif  // ROME_LAYOUT_H_
