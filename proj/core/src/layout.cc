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

#include "rome/layout.h"

#include <stdexcept>
#include <string>

namespace rome {

ParamLayout::ParamLayout(int num_users, int num_times, int block,
                         LayoutOptions options)
    : num_users_(num_users),
      num_times_(num_times),
      block_(block),
      options_(options) {
  if (block < 1) throw std::invalid_argument("block width must be >= 1");
  if (!options.shared && !options.user && !options.time) {
    throw std::invalid_argument("layout needs at least one block group");
  }
  if ((options.user && num_users < 1) || (options.time && num_times < 1)) {
    throw std::invalid_argument("layout needs at least one user and time");
  }
  user_start_ = options.shared ? block : 0;
  time_start_ = user_start_ + (options.user ? num_users * block : 0);
  dim_ = time_start_ + (options.time ? num_times * block : 0);
}

ParamLayout ParamLayout::Staged(int num_stages, int d) {
  return ParamLayout(num_stages, num_stages, d);
}

int ParamLayout::SharedOffset() const {
  if (!options_.shared) throw std::out_of_range("layout has no shared block");
  return 0;
}

int ParamLayout::UserOffset(int user) const {
  if (!options_.user) throw std::out_of_range("layout has no user blocks");
  if (user < 1 || user > num_users_) {
    throw std::out_of_range("user index " + std::to_string(user) +
                            " out of range");
  }
  return user_start_ + (user - 1) * block_;
}

int ParamLayout::TimeOffset(int time) const {
  if (!options_.time) throw std::out_of_range("layout has no time blocks");
  if (time < 1 || time > num_times_) {
    throw std::out_of_range("time index " + std::to_string(time) +
                            " out of range");
  }
  return time_start_ + (time - 1) * block_;
}

Selector ParamLayout::Select(int user, int time) const {
  Selector c;
  c.dim = dim_;
  c.d = block_;
  if (options_.shared) c.offsets.push_back(SharedOffset());
  if (options_.user) c.offsets.push_back(UserOffset(user));
  if (options_.time) c.offsets.push_back(TimeOffset(time));
  return c;
}

Selector BuildSelector(int user, int time, int num_stages, int d) {
  if (user < 1 || time < 1 || user + time - 1 > num_stages) {
    throw std::out_of_range("decision point outside the staged design");
  }
  return ParamLayout::Staged(num_stages, d).Select(user, time);
}

PenaltyMatrix BuildPenalty(const ParamLayout& layout, const PenaltySpec& spec,
                           const SparseMatrix& user_laplacian,
                           const SparseMatrix& time_laplacian) {
  const LayoutOptions& opt = layout.options();
  if ((opt.shared && !(spec.shared_ridge > 0.0)) ||
      (opt.user && !(spec.user_ridge > 0.0)) ||
      (opt.time && !(spec.time_ridge > 0.0))) {
    throw std::invalid_argument("ridge weights must be positive");
  }
  if (spec.user_cohesion < 0.0 || spec.time_cohesion < 0.0) {
    throw std::invalid_argument("cohesion weights must be non-negative");
  }
  const int d = layout.block();
  std::vector<SparseMatrix> blocks;
  if (opt.shared) {
    SparseMatrix eye(d, d);
    eye.setIdentity();
    blocks.push_back(spec.shared_ridge * eye);
  }
  if (opt.user) {
    if (user_laplacian.rows() != layout.num_users() ||
        user_laplacian.cols() != layout.num_users()) {
      throw std::invalid_argument("user Laplacian side mismatch");
    }
    blocks.push_back(CohesionBlock(user_laplacian, d, spec.user_ridge,
                                   spec.user_cohesion));
  }
  if (opt.time) {
    if (time_laplacian.rows() != layout.num_times() ||
        time_laplacian.cols() != layout.num_times()) {
      throw std::invalid_argument("time Laplacian side mismatch");
    }
    blocks.push_back(CohesionBlock(time_laplacian, d, spec.time_ridge,
                                   spec.time_cohesion));
  }
  return PenaltyMatrix(std::move(blocks));
}

}  // namespace rome
