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

// Named policy variants: RoME, its ablations and the competing linear
// Thompson-sampling baselines, all built on MixedEffectsPolicy.
//
//   variant           blocks               target          baseline z(s)
//   RoME              shared, user, time   pseudo, trees   -
//   RoME-BLM          shared, user, time   pseudo, ridge   -
//   RoME-SU           shared, time         pseudo, trees   -
//   NNR-Linear        user (cohesion)      raw             linear
//   Standard          user                 raw             linear
//   AC                user                 (A - pi) R      -
//   IntelPooling      shared, user, time   raw             linear
//   FeatureMapLinear  user                 raw             random Fourier

#ifndef ROME_BASELINES_H_
#define ROME_BASELINES_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rome/policy.h"

namespace rome {

enum class PolicyVariant {
  kRoME,
  kRoMEBLM,
  kRoMESU,
  kNNRLinear,
  kStandard,
  kAC,
  kIntelPooling,
  kFeatureMapLinear,
};

PolicyVariant ParseVariant(const std::string& tag);
std::string VariantName(PolicyVariant variant);
std::vector<PolicyVariant> AllVariants();
bool IsRoMEVariant(PolicyVariant variant);

struct VariantOptions {
  ExplorationScale rome_scale = ExplorationScale::kBeta;
  // Exploration scale of the non-RoME variants.
  ExplorationScale baseline_scale = ExplorationScale::kPosterior;
  // Fixed radius used by any variant whose scale is kPosterior.
  double posterior_scale = 1.0;
  bool batch = false;
  // Working-model learner of the RoME variants (RoME-BLM always uses ridge).
  LearnerSpec learner;
  int blm_degree = 1;
  FoldMode fold_mode = FoldMode::kByDecision;
  int num_folds = 2;
  // Prior precisions of IntelPooling's shared, user and time effects.
  // Defaults to gamma for every group.
  std::optional<PenaltySpec> intelpooling_penalty;
  int fourier_features = 16;
  double fourier_bandwidth = 0.5;
  bool audit_folds = false;
};

EngineSpec VariantSpec(PolicyVariant variant, const PolicyConfig& config,
                       const VariantOptions& options = {});

std::unique_ptr<MixedEffectsPolicy> MakePolicy(
    PolicyVariant variant, const PolicyConfig& config,
    const VariantOptions& options, const ProblemShape& shape, Rng rng);

}  // namespace rome

#endif  // ROME_BASELINES_H_
