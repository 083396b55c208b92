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

#include "rome/baselines.h"

#include <stdexcept>

namespace rome {

PolicyVariant ParseVariant(const std::string& tag) {
  for (PolicyVariant v : AllVariants()) {
    if (VariantName(v) == tag) return v;
  }
  throw std::invalid_argument("unknown policy tag: " + tag);
}

std::string VariantName(PolicyVariant variant) {
  switch (variant) {
    case PolicyVariant::kRoME:
      return "RoME";
    case PolicyVariant::kRoMEBLM:
      return "RoME-BLM";
    case PolicyVariant::kRoMESU:
      return "RoME-SU";
    case PolicyVariant::kNNRLinear:
      return "NNR-Linear";
    case PolicyVariant::kStandard:
      return "Standard";
    case PolicyVariant::kAC:
      return "AC";
    case PolicyVariant::kIntelPooling:
      return "IntelPooling";
    case PolicyVariant::kFeatureMapLinear:
      return "FeatureMapLinear";
  }
  return "unknown";
}

std::vector<PolicyVariant> AllVariants() {
  return {PolicyVariant::kRoME,         PolicyVariant::kRoMEBLM,
          PolicyVariant::kRoMESU,       PolicyVariant::kNNRLinear,
          PolicyVariant::kStandard,     PolicyVariant::kAC,
          PolicyVariant::kIntelPooling, PolicyVariant::kFeatureMapLinear};
}

bool IsRoMEVariant(PolicyVariant variant) {
  return variant == PolicyVariant::kRoME ||
         variant == PolicyVariant::kRoMEBLM ||
         variant == PolicyVariant::kRoMESU;
}

EngineSpec VariantSpec(PolicyVariant variant, const PolicyConfig& config,
                       const VariantOptions& options) {
  EngineSpec spec;
  spec.name = VariantName(variant);
  spec.penalty = {config.gamma, config.gamma, config.gamma, config.lambda,
                  config.lambda};
  spec.batch = options.batch;
  spec.fold_mode = options.fold_mode;
  spec.num_folds = options.num_folds;
  spec.audit_folds = options.audit_folds;
  spec.fourier_features = options.fourier_features;
  spec.fourier_bandwidth = options.fourier_bandwidth;
  spec.learner = options.learner;
  spec.posterior_scale = options.posterior_scale;
  if (IsRoMEVariant(variant)) {
    spec.scale = options.rome_scale;
    spec.target = Target::kPseudoReward;
  } else {
    spec.scale = options.baseline_scale;
    spec.target = Target::kRawReward;
    spec.baseline = BaselineFeatures::kLinear;
    spec.learner.kind = LearnerKind::kZero;
  }
  const LayoutOptions all{true, true, true};
  const LayoutOptions user_only{false, true, false};
  switch (variant) {
    case PolicyVariant::kRoME:
      spec.layout = all;
      break;
    case PolicyVariant::kRoMEBLM:
      spec.layout = all;
      spec.learner.kind = LearnerKind::kRidge;
      spec.learner.ridge_degree = options.blm_degree;
      break;
    case PolicyVariant::kRoMESU:
      spec.layout = {true, false, true};
      spec.penalty.user_cohesion = 0.0;
      break;
    case PolicyVariant::kNNRLinear:
      spec.layout = user_only;
      spec.penalty.time_cohesion = 0.0;
      break;
    case PolicyVariant::kStandard:
      spec.layout = user_only;
      spec.penalty.user_cohesion = 0.0;
      spec.penalty.time_cohesion = 0.0;
      break;
    case PolicyVariant::kAC:
      spec.layout = user_only;
      spec.target = Target::kPseudoReward;
      spec.baseline = BaselineFeatures::kNone;
      spec.penalty.user_cohesion = 0.0;
      spec.penalty.time_cohesion = 0.0;
      break;
    case PolicyVariant::kIntelPooling:
      spec.layout = all;
      if (options.intelpooling_penalty) {
        spec.penalty = *options.intelpooling_penalty;
      }
      spec.penalty.user_cohesion = 0.0;
      spec.penalty.time_cohesion = 0.0;
      break;
    case PolicyVariant::kFeatureMapLinear:
      spec.layout = user_only;
      spec.baseline = BaselineFeatures::kRandomFourier;
      spec.penalty.user_cohesion = 0.0;
      spec.penalty.time_cohesion = 0.0;
      break;
  }
  return spec;
}

std::unique_ptr<MixedEffectsPolicy> MakePolicy(
    PolicyVariant variant, const PolicyConfig& config,
    const VariantOptions& options, const ProblemShape& shape, Rng rng) {
  return std::make_unique<MixedEffectsPolicy>(
      VariantSpec(variant, config, options), config, shape, rng);
}

}  // namespace rome
