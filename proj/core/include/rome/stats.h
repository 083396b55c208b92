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

#ifndef ROME_STATS_H_
#define ROME_STATS_H_

#include <span>

namespace rome {

double NormalCdf(double x);
double NormalQuantile(double p);
// CDF of Student's t with `dof` degrees of freedom (dof may be fractional).
double StudentTCdf(double x, double dof);

double Mean(std::span<const double> values);
// Unbiased sample variance; 0 for fewer than two values.
double SampleVariance(std::span<const double> values);

}  // namespace rome

#endif  // ROME_STATS_H_
