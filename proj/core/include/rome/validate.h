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


// Invariant suite behind `rome validate`: fast exact checks of the
// estimator, linear algebra, schedule and evaluation identities.

#ifndef ROME_VALIDATE_H_
#define ROME_VALIDATE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace rome {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> RunInvariantSuite(std::uint64_t seed = 7);

bool AllPassed(const std::vector<CheckResult>& results);

}  // namespace rome

#endif  // ROME_VALIDATE_H_
