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

// Runs one policy through an environment's schedule.

#ifndef ROME_RUNNER_H_
#define ROME_RUNNER_H_

#include "rome/environment.h"
#include "rome/policy.h"
#include "rome/trace_io.h"

namespace rome {

// Visits the schedule in order. Each stage is bracketed by BeginStage and
// EndStage; each decision point is decided, rewarded and observed.
RunTrace RunPolicy(Policy& policy, const Environment& env,
                   int replication = 0);

}  // namespace rome

#endif  // ROME_RUNNER_H_
