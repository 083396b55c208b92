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

#include "rome/runner.h"

namespace rome {

RunTrace RunPolicy(Policy& policy, const Environment& env, int replication) {
  RunTrace trace;
  trace.policy = policy.name();
  trace.replication = replication;
  const Schedule& schedule = env.schedule();
  trace.decisions.reserve(schedule.size());
  int current_stage = 0;
  for (int k = 0; k < static_cast<int>(schedule.size()); ++k) {
    const DecisionPoint point = env.Point(k);
    if (point.stage != current_stage) {
      if (current_stage > 0) policy.EndStage(current_stage);
      current_stage = point.stage;
      policy.BeginStage(current_stage);
    }
    const Decision d = policy.Decide(point);
    const double reward = env.Reward(point.user, point.time, d.action);
    const UpdateRecord u =
        policy.Observe(point, {d.arm_bar, d.action, d.pi0, reward});

    DecisionRecord r;
    r.stage = point.stage;
    r.user = point.user;
    r.time = point.time;
    r.context = point.context;
    r.arm_features = point.arm_features;
    r.arm_bar = d.arm_bar;
    r.action = d.action;
    r.pi0 = d.pi0;
    r.reward = reward;
    r.pseudo_reward = u.target;
    r.weight = u.weight;
    trace.decisions.push_back(std::move(r));
  }
  if (current_stage > 0) policy.EndStage(current_stage);
  return trace;
}

}  // namespace rome
