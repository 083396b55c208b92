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

// Per-decision run traces and their JSONL form, one decision per line:
// {stage, i, t, context, arm_features, A_bar, A, pi0, reward,
//  pseudo_reward, weight}.

#ifndef ROME_TRACE_IO_H_
#define ROME_TRACE_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rome {

struct DecisionRecord {
  int stage = 1;
  int user = 1;
  int time = 1;
  Eigen::VectorXd context;
  std::vector<Eigen::VectorXd> arm_features;
  int arm_bar = 1;
  int action = 0;
  double pi0 = 0.5;
  double reward = 0.0;
  double pseudo_reward = 0.0;
  double weight = 0.0;
};

struct RunTrace {
  std::string policy;
  int replication = 0;
  std::vector<DecisionRecord> decisions;
};

std::string ToJsonLine(const DecisionRecord& record);
DecisionRecord FromJsonLine(const std::string& line);

void WriteTrace(const RunTrace& trace, std::ostream& out);
void WriteTrace(const RunTrace& trace, const std::filesystem::path& path);
// Throws std::runtime_error with the line number on malformed input.
RunTrace ReadTrace(const std::filesystem::path& path);

}  // namespace rome

#endif  // ROME_TRACE_IO_H_
