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

#include "rome/trace_io.h"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rome {
namespace {

using nlohmann::json;

json VectorToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd JsonToVector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string ToJsonLine(const DecisionRecord& r) {
  json arms = json::array();
  for (const auto& x : r.arm_features) arms.push_back(VectorToJson(x));
  json j = {{"stage", r.stage},
            {"i", r.user},
            {"t", r.time},
            {"context", VectorToJson(r.context)},
            {"arm_features", arms},
            {"A_bar", r.arm_bar},
            {"A", r.action},
            {"pi0", r.pi0},
            {"reward", r.reward},
            {"pseudo_reward", r.pseudo_reward},
            {"weight", r.weight}};
  return j.dump();
}

DecisionRecord FromJsonLine(const std::string& line) {
  const json j = json::parse(line);
  DecisionRecord r;
  r.stage = j.at("stage").get<int>();
  r.user = j.at("i").get<int>();
  r.time = j.at("t").get<int>();
  r.context = JsonToVector(j.at("context"));
  for (const auto& x : j.at("arm_features")) {
    r.arm_features.push_back(JsonToVector(x));
  }
  r.arm_bar = j.at("A_bar").get<int>();
  r.action = j.at("A").get<int>();
  r.pi0 = j.at("pi0").get<double>();
  r.reward = j.at("reward").get<double>();
  r.pseudo_reward = j.at("pseudo_reward").get<double>();
  r.weight = j.at("weight").get<double>();
  return r;
}

void WriteTrace(const RunTrace& trace, std::ostream& out) {
  for (const auto& r : trace.decisions) out << ToJsonLine(r) << '\n';
}

void WriteTrace(const RunTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteTrace(trace, out);
}

RunTrace ReadTrace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  RunTrace trace;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      trace.decisions.push_back(FromJsonLine(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return trace;
}

}  // namespace rome
