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

#ifndef ROME_RNG_H_
#define ROME_RNG_H_

#include <cstdint>
#include <random>

namespace rome {

// Seeded random stream. Independent streams are derived from a base seed and
// a stream id, so replications and policies never share draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Stream `stream` of the family rooted at `seed`.
  static Rng Stream(std::uint64_t seed, std::uint64_t stream);

  // Child stream derived from the next draw of this one.
  Rng Split();

  double Uniform(double lo = 0.0, double hi = 1.0);
  double Normal(double mean = 0.0, double sd = 1.0);
  double StudentT(double dof);
  double ChiSquared(double dof);
  bool Bernoulli(double p);
  // Uniform integer in [0, n).
  int UniformInt(int n);
  std::uint64_t NextU64();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stable ids for named streams within one replication.
inline constexpr std::uint64_t kEnvStream = 0x656e76;     // "env"
inline constexpr std::uint64_t kPolicyStream = 0x706f6c;  // "pol"

}  // namespace rome

#endif  // ROME_RNG_H_
