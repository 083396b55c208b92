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

#include "rome/rng.h"

namespace rome {

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

Rng Rng::Stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
  Rng rng(0);
  rng.engine_.seed(seq);
  return rng;
}

Rng Rng::Split() {
  const std::uint64_t seed = engine_();
  const std::uint64_t stream = engine_();
  return Stream(seed, stream);
}

double Rng::Uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::Normal(double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(engine_);
}

double Rng::StudentT(double dof) {
  return std::student_t_distribution<double>(dof)(engine_);
}

double Rng::ChiSquared(double dof) {
  return std::chi_squared_distribution<double>(dof)(engine_);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

int Rng::UniformInt(int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(engine_);
}

std::uint64_t Rng::NextU64() { return engine_(); }

}  // namespace rome
