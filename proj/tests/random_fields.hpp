// Copyright 2026 The dampns Authors
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

#pragma once

// Test-only generators for random fields.

#include <cstdint>
#include <random>

#include "dampns/fields.hpp"
#include "dampns/spectral_ops.hpp"

namespace dampns::testing {

/// Gaussian white noise on the collocation grid.
inline PhysicalVelocity random_physical(std::uint64_t seed, const WaveGrid& g) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalVelocity p(g);
  for (auto& c : p.comp) {
    for (auto& v : c) v = normal(rng);
  }
  return p;
}

/// Hermitian, not divergence-free, not truncated.
inline SpectralVector random_hermitian(std::uint64_t seed, const WaveGrid& g) {
  return to_spectral(random_physical(seed, g));
}

/// Valid SpectralVelocity with a seed-dependent amplitude in [0.1, 10).
inline SpectralVelocity random_velocity(std::uint64_t seed, const WaveGrid& g) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> amp(0.1, 10.0);
  SpectralVelocity u = leray_project(random_hermitian(seed, g));
  u *= amp(rng);
  return u;
}

}  // namespace dampns::testing
