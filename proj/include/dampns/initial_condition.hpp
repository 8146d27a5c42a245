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

#include <cstdint>
#include <variant>

#include "dampns/forcing.hpp"

namespace dampns {

struct ZeroInit {};

/// u = (A sin(2 pi y / L), 0, 0).
struct ShearInit {
  double amplitude = 1.0;
};

/// Gaussian random divergence-free field with shell spectrum ~ |k|^slope,
/// rescaled so |u0|^2 = energy.
struct RandomInit {
  std::uint64_t seed = 1;
  double energy = 1.0;
  double slope = -5.0 / 3.0;
};

/// The constant vector restricted to the ball of radius L/2 at the box
/// center, then projected. A uniform field alone is pure mean flow and
/// projects to zero on the torus.
struct BallInit {
  Vec3 vector{1.0, 0.0, 0.0};
};

using InitialConditionSpec = std::variant<ZeroInit, ShearInit, RandomInit, BallInit>;

SpectralVelocity make_initial_condition(const InitialConditionSpec& spec,
                                        const WaveGrid& grid);

/// Unit-norm random divergence-free field (same recipe as RandomInit).
SpectralVelocity random_unit_field(std::uint64_t seed, const WaveGrid& grid,
                                   double slope = -5.0 / 3.0);

}  // namespace dampns
