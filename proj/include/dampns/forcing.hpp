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

#include <array>
#include <optional>
#include <variant>

#include "dampns/fields.hpp"

namespace dampns {

using Vec3 = std::array<double, 3>;

struct ZeroForcing {};

/// Constant body force `g` inside a solid cylinder, zero outside.
struct CylinderForcing {
  Vec3 center{};
  double radius = 0.0;
  double height = 0.0;
  int axis = 1;  // 0 = x, 1 = y, 2 = z
  Vec3 g{};

  /// Geometry used throughout the experiments: radius and height L/3,
  /// centered in the box, axis along y, g = (0, 2, 0). For L = 12 this is the
  /// radius-4, height-4 cylinder.
  static CylinderForcing box_centered(double length);
};

/// Arbitrary physical-space values supplied by the caller.
struct GridForcing {
  PhysicalVelocity values;
};

using ForcingSpec = std::variant<ZeroForcing, CylinderForcing, GridForcing>;

/// Time-independent forcing in H: the projected, truncated, zero-mean
/// representation of the spec is computed once at construction.
class ForcingField {
 public:
  ForcingField(const ForcingSpec& spec, const WaveGrid& grid);

  const ForcingSpec& spec() const { return spec_; }
  const SpectralVelocity& spectral() const { return f_hat_; }
  bool is_zero() const { return is_zero_; }
  /// |Pf|^2, the f entering every energy estimate.
  double norm_sq() const { return norm_sq_; }

 private:
  ForcingSpec spec_;
  SpectralVelocity f_hat_;
  double norm_sq_ = 0.0;
  bool is_zero_ = true;
};

/// Linear ramp across one grid cell: 1 well inside (distance < 0), 0 well
/// outside, 1/2 on the boundary.
double smoothed_step(double signed_distance, double dx);

/// Samples the smoothed cylinder indicator times g on the collocation grid.
PhysicalVelocity sample_cylinder(const CylinderForcing& c, const WaveGrid& grid);

}  // namespace dampns
