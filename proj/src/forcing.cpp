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

#include "dampns/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dampns/spectral_ops.hpp"

namespace dampns {

CylinderForcing CylinderForcing::box_centered(double length) {
  CylinderForcing c;
  c.center = {0.5 * length, 0.5 * length, 0.5 * length};
  c.radius = length / 3.0;
  c.height = length / 3.0;
  c.axis = 1;
  c.g = {0.0, 2.0, 0.0};
  return c;
}

double smoothed_step(double signed_distance, double dx) {
  return std::clamp(0.5 - signed_distance / dx, 0.0, 1.0);
}

namespace {

// Minimal-image displacement on a periodic axis.
double periodic_offset(double x, double c, double length) {
  double d = x - c;
  d -= length * std::round(d / length);
  return d;
}

}  // namespace

PhysicalVelocity sample_cylinder(const CylinderForcing& c, const WaveGrid& grid) {
  if (c.axis < 0 || c.axis > 2) {
    throw std::invalid_argument("cylinder axis must be 0, 1 or 2");
  }
  if (!(c.radius > 0.0) || !(c.height > 0.0)) {
    throw std::invalid_argument("cylinder radius and height must be positive");
  }
  PhysicalVelocity out(grid);
  const int n = grid.n();
  const double dx = grid.dx();
  const double len = grid.length();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const Vec3 d = {periodic_offset(i * dx, c.center[0], len),
                        periodic_offset(j * dx, c.center[1], len),
                        periodic_offset(l * dx, c.center[2], len)};
        double r2 = 0.0;
        for (int a = 0; a < 3; ++a) {
          if (a != c.axis) r2 += d[a] * d[a];
        }
        const double radial = smoothed_step(std::sqrt(r2) - c.radius, dx);
        const double axial =
            smoothed_step(std::abs(d[c.axis]) - 0.5 * c.height, dx);
        const double chi = radial * axial;
        const auto p = grid.physical_index(i, j, l);
        for (int a = 0; a < 3; ++a) out.comp[a][p] = chi * c.g[a];
      }
    }
  }
  return out;
}

ForcingField::ForcingField(const ForcingSpec& spec, const WaveGrid& grid)
    : spec_(spec), f_hat_(grid) {
  if (const auto* cyl = std::get_if<CylinderForcing>(&spec_)) {
    f_hat_ = leray_project(to_spectral(sample_cylinder(*cyl, grid)));
  } else if (const auto* explicit_values = std::get_if<GridForcing>(&spec_)) {
    if (!(explicit_values->values.grid == grid)) {
      throw std::invalid_argument("forcing grid does not match the run grid");
    }
    f_hat_ = leray_project(to_spectral(explicit_values->values));
  }
  norm_sq_ = dampns::norm_sq(f_hat_);
  is_zero_ = f_hat_.max_abs_coeff() == 0.0;
}

}  // namespace dampns
