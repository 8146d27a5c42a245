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

#include "dampns/initial_condition.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dampns/spectral_ops.hpp"

namespace dampns {

namespace {

SpectralVelocity shear_field(double amplitude, const WaveGrid& g) {
  // sin(theta) = (e^{i theta} - e^{-i theta}) / 2i
  SpectralVector v(g);
  v.comp[0][g.spectral_index(0, g.axis_index(1), 0)] = Complex(0.0, -0.5 * amplitude);
  v.comp[0][g.spectral_index(0, g.axis_index(-1), 0)] = Complex(0.0, 0.5 * amplitude);
  return leray_project(v);
}

SpectralVelocity ball_field(const Vec3& vec, const WaveGrid& g) {
  PhysicalVelocity phys(g);
  const int n = g.n();
  const double dx = g.dx();
  const double c = 0.5 * g.length();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double x = i * dx - c, y = j * dx - c, z = l * dx - c;
        const double chi = smoothed_step(std::sqrt(x * x + y * y + z * z) - c, dx);
        const auto p = g.physical_index(i, j, l);
        for (int a = 0; a < 3; ++a) phys.comp[a][p] = chi * vec[a];
      }
    }
  }
  return leray_project(to_spectral(phys));
}

}  // namespace

SpectralVelocity random_unit_field(std::uint64_t seed, const WaveGrid& g,
                                   double slope) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalVelocity noise(g);
  for (auto& c : noise.comp) {
    for (auto& v : c) v = normal(rng);
  }
  SpectralVector v = to_spectral(noise);

  // White noise has a shell spectrum ~ |k|^2; reshape it to |k|^slope.
  const double exponent = 0.25 * (slope - 2.0);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      for (int l = 0; l < g.n_half(); ++l) {
        const int mx = g.wavenumber(i), my = g.wavenumber(j);
        const double m2 = double(mx) * mx + double(my) * my + double(l) * l;
        const double a = m2 > 0.0 ? std::pow(m2, exponent) : 0.0;
        const auto q = g.spectral_index(i, j, l);
        for (auto& c : v.comp) c[q] *= a;
      }
    }
  }
  SpectralVelocity u = leray_project(v);
  const double e = norm_sq(u);
  if (!(e > 0.0)) throw std::runtime_error("random_unit_field: degenerate draw");
  u *= 1.0 / std::sqrt(e);
  return u;
}

SpectralVelocity make_initial_condition(const InitialConditionSpec& spec,
                                        const WaveGrid& grid) {
  struct Visitor {
    const WaveGrid& g;
    SpectralVelocity operator()(const ZeroInit&) const { return SpectralVelocity(g); }
    SpectralVelocity operator()(const ShearInit& s) const {
      return shear_field(s.amplitude, g);
    }
    SpectralVelocity operator()(const RandomInit& r) const {
      if (r.energy < 0.0) {
        throw std::invalid_argument("random initial condition: energy must be >= 0");
      }
      SpectralVelocity u = random_unit_field(r.seed, g, r.slope);
      u *= std::sqrt(r.energy);
      return u;
    }
    SpectralVelocity operator()(const BallInit& b) const { return ball_field(b.vector, g); }
  };
  return std::visit(Visitor{grid}, spec);
}

}  // namespace dampns
