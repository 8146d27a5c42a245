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
#include <span>

#include "dampns/fft.hpp"
#include "dampns/wave_grid.hpp"

namespace dampns {

/// Arbitrary real vector field in Fourier space (half layout, three
/// components). No incompressibility or truncation is implied.
struct SpectralVector {
  explicit SpectralVector(const WaveGrid& g)
      : grid(g),
        comp{ComplexArray(g.spectral_size()), ComplexArray(g.spectral_size()),
             ComplexArray(g.spectral_size())} {}

  WaveGrid grid;
  std::array<ComplexArray, 3> comp;
};

/// Collocation-grid values of a real vector field.
struct PhysicalVelocity {
  explicit PhysicalVelocity(const WaveGrid& g)
      : grid(g),
        comp{RealArray(g.physical_size()), RealArray(g.physical_size()),
             RealArray(g.physical_size())} {}

  WaveGrid grid;
  std::array<RealArray, 3> comp;

  /// Max over grid points of the Euclidean speed |u(x)|.
  double max_speed() const;
};

/// Divergence-free, zero-mean, 2/3-truncated velocity in Fourier space.
///
/// Instances come out of leray_project (or a validated snapshot); the member
/// operations below are all per-mode linear maps and keep the invariants.
class SpectralVelocity {
 public:
  /// The zero field.
  explicit SpectralVelocity(const WaveGrid& grid) : data_(grid) {}

  /// Wraps coefficients the caller has already checked. Used by I/O paths
  /// that must reproduce stored bits without re-projecting.
  static SpectralVelocity assume_projected(SpectralVector raw) {
    return SpectralVelocity(std::move(raw));
  }

  const WaveGrid& grid() const { return data_.grid; }
  const ComplexArray& component(int c) const { return data_.comp[c]; }
  const SpectralVector& raw() const { return data_; }

  /// Coefficient at signed integer wavevector (mx, my, mz); negative mz is
  /// served from the conjugate partner.
  Complex coeff(int c, int mx, int my, int mz) const;

  SpectralVelocity& operator+=(const SpectralVelocity& o);
  SpectralVelocity& operator-=(const SpectralVelocity& o);
  SpectralVelocity& operator*=(double s);
  /// this += a * x
  SpectralVelocity& axpy(double a, const SpectralVelocity& x);
  /// Multiplies mode q by factor[q] (factor has spectral_size() entries).
  SpectralVelocity& scale_modes(std::span<const double> factor);

  double max_abs_coeff() const;

 private:
  explicit SpectralVelocity(SpectralVector raw) : data_(std::move(raw)) {}
  SpectralVector data_;
};

SpectralVelocity operator+(SpectralVelocity a, const SpectralVelocity& b);
SpectralVelocity operator-(SpectralVelocity a, const SpectralVelocity& b);
SpectralVelocity operator*(double s, SpectralVelocity a);

/// L^2 inner product over the box, (a, b) = L^3 * sum_k Re(a_k . conj(b_k)).
double inner(const SpectralVector& a, const SpectralVector& b);
double inner(const SpectralVelocity& a, const SpectralVelocity& b);
/// |u|^2 in H.
double norm_sq(const SpectralVelocity& u);

}  // namespace dampns
