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

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace dampns {

/// Periodic box [0,L)^3 sampled on an N^3 collocation grid, together with the
/// Fourier modes that grid resolves.
///
/// Spectral arrays use the real-to-complex half layout: index (i, j, l) with
/// i, j in [0, N) and l in [0, N/2]. Axis index i maps to the signed integer
/// wavenumber i for i <= N/2 and i - N otherwise, so each axis covers
/// {-N/2+1, ..., N/2}. Physical arrays are row-major (x, y, z) with z fastest.
class WaveGrid {
 public:
  WaveGrid(int n, double length) : n_(n), length_(length) {
    if (n < 4 || n % 2 != 0) {
      throw std::invalid_argument("WaveGrid: N must be an even integer >= 4");
    }
    if (!(length > 0.0)) {
      throw std::invalid_argument("WaveGrid: L must be positive");
    }
  }

  int n() const { return n_; }
  double length() const { return length_; }
  int n_half() const { return n_ / 2 + 1; }

  std::size_t physical_size() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n_) * n_ * n_half();
  }

  std::size_t physical_index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  std::size_t spectral_index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_half() + l;
  }

  /// Signed integer wavenumber of axis index `i` (x and y axes).
  int wavenumber(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// Axis index holding signed wavenumber `m`.
  int axis_index(int m) const { return m >= 0 ? m : m + n_; }

  /// 2*pi/L, the spacing of the wavevector lattice.
  double k0() const { return 2.0 * std::numbers::pi / length_; }
  double dx() const { return length_ / n_; }
  double cell_volume() const { return dx() * dx() * dx(); }
  double volume() const { return length_ * length_ * length_; }

  /// Largest integer wavenumber kept by the 2/3 rule (|m| < N/3).
  int max_retained() const { return (n_ - 1) / 3; }
  bool retained(int m) const { return 3 * (m < 0 ? -m : m) < n_; }
  bool retained(int mx, int my, int mz) const {
    return retained(mx) && retained(my) && retained(mz);
  }

  /// Weight of a half-layout mode in full-spectrum sums: planes l = 0 and
  /// l = N/2 are stored once, every other plane stands for itself and its
  /// conjugate partner.
  double hermitian_weight(int l) const {
    return (l == 0 || l == n_ / 2) ? 1.0 : 2.0;
  }

  /// Smallest nonzero |k|^2 over retained modes: (2*pi/L)^2.
  double lambda1() const { return k0() * k0(); }

  friend bool operator==(const WaveGrid&, const WaveGrid&) = default;

 private:
  int n_;
  double length_;
};

}  // namespace dampns
