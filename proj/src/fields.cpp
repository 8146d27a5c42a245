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

#include "dampns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dampns {

double PhysicalVelocity::max_speed() const {
  double m2 = 0.0;
  for (std::size_t p = 0; p < grid.physical_size(); ++p) {
    const double s2 = comp[0][p] * comp[0][p] + comp[1][p] * comp[1][p] +
                      comp[2][p] * comp[2][p];
    if (std::isnan(s2)) return s2;
    m2 = std::max(m2, s2);
  }
  return std::sqrt(m2);
}

Complex SpectralVelocity::coeff(int c, int mx, int my, int mz) const {
  const auto& g = grid();
  if (mz < 0) {
    return std::conj(data_.comp[c][g.spectral_index(g.axis_index(-mx),
                                                    g.axis_index(-my), -mz)]);
  }
  return data_.comp[c][g.spectral_index(g.axis_index(mx), g.axis_index(my),
                                        mz)];
}

namespace {

void require_same_grid(const WaveGrid& a, const WaveGrid& b) {
  if (!(a == b)) throw std::invalid_argument("field grids differ");
}

}  // namespace

SpectralVelocity& SpectralVelocity::operator+=(const SpectralVelocity& o) {
  return axpy(1.0, o);
}

SpectralVelocity& SpectralVelocity::operator-=(const SpectralVelocity& o) {
  return axpy(-1.0, o);
}

SpectralVelocity& SpectralVelocity::operator*=(double s) {
  for (auto& c : data_.comp) {
    for (auto& v : c) v *= s;
  }
  return *this;
}

SpectralVelocity& SpectralVelocity::axpy(double a, const SpectralVelocity& x) {
  require_same_grid(grid(), x.grid());
  for (int c = 0; c < 3; ++c) {
    auto& dst = data_.comp[c];
    const auto& src = x.data_.comp[c];
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += a * src[q];
  }
  return *this;
}

SpectralVelocity& SpectralVelocity::scale_modes(std::span<const double> factor) {
  if (factor.size() != grid().spectral_size()) {
    throw std::invalid_argument("scale_modes: factor size mismatch");
  }
  for (auto& c : data_.comp) {
    for (std::size_t q = 0; q < c.size(); ++q) c[q] *= factor[q];
  }
  return *this;
}

double SpectralVelocity::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : data_.comp) {
    for (const auto& v : c) m = std::max(m, std::abs(v));
  }
  return m;
}

SpectralVelocity operator+(SpectralVelocity a, const SpectralVelocity& b) {
  a += b;
  return a;
}

SpectralVelocity operator-(SpectralVelocity a, const SpectralVelocity& b) {
  a -= b;
  return a;
}

SpectralVelocity operator*(double s, SpectralVelocity a) {
  a *= s;
  return a;
}

double inner(const SpectralVector& a, const SpectralVector& b) {
  require_same_grid(a.grid, b.grid);
  const auto& g = a.grid;
  const int n = g.n();
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < g.n_half(); ++l) {
          const auto q = g.spectral_index(i, j, l);
          const Complex x = a.comp[c][q];
          const Complex y = b.comp[c][q];
          sum += g.hermitian_weight(l) * (x.real() * y.real() + x.imag() * y.imag());
        }
      }
    }
  }
  return g.volume() * sum;
}

double inner(const SpectralVelocity& a, const SpectralVelocity& b) {
  return inner(a.raw(), b.raw());
}

double norm_sq(const SpectralVelocity& u) { return inner(u, u); }

}  // namespace dampns
