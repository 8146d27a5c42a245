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

#include "dampns/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dampns {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_damping_params(double alpha, double beta) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("damping: alpha must be > 0");
  }
  if (!(beta >= 1.0)) {
    throw std::invalid_argument("damping: beta must be >= 1");
  }
}

// Calls fn(q, mx, my, mz) for every stored mode.
template <class Fn>
void for_each_mode(const WaveGrid& g, Fn&& fn) {
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    const int mx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const int my = g.wavenumber(j);
      for (int l = 0; l < g.n_half(); ++l) {
        fn(g.spectral_index(i, j, l), mx, my, l);
      }
    }
  }
}

// Pointwise w_i = sum_j u_j d_j u_i (+ alpha |u|^(beta-1) u_i when
// with_damping), followed by the forward transform and -P.
SpectralVelocity physical_rhs(const SpectralVelocity& u, bool with_advection,
                              bool with_damping, double alpha, double beta,
                              double* max_speed) {
  const auto& g = u.grid();
  const auto& fft = fft_for(g);
  const PhysicalVelocity phys = to_physical(u);
  if (max_speed != nullptr) *max_speed = phys.max_speed();

  PhysicalVelocity w(g);
  if (with_advection) {
    const double k0 = g.k0();
    ComplexArray grad_hat(g.spectral_size());
    RealArray grad(g.physical_size());
    for (int dir = 0; dir < 3; ++dir) {
      for (int c = 0; c < 3; ++c) {
        const auto& uc = u.component(c);
        for_each_mode(g, [&](std::size_t q, int mx, int my, int mz) {
          const int m = dir == 0 ? mx : (dir == 1 ? my : mz);
          grad_hat[q] = kI * (k0 * m) * uc[q];
        });
        fft.inverse(grad_hat, grad);
        const auto& ud = phys.comp[dir];
        auto& wc = w.comp[c];
        for (std::size_t p = 0; p < wc.size(); ++p) wc[p] += ud[p] * grad[p];
      }
    }
  }
  if (with_damping) {
    for (std::size_t p = 0; p < g.physical_size(); ++p) {
      const double s2 = phys.comp[0][p] * phys.comp[0][p] +
                        phys.comp[1][p] * phys.comp[1][p] +
                        phys.comp[2][p] * phys.comp[2][p];
      const double a = alpha * damping_factor(s2, beta);
      for (int c = 0; c < 3; ++c) w.comp[c][p] += a * phys.comp[c][p];
    }
  }

  SpectralVector what = to_spectral(w);
  for (auto& c : what.comp) {
    for (auto& v : c) v = -v;
  }
  return leray_project(what);
}

}  // namespace

SpectralVelocity leray_project(const SpectralVector& v) {
  const auto& g = v.grid;
  const double k0 = g.k0();
  SpectralVector out(g);
  for_each_mode(g, [&](std::size_t q, int mx, int my, int mz) {
    if (!g.retained(mx, my, mz) || (mx == 0 && my == 0 && mz == 0)) return;
    const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;
    const double k2 = kx * kx + ky * ky + kz * kz;
    const Complex vx = v.comp[0][q], vy = v.comp[1][q], vz = v.comp[2][q];
    const Complex kdotv = (kx * vx + ky * vy + kz * vz) / k2;
    out.comp[0][q] = vx - kx * kdotv;
    out.comp[1][q] = vy - ky * kdotv;
    out.comp[2][q] = vz - kz * kdotv;
  });
  return SpectralVelocity::assume_projected(std::move(out));
}

PhysicalVelocity to_physical(const SpectralVector& v) {
  const auto& fft = fft_for(v.grid);
  PhysicalVelocity out(v.grid);
  for (int c = 0; c < 3; ++c) fft.inverse(v.comp[c], out.comp[c]);
  return out;
}

PhysicalVelocity to_physical(const SpectralVelocity& u) {
  return to_physical(u.raw());
}

SpectralVector to_spectral(const PhysicalVelocity& u) {
  const auto& fft = fft_for(u.grid);
  SpectralVector out(u.grid);
  for (int c = 0; c < 3; ++c) fft.forward(u.comp[c], out.comp[c]);
  return out;
}

SpectralVelocity nonlinear_term(const SpectralVelocity& u) {
  return physical_rhs(u, true, false, 0.0, 1.0, nullptr);
}

SpectralVelocity damping_term(const SpectralVelocity& u, double alpha,
                              double beta) {
  require_damping_params(alpha, beta);
  if (beta == 1.0) {
    // |u|^0 = 1: the damping is linear and P acts as the identity on u.
    return -alpha * u;
  }
  return physical_rhs(u, false, true, alpha, beta, nullptr);
}

SpectralVelocity advection_and_damping(const SpectralVelocity& u, double alpha,
                                       double beta, double* max_speed) {
  require_damping_params(alpha, beta);
  return physical_rhs(u, true, true, alpha, beta, max_speed);
}

double stokes_lambda1(const WaveGrid& grid) { return grid.lambda1(); }

double damping_factor(double speed_sq, double beta) {
  if (beta == 1.0) return 1.0;
  if (beta == 2.0) return std::sqrt(speed_sq);
  if (beta == 3.0) return speed_sq;
  if (beta == 4.0) return speed_sq * std::sqrt(speed_sq);
  if (beta == 5.0) return speed_sq * speed_sq;
  return std::pow(speed_sq, 0.5 * (beta - 1.0));
}

double lp_power_sum(const PhysicalVelocity& u, double beta) {
  double sum = 0.0;
  for (std::size_t p = 0; p < u.grid.physical_size(); ++p) {
    const double s2 = u.comp[0][p] * u.comp[0][p] +
                      u.comp[1][p] * u.comp[1][p] + u.comp[2][p] * u.comp[2][p];
    sum += s2 * damping_factor(s2, beta);
  }
  return u.grid.cell_volume() * sum;
}

double divergence_defect(const SpectralVector& v) {
  const auto& g = v.grid;
  const double k0 = g.k0();
  double max_div = 0.0;
  double max_coeff = 0.0;
  for_each_mode(g, [&](std::size_t q, int mx, int my, int mz) {
    const Complex d = k0 * (double(mx) * v.comp[0][q] + double(my) * v.comp[1][q] +
                            double(mz) * v.comp[2][q]);
    max_div = std::max(max_div, std::abs(d));
    for (int c = 0; c < 3; ++c) {
      max_coeff = std::max(max_coeff, std::abs(v.comp[c][q]));
    }
  });
  return max_coeff > 0.0 ? max_div / max_coeff : 0.0;
}

double hermitian_defect(const SpectralVector& v) {
  const auto& g = v.grid;
  const int n = g.n();
  double defect = 0.0;
  for (int l : {0, n / 2}) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int ip = g.axis_index(-g.wavenumber(i));
        const int jp = g.axis_index(-g.wavenumber(j));
        const auto q = g.spectral_index(i, j, l);
        const auto qp = g.spectral_index(ip % n, jp % n, l);
        for (int c = 0; c < 3; ++c) {
          defect = std::max(defect,
                            std::abs(v.comp[c][qp] - std::conj(v.comp[c][q])));
        }
      }
    }
  }
  return defect;
}

double truncation_defect(const SpectralVector& v) {
  const auto& g = v.grid;
  double defect = 0.0;
  for_each_mode(g, [&](std::size_t q, int mx, int my, int mz) {
    if (g.retained(mx, my, mz) && !(mx == 0 && my == 0 && mz == 0)) return;
    for (int c = 0; c < 3; ++c) defect = std::max(defect, std::abs(v.comp[c][q]));
  });
  return defect;
}

void check_invariants(const SpectralVelocity& u) {
  const auto& v = u.raw();
  const double scale = std::max(u.max_abs_coeff(), 1e-300);
  if (const double d = divergence_defect(v); d > kDivergenceTolerance) {
    throw std::logic_error("velocity not divergence-free: defect " +
                           std::to_string(d));
  }
  if (truncation_defect(v) > 0.0) {
    throw std::logic_error("velocity has energy at k = 0 or outside the 2/3 mask");
  }
  if (hermitian_defect(v) > 1e-12 * scale) {
    throw std::logic_error("velocity coefficients are not Hermitian");
  }
}

void symmetrize(SpectralVector& v) {
  const auto& g = v.grid;
  const int n = g.n();
  for (int l : {0, n / 2}) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int ip = g.axis_index(-g.wavenumber(i)) % n;
        const int jp = g.axis_index(-g.wavenumber(j)) % n;
        const auto q = g.spectral_index(i, j, l);
        const auto qp = g.spectral_index(ip, jp, l);
        if (qp < q) continue;
        for (int c = 0; c < 3; ++c) {
          const Complex avg = 0.5 * (v.comp[c][q] + std::conj(v.comp[c][qp]));
          v.comp[c][q] = avg;
          v.comp[c][qp] = std::conj(avg);
        }
      }
    }
  }
}

}  // namespace dampns
