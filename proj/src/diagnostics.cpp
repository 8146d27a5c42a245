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

#include "dampns/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "dampns/spectral_ops.hpp"

namespace dampns {

DiagnosticsRecord record(const SpectralVelocity& u, double t, const Physics& physics) {
  const auto& g = u.grid();
  const double k0sq = g.k0() * g.k0();
  double v2 = 0.0, a2 = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double mx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const double my = g.wavenumber(j);
      for (int l = 0; l < g.n_half(); ++l) {
        const auto q = g.spectral_index(i, j, l);
        const double k2 = k0sq * (mx * mx + my * my + double(l) * l);
        double c2 = 0.0;
        for (int c = 0; c < 3; ++c) c2 += std::norm(u.component(c)[q]);
        const double w = g.hermitian_weight(l) * c2;
        v2 += w * k2;
        a2 += w * k2 * k2;
      }
    }
  }

  const PhysicalVelocity phys = to_physical(u);
  DiagnosticsRecord r;
  r.t = t;
  r.E = norm_sq(u);
  r.V2 = g.volume() * v2;
  r.A2 = g.volume() * a2;
  r.Lbp = lp_power_sum(phys, physics.beta);
  r.P_f = physics.forcing->is_zero() ? 0.0 : inner(physics.f_hat(), u);
  r.P_damp = physics.alpha * r.Lbp;
  r.dEdt = std::nan("");
  r.umax = phys.max_speed();
  if (!std::isfinite(r.E) || !std::isfinite(r.Lbp) || !std::isfinite(r.A2)) {
    throw BlowUpError(t, "diagnostics: non-finite norms");
  }
  return r;
}

namespace {

// Derivative at x1 of the parabola through (x0,f0), (x1,f1), (x2,f2).
double three_point(double x0, double x1, double x2, double f0, double f1, double f2,
                   int at) {
  const double h1 = x1 - x0, h2 = x2 - x1;
  switch (at) {
    case 0:
      return -(2 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1 -
             h1 / (h2 * (h1 + h2)) * f2;
    case 1:
      return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 +
             h1 / (h2 * (h1 + h2)) * f2;
    default:
      return h2 / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1 +
             (2 * h2 + h1) / (h2 * (h1 + h2)) * f2;
  }
}

}  // namespace

double energy_rate(std::span<const DiagnosticsRecord> r, std::size_t i) {
  const std::size_t n = r.size();
  if (n < 3 || i >= n) throw std::invalid_argument("energy_rate: need 3 records and i < n");
  const std::size_t c = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
  const int at = i == 0 ? 0 : (i == n - 1 ? 2 : 1);
  return three_point(r[c - 1].t, r[c].t, r[c + 1].t, r[c - 1].E, r[c].E, r[c + 1].E,
                     at);
}

void fill_energy_rate(std::span<DiagnosticsRecord> records) {
  const std::size_t n = records.size();
  if (n < 2) return;
  if (n == 2) {
    const double d = (records[1].E - records[0].E) / (records[1].t - records[0].t);
    records[0].dEdt = records[1].dEdt = d;
    return;
  }
  std::vector<double> rates(n);
  for (std::size_t i = 0; i < n; ++i) rates[i] = energy_rate(records, i);
  for (std::size_t i = 0; i < n; ++i) records[i].dEdt = rates[i];
}

std::vector<double> energy_balance_residual(std::span<const DiagnosticsRecord> records,
                                            double mu) {
  const std::size_t n = records.size();
  if (n < 3) {
    throw std::invalid_argument("energy_balance_residual: need at least 3 records");
  }
  const double stride = (records[n - 1].t - records[0].t) / double(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = records[i].t - records[i - 1].t;
    if (std::abs(h - stride) > 1e-6 * stride) {
      throw std::invalid_argument("energy_balance_residual: non-uniform record stride");
    }
  }
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = records[i];
    r[i] = 0.5 * energy_rate(records, i) + mu * rec.V2 + rec.P_damp - rec.P_f;
  }
  return r;
}

double time_derivative_proxy(const SpectralVelocity& before,
                             const SpectralVelocity& after, double dt) {
  return std::sqrt(norm_sq(after - before)) / dt;
}

Observer make_recorder(std::vector<DiagnosticsRecord>& sink, const Physics& physics,
                       std::int64_t stride) {
  return Observer{stride, [&sink, physics](const SolverState& s) {
                    sink.push_back(record(s.u, s.t, physics));
                    return ObserverAction::kContinue;
                  }};
}

}  // namespace dampns
