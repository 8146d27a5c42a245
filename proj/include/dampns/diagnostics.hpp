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

#include <span>
#include <vector>

#include "dampns/time_integration.hpp"

namespace dampns {

/// Norms and power-budget terms of one velocity snapshot. Field names follow
/// the CSV columns.
struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;       ///< |u|^2
  double V2 = 0.0;      ///< ||u||^2 = sum |k|^2 |u_k|^2
  double Lbp = 0.0;     ///< |u|_{beta+1}^{beta+1}, grid quadrature
  double A2 = 0.0;      ///< |Au|^2 = sum |k|^4 |u_k|^2
  double P_f = 0.0;     ///< (f, u)
  double P_damp = 0.0;  ///< alpha * Lbp
  double dEdt = 0.0;    ///< finite-difference d|u|^2/dt, see fill_energy_rate
  double umax = 0.0;    ///< max_x |u(x)|

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

DiagnosticsRecord record(const SpectralVelocity& u, double t, const Physics& physics);

/// Fills dEdt from neighbouring E values with the three-point derivative
/// (centered in the interior, one-sided second order at the ends). With two
/// records both get the plain difference; a single record is left alone.
void fill_energy_rate(std::span<DiagnosticsRecord> records);

/// The dEdt value fill_energy_rate assigns to record i (needs >= 3 records).
/// Interior values depend only on records i-1..i+1, so they are final as
/// soon as record i+1 exists.
double energy_rate(std::span<const DiagnosticsRecord> records, std::size_t i);

/// r(t) = dE/dt / 2 + mu V2 + P_damp - P_f per record, with dE/dt from
/// second-order differences of E. Requires >= 3 records at a uniform stride
/// (std::invalid_argument otherwise).
std::vector<double> energy_balance_residual(std::span<const DiagnosticsRecord> records,
                                            double mu);

/// |u(t+dt) - u(t)| / dt, the first-order stand-in for |u_t|.
double time_derivative_proxy(const SpectralVelocity& before,
                             const SpectralVelocity& after, double dt);

/// Observer that appends a record every `stride` steps.
Observer make_recorder(std::vector<DiagnosticsRecord>& sink, const Physics& physics,
                       std::int64_t stride);

}  // namespace dampns
