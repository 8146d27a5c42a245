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

#include "dampns/fields.hpp"

namespace dampns {

/// Divergence tolerance of the SpectralVelocity invariant, relative to the
/// largest coefficient magnitude.
inline constexpr double kDivergenceTolerance = 1e-12;

/// Leray projection onto divergence-free, zero-mean fields, followed by the
/// 2/3 truncation: u(k) = v(k) - k (k.v(k)) / |k|^2 on retained k != 0,
/// zero elsewhere. Idempotent.
SpectralVelocity leray_project(const SpectralVector& v);

PhysicalVelocity to_physical(const SpectralVector& v);
PhysicalVelocity to_physical(const SpectralVelocity& u);
/// Plain transform, no projection and no truncation.
SpectralVector to_spectral(const PhysicalVelocity& u);

/// -P[(u.grad)u], convective form, dealiased.
SpectralVelocity nonlinear_term(const SpectralVelocity& u);

/// -P[alpha |u|^(beta-1) u], the damping contribution to du/dt.
/// Throws std::invalid_argument unless alpha > 0 and beta >= 1.
SpectralVelocity damping_term(const SpectralVelocity& u, double alpha,
                              double beta);

/// nonlinear_term(u) + damping_term(u, alpha, beta) sharing one set of
/// transforms. Also reports the max pointwise speed seen on the grid.
SpectralVelocity advection_and_damping(const SpectralVelocity& u, double alpha,
                                       double beta, double* max_speed = nullptr);

/// Poincare constant of the zero-mean periodic box, (2*pi/L)^2.
double stokes_lambda1(const WaveGrid& grid);

/// |w|^(beta-1) given |w|^2, with exact fast paths for small integer beta.
double damping_factor(double speed_sq, double beta);

/// (dx)^3 * sum_x |u(x)|^(beta+1) on the collocation grid.
double lp_power_sum(const PhysicalVelocity& u, double beta);

/// max_k |k.u(k)| / max_k |u(k)| (0 for the zero field).
double divergence_defect(const SpectralVector& v);
/// max over modes of |v(-k) - conj(v(k))| within the stored l = 0 plane.
double hermitian_defect(const SpectralVector& v);
/// Largest coefficient magnitude outside the 2/3 mask or at k = 0.
double truncation_defect(const SpectralVector& v);

/// Throws std::logic_error if `u` breaks any SpectralVelocity invariant.
void check_invariants(const SpectralVelocity& u);

/// Complex Hermitian fix-up of the stored l = 0 and l = N/2 planes: replaces
/// each pair (k, -k) by its Hermitian average.
void symmetrize(SpectralVector& v);

}  // namespace dampns
