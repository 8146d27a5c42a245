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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dampns/diagnostics.hpp"

namespace dampns {

enum class BoundId {
  kDecay,              ///< |u(t)|^2 <= e^{-mu l1 t}|u0|^2 + |f|^2/(mu l1)^2
  kIntegral,           ///< mu int V2 + 2 alpha int Lbp <= ...
  kAbsorbingBall,      ///< entry into |u|^2 <= 1 + |f|^2/(mu l1)^2 and no exit
  kDampingPositivity,  ///< P_damp >= 0
  kNormBoundedness,    ///< V2, Lbp, A2 stay bounded after burn-in
  kEnergyEnvelope,     ///< E(t) - |f|^2 t / (mu l1) non-increasing
};

/// Stable identifier used in reports ("decay_EstWeak1", ...).
std::string to_string(BoundId id);

/// Outcome of one inequality over one trajectory. margin[i] is
/// (bound - observed) at checked_at[i]; pass iff min(margin) >= -tolerance.
struct BoundReport {
  BoundId id{};
  std::vector<double> checked_at;
  std::vector<double> margin;
  double tolerance = 0.0;
  bool pass = false;
  /// Extra measured quantities (entry time, suprema, slopes, ...).
  std::vector<std::pair<std::string, double>> stats;
  std::string note;

  double min_margin() const;
  std::optional<double> stat(const std::string& name) const;
};

/// Parameter sets singled out by the theory.
enum class Regime {
  /// beta > 3, or beta = 3 with 4 alpha mu >= 1: unique weak solutions.
  kUniqueness,
  /// beta in (3, 5), or beta = 3 with 4 alpha mu > 1: bounded V and D(A)
  /// norms after any positive time.
  kRegularity,
};

bool in_regime(Regime regime, double mu, double alpha, double beta);
std::string describe(Regime regime);

/// The 1 + |f|^2/(mu l1)^2 floor shared by the decay bound and the ball.
double forcing_floor(double mu, double lambda1, double f_norm_sq);

/// max(1e-8, c * dt^p * E0).
double decay_tolerance(double e0, double dt, int order, double c_scheme = 1.0);

BoundReport check_decay_bound(std::span<const DiagnosticsRecord> records, double e0,
                              double mu, double lambda1, double f_norm_sq,
                              double tolerance);

/// Checks the running inequality for every record time tau in (s, t]:
///   mu int_s^tau V2 + 2 alpha int_s^tau Lbp
///     <= E0 + |f|^2/(mu l1)^2 + |f|^2 (tau - s)/(mu l1).
/// Integrals are trapezoidal; the tolerance is the larger of 1e-8 and the
/// trapezoid-versus-double-stride discrepancy. Throws if [s, t] is not
/// covered by the records.
BoundReport check_integral_bound(std::span<const DiagnosticsRecord> records, double s,
                                 double t, double mu, double alpha, double lambda1,
                                 double f_norm_sq);

/// Entry time t* into the absorbing ball (relative to the first record), the
/// margin radius^2 - E afterwards, and t* <= log(E0/entry_tol)/(mu l1) + time_slack.
BoundReport check_absorbing_ball(std::span<const DiagnosticsRecord> records, double mu,
                                 double lambda1, double f_norm_sq, double entry_tol,
                                 double time_slack = 1.0, double tolerance = 1e-8);

BoundReport check_damping_positivity(std::span<const DiagnosticsRecord> records);

/// Empirical boundedness of V2, Lbp and A2 on [burn_in, T]: reports their
/// suprema and the growth rate of the log sup-envelope over the final half of
/// the run, which must not exceed `slope_tol`. Throws std::invalid_argument
/// outside Regime::kRegularity or if the run does not extend past burn_in.
BoundReport check_norm_boundedness(std::span<const DiagnosticsRecord> records,
                                   double burn_in, double mu, double alpha,
                                   double beta, double slope_tol = 1e-2);

/// J(t) = E(t) - |f|^2 t / (mu l1) non-increasing between adjacent records.
BoundReport check_energy_envelope(std::span<const DiagnosticsRecord> records, double mu,
                                  double lambda1, double f_norm_sq, double tolerance);

}  // namespace dampns
