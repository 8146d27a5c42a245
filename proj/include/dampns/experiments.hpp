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

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dampns/diagnostics.hpp"
#include "dampns/estimates.hpp"
#include "dampns/run_config.hpp"

namespace dampns {

inline constexpr double kDefaultSteadyTol = 1e-6;
inline constexpr int kSteadyWindow = 10;

/// Difference quotient |u(t+D) - u(t)| / (D max(1, |u(t)|)) at each pair of
/// consecutive samples; converged once it stays <= tol for `window`
/// consecutive pairs. T_c is the start of that window.
class SteadyStateMonitor {
 public:
  explicit SteadyStateMonitor(double tol = kDefaultSteadyTol, int window = kSteadyWindow);

  /// Feed the next sample; returns true once converged.
  bool push(double t, const SpectralVelocity& u);

  bool converged() const { return converged_; }
  double t_c() const { return t_c_; }
  const std::vector<double>& quotients() const { return quotients_; }

  /// Observer that feeds the monitor and stops the run on convergence.
  Observer observer(std::int64_t stride);

 private:
  double tol_;
  int window_;
  std::optional<SpectralVelocity> prev_;
  double prev_t_ = 0.0;
  double run_start_ = 0.0;
  int run_ = 0;
  bool converged_ = false;
  double t_c_ = std::numeric_limits<double>::infinity();
  std::vector<double> quotients_;
};

struct SteadyStateResult {
  bool converged = false;
  double t_c = std::numeric_limits<double>::infinity();
};

/// Batch form over states sampled at a uniform stride.
SteadyStateResult detect_steady_state(std::span<const double> times,
                                      std::span<const SpectralVelocity> states,
                                      double steady_tol = kDefaultSteadyTol);

enum class ExperimentKind { kSteadyState, kParameterSweep, kTrajectorySeparation, kAbsorbingSweep };

std::string to_string(ExperimentKind k);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSteadyState;
  RunConfig base;
  std::vector<double> alphas;  // empty means {base.alpha}
  std::vector<double> betas;   // empty means {base.beta}
  std::uint64_t perturbation_seed = 7;
  std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
  double steady_tol = kDefaultSteadyTol;
  double max_T = 200.0;
  int workers = 1;
  /// When set, each cell writes diagnostics.csv and final.snap under
  /// output_dir / run_id / cell name.
  bool persist = false;

  void validate() const;
  std::vector<double> alpha_axis() const;
  std::vector<double> beta_axis() const;
};

struct CellResult {
  double alpha = 0.0;
  double beta = 0.0;
  bool converged = false;
  double t_c = std::numeric_limits<double>::infinity();
  double t_final = 0.0;
  std::int64_t steps = 0;
  DiagnosticsRecord final_record;
  std::optional<SolverState> final_state;
  std::string snapshot_id;  // path of the persisted final state, if any
  std::optional<BoundReport> absorbing;  // absorbing sweeps only
};

struct SeparationRun {
  double delta = 0.0;
  std::vector<double> t;
  std::vector<double> distance;
  double max_ratio = 0.0;  // max_t d(t) / delta
};

struct MonotonicityVerdict {
  std::string axis;    // "alpha" (T_c along alpha at fixed beta) or "beta"
  double fixed = 0.0;  // the value held fixed
  std::vector<double> values;
  std::vector<double> t_c;  // infinity for cells that did not converge
  bool non_increasing = true;
};

struct SweepResult {
  std::vector<CellResult> cells;
  std::vector<SeparationRun> separations;
  double ratio_span = 0.0;  // max/min of max_ratio across deltas
  double fitted_rate = 0.0; // smallest c with d <= delta e^{ct} on all runs
  bool separation_pass = false;
  std::vector<MonotonicityVerdict> verdicts;

  const CellResult* cell(double alpha, double beta) const;
};

/// Runs one configuration until steady (or max_T when stop_on_steady is
/// off, or base.t_end for a plain run).
CellResult run_cell(const RunConfig& config, double steady_tol, double max_T,
                    bool stop_on_steady, const std::filesystem::path& persist_dir = {});

/// Every (alpha, beta) cell to steady state or max_T. Blow-up is rethrown
/// with the offending cell named.
SweepResult run_steady_state_experiment(const ExperimentSpec& spec);

struct IndependenceResult {
  bool conclusive = false;  // both runs converged
  bool independent = false;
  double distance = 0.0;    // |u_A - u_B| / max(1, |u_A|) at a common final time
  double t_final = 0.0;
  CellResult a, b;
};

/// Runs spec.base from `a` and from `b` to steady state, brings both to the
/// same final time and compares.
IndependenceResult run_initial_condition_independence(const ExperimentSpec& spec,
                                                      const InitialConditionSpec& a,
                                                      const InitialConditionSpec& b);

/// Runs u0 and u0 + delta p (p a unit random divergence-free field) in
/// lockstep to base.t_end for each delta. Throws std::invalid_argument
/// outside the uniqueness regime.
SweepResult run_trajectory_separation(const ExperimentSpec& spec);

std::vector<MonotonicityVerdict> monotonicity_verdicts(std::span<const CellResult> cells);

/// Steady-state sweep plus monotonicity verdicts.
SweepResult run_convergence_speed_sweep(const ExperimentSpec& spec);

/// Dispatch on spec.kind.
SweepResult run_experiment(const ExperimentSpec& spec);

std::string cell_name(double alpha, double beta);

}  // namespace dampns
