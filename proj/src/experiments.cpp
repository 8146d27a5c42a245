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

#include "dampns/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "dampns/csv_io.hpp"
#include "dampns/initial_condition.hpp"
#include "dampns/snapshot.hpp"

namespace dampns {

SteadyStateMonitor::SteadyStateMonitor(double tol, int window) : tol_(tol), window_(window) {
  if (!(tol > 0.0)) throw std::invalid_argument("steady_tol must be > 0");
  if (window < 1) throw std::invalid_argument("steady window must be >= 1");
}

bool SteadyStateMonitor::push(double t, const SpectralVelocity& u) {
  if (converged_) return true;
  if (prev_) {
    const double span = t - prev_t_;
    const double scale = std::max(1.0, std::sqrt(norm_sq(*prev_)));
    const double q = std::sqrt(norm_sq(u - *prev_)) / (span * scale);
    quotients_.push_back(q);
    if (q <= tol_) {
      if (run_ == 0) run_start_ = prev_t_;
      if (++run_ >= window_) {
        converged_ = true;
        t_c_ = run_start_;
      }
    } else {
      run_ = 0;
    }
  }
  prev_ = u;
  prev_t_ = t;
  return converged_;
}

Observer SteadyStateMonitor::observer(std::int64_t stride) {
  return Observer{stride, [this](const SolverState& s) {
                    return push(s.t, s.u) ? ObserverAction::kStop : ObserverAction::kContinue;
                  }};
}

SteadyStateResult detect_steady_state(std::span<const double> times,
                                      std::span<const SpectralVelocity> states,
                                      double steady_tol) {
  if (times.size() != states.size()) {
    throw std::invalid_argument("detect_steady_state: times and states differ in length");
  }
  SteadyStateMonitor m(steady_tol);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (m.push(times[i], states[i])) break;
  }
  return {m.converged(), m.t_c()};
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSteadyState: return "steady_state";
    case ExperimentKind::kParameterSweep: return "parameter_sweep";
    case ExperimentKind::kTrajectorySeparation: return "trajectory_separation";
    case ExperimentKind::kAbsorbingSweep: return "absorbing_sweep";
  }
  return "?";
}

std::vector<double> ExperimentSpec::alpha_axis() const {
  return alphas.empty() ? std::vector<double>{base.alpha} : alphas;
}

std::vector<double> ExperimentSpec::beta_axis() const {
  return betas.empty() ? std::vector<double>{base.beta} : betas;
}

void ExperimentSpec::validate() const {
  base.validate();
  for (double a : alpha_axis()) {
    if (!(a > 0.0)) throw std::invalid_argument("sweep alpha values must be > 0");
  }
  for (double b : beta_axis()) {
    if (!(b >= 1.0)) throw std::invalid_argument("sweep beta values must be >= 1");
  }
  if (kind == ExperimentKind::kTrajectorySeparation) {
    if (deltas.empty()) throw std::invalid_argument("separation needs at least one delta");
    for (double d : deltas) {
      if (!(d > 0.0)) throw std::invalid_argument("perturbation amplitudes must be > 0");
    }
  }
  if (!(steady_tol > 0.0)) throw std::invalid_argument("steady_tol must be > 0");
  if (!(max_T > 0.0)) throw std::invalid_argument("max_T must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

const CellResult* SweepResult::cell(double alpha, double beta) const {
  for (const auto& c : cells) {
    if (c.alpha == alpha && c.beta == beta) return &c;
  }
  return nullptr;
}

std::string cell_name(double alpha, double beta) {
  auto fmt = [](double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
  };
  return "a" + fmt(alpha) + "_b" + fmt(beta);
}

namespace {

struct CellRun {
  CellResult result;
  std::vector<DiagnosticsRecord> records;
};

CellRun run_cell_impl(const RunConfig& config, double steady_tol, double until,
                      bool stop_on_steady, const std::filesystem::path& persist_dir) {
  const Physics physics = config.make_physics();
  const WaveGrid grid = config.grid();
  CellRun out;
  out.result.alpha = config.alpha;
  out.result.beta = config.beta;

  std::optional<DiagnosticsWriter> writer;
  if (!persist_dir.empty()) writer.emplace(persist_dir / "diagnostics.csv");

  SteadyStateMonitor monitor(steady_tol);
  std::vector<Observer> observers;
  observers.push_back({config.diag_stride, [&](const SolverState& s) {
                         out.records.push_back(record(s.u, s.t, physics));
                         if (writer) writer->append(out.records.back());
                         return ObserverAction::kContinue;
                       }});
  observers.push_back({config.diag_stride, [&](const SolverState& s) {
                         const bool done = monitor.push(s.t, s.u);
                         return done && stop_on_steady ? ObserverAction::kStop
                                                       : ObserverAction::kContinue;
                       }});

  SolverState final = integrate(SolverState{0.0, make_initial_condition(config.initial, grid)},
                                until, config.scheme, physics, observers);
  fill_energy_rate(out.records);

  auto& r = out.result;
  r.converged = monitor.converged();
  r.t_c = monitor.t_c();
  r.t_final = final.t;
  r.steps = final.step_count;
  r.final_record = record(final.u, final.t, physics);
  if (writer) {
    writer->finish();
    const auto snap = persist_dir / "final.snap";
    write_snapshot(final, physics, snap);
    r.snapshot_id = snap.string();
  }
  r.final_state = std::move(final);
  return out;
}

RunConfig cell_config(const ExperimentSpec& spec, double alpha, double beta) {
  RunConfig c = spec.base;
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

std::filesystem::path cell_dir(const ExperimentSpec& spec, double alpha, double beta) {
  if (!spec.persist) return {};
  return std::filesystem::path(spec.base.output_dir) / spec.base.run_id / cell_name(alpha, beta);
}

// Runs job(i) for i in [0, count) on `workers` threads. Exceptions are
// rethrown in index order so the reported failure does not depend on timing.
template <typename Job>
void parallel_for(std::size_t count, int workers, Job job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int extra = std::max(0, std::min<int>(workers, static_cast<int>(count)) - 1);
  std::vector<std::thread> threads;
  for (int w = 0; w < extra; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SweepResult run_cells(const ExperimentSpec& spec, bool absorbing) {
  spec.validate();
  std::vector<std::pair<double, double>> grid;
  for (double a : spec.alpha_axis()) {
    for (double b : spec.beta_axis()) grid.emplace_back(a, b);
  }
  SweepResult result;
  result.cells.resize(grid.size());
  parallel_for(grid.size(), spec.workers, [&](std::size_t i) {
    const auto [a, b] = grid[i];
    const RunConfig cfg = cell_config(spec, a, b);
    try {
      if (absorbing) {
        CellRun run = run_cell_impl(cfg, spec.steady_tol, cfg.t_end, false, cell_dir(spec, a, b));
        const Physics ph = cfg.make_physics();
        run.result.absorbing = check_absorbing_ball(run.records, cfg.mu, cfg.grid().lambda1(),
                                                    ph.forcing->norm_sq(), 1.0);
        result.cells[i] = std::move(run.result);
      } else {
        result.cells[i] =
            run_cell_impl(cfg, spec.steady_tol, spec.max_T, true, cell_dir(spec, a, b)).result;
      }
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.time(), cell_name(a, b) + ": " + e.what());
    }
  });
  return result;
}

}  // namespace

CellResult run_cell(const RunConfig& config, double steady_tol, double max_T,
                    bool stop_on_steady, const std::filesystem::path& persist_dir) {
  return run_cell_impl(config, steady_tol, max_T, stop_on_steady, persist_dir).result;
}

SweepResult run_steady_state_experiment(const ExperimentSpec& spec) {
  return run_cells(spec, false);
}

IndependenceResult run_initial_condition_independence(const ExperimentSpec& spec,
                                                      const InitialConditionSpec& a,
                                                      const InitialConditionSpec& b) {
  spec.validate();
  RunConfig ca = spec.base, cb = spec.base;
  ca.initial = a;
  cb.initial = b;
  IndependenceResult out;
  std::array<CellResult*, 2> cells{&out.a, &out.b};
  std::array<const RunConfig*, 2> configs{&ca, &cb};
  parallel_for(2, spec.workers, [&](std::size_t i) {
    *cells[i] = run_cell(*configs[i], spec.steady_tol, spec.max_T, true);
  });
  out.conclusive = out.a.converged && out.b.converged;

  // Bring the earlier-stopping run forward so both are compared at one time.
  const Physics physics = spec.base.make_physics();
  out.t_final = std::max(out.a.t_final, out.b.t_final);
  for (CellResult* c : cells) {
    if (c->t_final < out.t_final) {
      c->final_state = integrate(*c->final_state, out.t_final, spec.base.scheme, physics);
      c->t_final = c->final_state->t;
      c->final_record = record(c->final_state->u, c->t_final, physics);
    }
  }
  const auto& ua = out.a.final_state->u;
  const auto& ub = out.b.final_state->u;
  out.distance = std::sqrt(norm_sq(ua - ub)) / std::max(1.0, std::sqrt(norm_sq(ua)));
  out.independent = out.conclusive && out.distance <= 10.0 * spec.steady_tol;
  return out;
}

SweepResult run_trajectory_separation(const ExperimentSpec& spec) {
  spec.validate();
  const RunConfig& c = spec.base;
  if (!in_regime(Regime::kUniqueness, c.mu, c.alpha, c.beta)) {
    throw std::invalid_argument("trajectory separation requires " +
                                describe(Regime::kUniqueness));
  }
  const Physics physics = c.make_physics();
  const WaveGrid grid = c.grid();
  const SpectralVelocity u0 = make_initial_condition(c.initial, grid);
  const SpectralVelocity p = random_unit_field(spec.perturbation_seed, grid);

  SweepResult result;
  SolverState base{0.0, u0};
  std::vector<SolverState> perturbed;
  for (double d : spec.deltas) {
    perturbed.push_back(SolverState{0.0, u0 + d * p});
    result.separations.push_back(SeparationRun{d, {}, {}, 0.0});
  }
  auto sample = [&] {
    for (std::size_t k = 0; k < perturbed.size(); ++k) {
      auto& run = result.separations[k];
      run.t.push_back(base.t);
      run.distance.push_back(std::sqrt(norm_sq(perturbed[k].u - base.u)));
    }
  };
  sample();
  // All trajectories share the step sequence of the unperturbed run.
  while (base.t < c.t_end) {
    double dt = c.scheme.adaptive ? adapt_dt(base, c.scheme, physics) : c.scheme.dt;
    if (base.t + dt >= c.t_end) dt = c.t_end - base.t;
    base = step(base, c.scheme, physics, dt);
    for (auto& s : perturbed) s = step(s, c.scheme, physics, dt);
    if (base.step_count % c.diag_stride == 0 || base.t >= c.t_end) sample();
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool starts_exact = true;
  result.fitted_rate = -std::numeric_limits<double>::infinity();
  for (auto& run : result.separations) {
    starts_exact = starts_exact && std::abs(run.distance.front() - run.delta) <= 1e-10 * run.delta;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
      run.max_ratio = std::max(run.max_ratio, run.distance[i] / run.delta);
      if (run.t[i] > 0.0) {
        result.fitted_rate =
            std::max(result.fitted_rate, std::log(run.distance[i] / run.delta) / run.t[i]);
      }
    }
    lo = std::min(lo, run.max_ratio);
    hi = std::max(hi, run.max_ratio);
  }
  result.ratio_span = hi / lo;
  result.separation_pass = starts_exact && result.ratio_span < 2.0;

  if (spec.persist) {
    const auto dir = std::filesystem::path(c.output_dir) / c.run_id;
    std::filesystem::create_directories(dir);
    for (const auto& run : result.separations) {
      std::ofstream out(dir / ("separation_" + cell_name(c.alpha, c.beta) + "_delta" +
                               format_double(run.delta) + ".csv"));
      out << "t,distance\n";
      for (std::size_t i = 0; i < run.t.size(); ++i) {
        out << format_double(run.t[i]) << ',' << format_double(run.distance[i]) << '\n';
      }
      if (!out) throw IoError("cannot write separation series to " + dir.string());
    }
  }
  return result;
}

std::vector<MonotonicityVerdict> monotonicity_verdicts(std::span<const CellResult> cells) {
  std::vector<double> alphas, betas;
  for (const auto& c : cells) {
    alphas.push_back(c.alpha);
    betas.push_back(c.beta);
  }
  for (auto* v : {&alphas, &betas}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  auto find = [&](double a, double b) -> const CellResult* {
    for (const auto& c : cells) {
      if (c.alpha == a && c.beta == b) return &c;
    }
    return nullptr;
  };
  auto line = [&](const std::string& axis, double fixed, const std::vector<double>& along) {
    MonotonicityVerdict v{axis, fixed, {}, {}, true};
    for (double x : along) {
      const CellResult* c = axis == "alpha" ? find(x, fixed) : find(fixed, x);
      if (c == nullptr) continue;
      v.values.push_back(x);
      v.t_c.push_back(c->converged ? c->t_c : std::numeric_limits<double>::infinity());
    }
    for (std::size_t i = 1; i < v.t_c.size(); ++i) {
      if (v.t_c[i] > v.t_c[i - 1]) v.non_increasing = false;
    }
    return v;
  };
  std::vector<MonotonicityVerdict> out;
  for (double b : betas) out.push_back(line("alpha", b, alphas));
  for (double a : alphas) out.push_back(line("beta", a, betas));
  return out;
}

SweepResult run_convergence_speed_sweep(const ExperimentSpec& spec) {
  SweepResult r = run_steady_state_experiment(spec);
  r.verdicts = monotonicity_verdicts(r.cells);
  return r;
}

SweepResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::kSteadyState: return run_steady_state_experiment(spec);
    case ExperimentKind::kParameterSweep: return run_convergence_speed_sweep(spec);
    case ExperimentKind::kTrajectorySeparation: return run_trajectory_separation(spec);
    case ExperimentKind::kAbsorbingSweep: return run_cells(spec, true);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace dampns
