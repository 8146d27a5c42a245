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

#include "dampns/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <optional>

#include "dampns/csv_io.hpp"
#include "dampns/experiments.hpp"
#include "dampns/initial_condition.hpp"
#include "dampns/snapshot.hpp"

namespace dampns {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct ConfigSource {
  std::string config;
  std::string preset;
  std::string output_dir;
  bool overwrite = false;
};

void add_source_options(CLI::App* sc, ConfigSource& src) {
  auto* c = sc->add_option("--config", src.config, "Run configuration file");
  auto* p = sc->add_option("--preset", src.preset, "Built-in configuration (see `presets`)");
  c->excludes(p);
  sc->add_option("--output-dir", src.output_dir, "Override [run] output_dir");
  sc->add_flag("--overwrite", src.overwrite, "Reuse an existing run_id directory");
}

// Thrown for anything that should end in exit code 2 with usage text.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig load_source(const ConfigSource& src) {
  if (src.config.empty() && src.preset.empty()) {
    throw UsageError("one of --config or --preset is required");
  }
  try {
    RunConfig c = src.preset.empty() ? load_config(src.config) : preset_config(src.preset);
    if (!src.output_dir.empty()) c.output_dir = src.output_dir;
    return c;
  } catch (const ConfigError& e) {
    throw UsageError(std::string("config error: ") + e.what());
  }
}

fs::path run_dir(const RunConfig& c, bool overwrite) {
  const fs::path dir = fs::path(c.output_dir) / c.run_id;
  if (!overwrite && fs::exists(dir / "diagnostics.csv")) {
    throw UsageError("run_id '" + c.run_id + "' already exists in " + c.output_dir +
                     " (pass --overwrite or choose another run_id)");
  }
  fs::create_directories(dir);
  return dir;
}

json record_json(const DiagnosticsRecord& r) {
  return {{"t", r.t},     {"E", r.E},           {"V2", r.V2},
          {"Lbp", r.Lbp}, {"A2", r.A2},         {"P_f", r.P_f},
          {"P_damp", r.P_damp}, {"umax", r.umax}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json bound_json(const BoundReport& r, const std::string& status) {
  json stats = json::object();
  for (const auto& [k, v] : r.stats) stats[k] = finite_or_null(v);
  json j = {{"bound_id", to_string(r.id)},
            {"status", status},
            {"pass", status == "pass" || status == "fail" ? json(r.pass) : json(nullptr)},
            {"min_margin", r.margin.empty() ? json(nullptr) : finite_or_null(r.min_margin())},
            {"tolerance", r.tolerance},
            {"stats", stats}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string snapshot_name(std::int64_t step) {
  std::string digits = std::to_string(step);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return "snapshot_" + digits + ".snap";
}

// Integrates a config, streaming CSV and periodic snapshots into `dir`.
// Returns the final state; `records` receives every diagnostics row.
SolverState integrate_config(const RunConfig& c, const Physics& ph, const fs::path& dir,
                             const std::string& restart, std::vector<DiagnosticsRecord>* records) {
  const WaveGrid g = c.grid();
  SolverState s = restart.empty() ? SolverState{0.0, make_initial_condition(c.initial, g)}
                                  : restart_state(restart, g, ph);
  DiagnosticsWriter writer(dir / "diagnostics.csv");
  std::vector<Observer> obs{make_csv_observer(writer, ph, c.diag_stride)};
  if (c.snapshot_stride > 0) {
    obs.push_back({c.snapshot_stride, [&](const SolverState& st) {
                     write_snapshot(st, ph, dir / snapshot_name(st.step_count));
                     return ObserverAction::kContinue;
                   }});
  }
  SolverState final = integrate(std::move(s), c.t_end, c.scheme, ph, obs);
  writer.finish();
  write_snapshot(final, ph, dir / "final.snap");
  if (records) records->assign(writer.records().begin(), writer.records().end());
  return final;
}

int cmd_run(const ConfigSource& src, const std::string& restart, std::ostream& out) {
  const RunConfig c = load_source(src);
  const Physics ph = c.make_physics();
  const fs::path dir = run_dir(c, src.overwrite);
  const SolverState final = integrate_config(c, ph, dir, restart, nullptr);
  json j = {{"command", "run"},
            {"run_id", c.run_id},
            {"status", "ok"},
            {"steps", final.step_count},
            {"final", record_json(record(final.u, final.t, ph))},
            {"diagnostics", (dir / "diagnostics.csv").string()},
            {"snapshot", (dir / "final.snap").string()}};
  if (!restart.empty()) j["restarted_from"] = restart;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const ConfigSource& src, std::ostream& out) {
  const RunConfig c = load_source(src);
  const Physics ph = c.make_physics();
  const fs::path dir = run_dir(c, src.overwrite);
  std::vector<DiagnosticsRecord> recs;
  integrate_config(c, ph, dir, "", &recs);

  const WaveGrid g = c.grid();
  const double l1 = g.lambda1();
  const double f2 = ph.forcing->norm_sq();
  const double e0 = recs.front().E;
  const double T = recs.back().t;
  const double dt_scale = c.scheme.adaptive ? c.scheme.dt_max : c.scheme.dt;
  const double tol = std::max(decay_tolerance(e0, dt_scale, order(c.scheme.method)), 1e-6 * e0);

  json checks = json::array();
  bool all_pass = true;
  auto hard = [&](const BoundReport& r) {
    all_pass = all_pass && r.pass;
    checks.push_back(bound_json(r, r.pass ? "pass" : "fail"));
  };

  hard(check_decay_bound(recs, e0, c.mu, l1, f2, tol));
  hard(check_integral_bound(recs, recs.front().t, T, c.mu, c.alpha, l1, f2));
  hard(check_integral_bound(recs, T / 2, T, c.mu, c.alpha, l1, f2));
  {
    const BoundReport ball = check_absorbing_ball(recs, c.mu, l1, f2, 1.0);
    const auto predicted = ball.stat("predicted_entry_bound");
    if (!ball.pass && !ball.stat("entry_time") && predicted && T < *predicted) {
      checks.push_back(bound_json(ball, "inconclusive"));  // run too short to judge
    } else {
      hard(ball);
    }
  }
  hard(check_damping_positivity(recs));
  hard(check_energy_envelope(recs, c.mu, l1, f2, tol));
  if (in_regime(Regime::kRegularity, c.mu, c.alpha, c.beta) && recs.size() >= 4) {
    hard(check_norm_boundedness(recs, T / 2, c.mu, c.alpha, c.beta));
  } else {
    BoundReport skipped;
    skipped.id = BoundId::kNormBoundedness;
    skipped.note = "parameters outside " + describe(Regime::kRegularity);
    checks.push_back(bound_json(skipped, "skipped"));
  }

  json balance = nullptr;
  if (recs.size() >= 3) {
    double worst = 0.0;
    for (double r : energy_balance_residual(recs, c.mu)) worst = std::max(worst, std::abs(r));
    balance = worst;
  }
  json j = {{"command", "verify"},
            {"run_id", c.run_id},
            {"status", all_pass ? "pass" : "fail"},
            {"records", recs.size()},
            {"max_energy_balance_residual", balance},
            {"checks", checks},
            {"diagnostics", (dir / "diagnostics.csv").string()}};
  out << j.dump(2) << '\n';
  return all_pass ? kExitOk : kExitCheckFailed;
}

json cells_json(const SweepResult& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cell = {{"alpha", c.alpha},
                 {"beta", c.beta},
                 {"converged", c.converged},
                 {"T_c", finite_or_null(c.t_c)},
                 {"t_final", c.t_final},
                 {"steps", c.steps},
                 {"final", record_json(c.final_record)}};
    if (!c.snapshot_id.empty()) cell["snapshot"] = c.snapshot_id;
    cells.push_back(cell);
  }
  return cells;
}

struct SweepOptions {
  std::vector<double> alphas{0.2, 0.5};
  std::vector<double> betas{1.0, 2.0, 4.0};
  double max_T = 200.0;
  double steady_tol = kDefaultSteadyTol;
  int workers = 1;
};

int cmd_sweep(const ConfigSource& src, const SweepOptions& o, std::ostream& out) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kParameterSweep;
  spec.base = load_source(src);
  spec.alphas = o.alphas;
  spec.betas = o.betas;
  spec.max_T = o.max_T;
  spec.steady_tol = o.steady_tol;
  spec.workers = o.workers;
  spec.persist = true;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  run_dir(spec.base, src.overwrite);
  const SweepResult r = run_convergence_speed_sweep(spec);
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json tc = json::array();
    for (double t : v.t_c) tc.push_back(finite_or_null(t));
    verdicts.push_back({{"along", v.axis},
                        {"fixed", v.fixed},
                        {"values", v.values},
                        {"T_c", tc},
                        {"non_increasing", v.non_increasing}});
  }
  json j = {{"command", "sweep"},
            {"run_id", spec.base.run_id},
            {"steady_tol", spec.steady_tol},
            {"max_T", spec.max_T},
            {"cells", cells_json(r)},
            {"verdicts", verdicts}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_separate(const ConfigSource& src, const std::vector<double>& deltas,
                 std::uint64_t seed, std::ostream& out) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kTrajectorySeparation;
  spec.base = load_source(src);
  spec.deltas = deltas;
  spec.perturbation_seed = seed;
  spec.persist = true;
  try {
    spec.validate();
    if (!in_regime(Regime::kUniqueness, spec.base.mu, spec.base.alpha, spec.base.beta)) {
      throw std::invalid_argument("separation requires " + describe(Regime::kUniqueness));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  run_dir(spec.base, src.overwrite);
  const SweepResult r = run_trajectory_separation(spec);
  json runs = json::array();
  for (const auto& s : r.separations) {
    runs.push_back({{"delta", s.delta},
                    {"max_ratio", s.max_ratio},
                    {"final_ratio", s.distance.back() / s.delta}});
  }
  json j = {{"command", "separate"},
            {"run_id", spec.base.run_id},
            {"status", r.separation_pass ? "pass" : "fail"},
            {"ratio_span", r.ratio_span},
            {"fitted_rate", r.fitted_rate},
            {"runs", runs}};
  out << j.dump(2) << '\n';
  return r.separation_pass ? kExitOk : kExitCheckFailed;
}

int cmd_presets(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    for (const auto& p : presets()) {
      if (p.name == show) {
        out << p.text;
        return kExitOk;
      }
    }
    throw UsageError("unknown preset '" + show + "'");
  }
  json list = json::array();
  for (const auto& p : presets()) list.push_back({{"name", p.name}, {"description", p.description}});
  out << json{{"command", "presets"}, {"presets", list}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral Navier-Stokes with nonlinear damping on the 3-torus", "dampns"};
  app.require_subcommand(1, 1);

  ConfigSource src;
  std::string restart;
  auto* run = app.add_subcommand("run", "Integrate one configuration");
  add_source_options(run, src);
  run->add_option("--restart", restart, "Continue from a snapshot file");

  auto* verify = app.add_subcommand("verify", "Run and check every a priori bound");
  add_source_options(verify, src);

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Steady-state convergence over an (alpha, beta) grid");
  add_source_options(sweep, src);
  sweep->add_option("--alphas", sweep_opts.alphas, "Damping strengths")->delimiter(',');
  sweep->add_option("--betas", sweep_opts.betas, "Damping exponents")->delimiter(',');
  sweep->add_option("--max-T", sweep_opts.max_T, "Time cap per cell");
  sweep->add_option("--steady-tol", sweep_opts.steady_tol, "Steady-state threshold");
  sweep->add_option("--workers", sweep_opts.workers, "Cells run concurrently");

  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 7;
  auto* separate = app.add_subcommand("separate", "Perturbation growth in the uniqueness regime");
  add_source_options(separate, src);
  separate->add_option("--deltas", deltas, "Perturbation amplitudes")->delimiter(',');
  separate->add_option("--seed", seed, "Perturbation seed");

  std::string show;
  auto* list = app.add_subcommand("presets", "List built-in configurations");
  list->add_option("--show", show, "Print the configuration text of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  }

  CLI::App* used = app.get_subcommands().front();
  try {
    if (used == run) return cmd_run(src, restart, out);
    if (used == verify) return cmd_verify(src, out);
    if (used == sweep) return cmd_sweep(src, sweep_opts, out);
    if (used == separate) return cmd_separate(src, deltas, seed, out);
    return cmd_presets(show, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << used->help();
    return kExitUsage;
  } catch (const BlowUpError& e) {
    out << json{{"command", used->get_name()}, {"status", "blow_up"}, {"t", e.time()},
                {"message", e.what()}}.dump(2)
        << '\n';
    return kExitCheckFailed;
  } catch (const SnapshotError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace dampns
