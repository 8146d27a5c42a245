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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <numbers>

#include "dampns/experiments.hpp"
#include "dampns/initial_condition.hpp"
#include "dampns/snapshot.hpp"
#include "doctest.h"

using namespace dampns;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

RunConfig small_config(double mu, double alpha, double beta) {
  RunConfig c;
  c.mu = mu;
  c.alpha = alpha;
  c.beta = beta;
  c.n = 8;
  c.length = 2 * kPi;
  c.scheme.adaptive = false;
  c.scheme.dt = 0.01;
  c.diag_stride = 5;
  c.t_end = 1.0;
  return c;
}

CellResult cell(double a, double b, double tc) {
  CellResult c;
  c.alpha = a;
  c.beta = b;
  c.converged = std::isfinite(tc);
  c.t_c = tc;
  return c;
}

}  // namespace

TEST_CASE("steady-state monitor") {
  const WaveGrid g(8, 2 * kPi);

  SUBCASE("an exact fixed point converges at T_c = 0") {
    std::vector<double> t;
    std::vector<SpectralVelocity> u;
    for (int i = 0; i <= 12; ++i) {
      t.push_back(0.5 * i);
      u.push_back(SpectralVelocity(g));
    }
    const auto r = detect_steady_state(t, u);
    CHECK(r.converged);
    CHECK(r.t_c == 0.0);
  }

  SUBCASE("ten sustained strides are required") {
    SteadyStateMonitor m(1e-6);
    const SpectralVelocity z(g);
    for (int i = 0; i < 10; ++i) CHECK_FALSE(m.push(i, z));
    CHECK(m.push(10, z));
    CHECK(m.t_c() == 0.0);
  }

  SUBCASE("a violation restarts the window") {
    SteadyStateMonitor m(1e-6);
    const SpectralVelocity z(g);
    const SpectralVelocity s = make_initial_condition(ShearInit{1.0}, g);
    m.push(0, z);
    m.push(1, z);
    m.push(2, s);  // big jump
    for (int i = 3; i < 12; ++i) m.push(i, s);
    CHECK_FALSE(m.converged());
    CHECK(m.push(12, s));
    CHECK(m.t_c() == 2.0);
  }

  SUBCASE("shear decay: T_c matches the analytic difference quotient") {
    // |u(t)| = |u0| e^{-ct}, c = mu + alpha. Once |u| < 1 the quotient is
    // |u(t)| (1 - e^{-c D}) / D, so the first sample below tol is known.
    RunConfig cfg = small_config(0.1, 0.2, 1.0);
    cfg.initial = ShearInit{1.0};
    const double tol = 1e-3;
    const CellResult r = run_cell(cfg, tol, 60.0, true);
    REQUIRE(r.converged);
    const double c = 0.3, D = 0.05;
    const double u0 = std::sqrt(std::pow(2 * kPi, 3) / 2);
    const double analytic = std::log(u0 * (1 - std::exp(-c * D)) / (D * tol)) / c;
    CHECK(r.t_c >= analytic - D);
    CHECK(r.t_c <= analytic + D);
    CHECK(r.t_final == doctest::Approx(r.t_c + kSteadyWindow * D));
  }

  SUBCASE("bad tolerance") { CHECK_THROWS_AS(SteadyStateMonitor(0.0), std::invalid_argument); }
}

TEST_CASE("monotonicity verdicts") {
  SUBCASE("one cell is vacuously monotone") {
    const std::vector<CellResult> cells{cell(0.2, 1, 10)};
    for (const auto& v : monotonicity_verdicts(cells)) CHECK(v.non_increasing);
  }
  SUBCASE("grid with a non-monotone beta row and a non-converged cell") {
    const std::vector<CellResult> cells{cell(0.2, 1, 30), cell(0.2, 2, kInf), cell(0.5, 1, 20),
                                        cell(0.5, 2, 25)};
    const auto v = monotonicity_verdicts(cells);
    REQUIRE(v.size() == 4);
    CHECK(v[0].axis == "alpha");
    CHECK(v[0].fixed == 1.0);
    CHECK(v[0].non_increasing);
    CHECK(v[1].fixed == 2.0);
    CHECK(v[1].non_increasing);  // inf -> 25
    CHECK(v[2].axis == "beta");
    CHECK_FALSE(v[2].non_increasing);  // 30 -> inf
    CHECK_FALSE(v[3].non_increasing);  // 20 -> 25
  }
}

TEST_CASE("steady-state sweep with f = 0") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kParameterSweep;
  spec.base = small_config(0.1, 0.2, 1.0);
  spec.base.initial = ShearInit{1.0};
  spec.alphas = {0.2, 0.5};
  spec.betas = {1.0};
  spec.steady_tol = 1e-3;
  spec.max_T = 60.0;
  const SweepResult r = run_convergence_speed_sweep(spec);
  REQUIRE(r.cells.size() == 2);
  for (const auto& c : r.cells) {
    CHECK(c.converged);
    CHECK(c.final_record.E < 1e-2);  // rest state u = 0
  }
  // decay rate mu + alpha grows with alpha
  CHECK(r.cell(0.5, 1.0)->t_c < r.cell(0.2, 1.0)->t_c);
  CHECK(r.verdicts.front().non_increasing);

  SUBCASE("worker count does not change results") {
    ExperimentSpec par = spec;
    par.workers = 2;
    const SweepResult r2 = run_convergence_speed_sweep(par);
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      CHECK(r2.cells[i].t_c == r.cells[i].t_c);
      CHECK(std::memcmp(&r2.cells[i].final_record, &r.cells[i].final_record,
                        sizeof(DiagnosticsRecord)) == 0);
    }
  }

  SUBCASE("persisted cells write diagnostics and a readable final snapshot") {
    ExperimentSpec p = spec;
    p.persist = true;
    p.base.output_dir = (std::filesystem::temp_directory_path() / "dampns_test_sweep").string();
    std::filesystem::remove_all(p.base.output_dir);
    p.base.run_id = "grid";
    const SweepResult rp = run_steady_state_experiment(p);
    for (const auto& c : rp.cells) {
      REQUIRE_FALSE(c.snapshot_id.empty());
      const Snapshot s = read_snapshot(c.snapshot_id);
      CHECK(s.state.t == c.t_final);
      CHECK(s.header.alpha == c.alpha);
      CHECK(std::filesystem::exists(std::filesystem::path(c.snapshot_id).parent_path() /
                                    "diagnostics.csv"));
    }
  }
}

TEST_CASE("initial-condition independence") {
  ExperimentSpec spec;
  spec.base = small_config(0.1, 0.5, 1.0);
  spec.steady_tol = 1e-3;
  spec.max_T = 60.0;

  SUBCASE("identical initial conditions") {
    const auto r = run_initial_condition_independence(spec, ShearInit{1.0}, ShearInit{1.0});
    CHECK(r.conclusive);
    CHECK(r.distance <= 1e-12);
    CHECK(r.independent);
  }
  SUBCASE("f = 0: different data both reach zero") {
    const auto r = run_initial_condition_independence(spec, ZeroInit{}, RandomInit{3, 5.0});
    CHECK(r.conclusive);
    CHECK(r.independent);
    CHECK(r.a.t_final == r.b.t_final);
  }
}

TEST_CASE("trajectory separation") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kTrajectorySeparation;
  spec.base = small_config(0.05, 0.5, 4.0);
  spec.base.initial = RandomInit{4, 5.0};
  spec.base.forcing = CylinderForcing::box_centered(2 * kPi);

  SUBCASE("outside the uniqueness regime is a precondition error") {
    ExperimentSpec bad = spec;
    bad.base.beta = 2.0;
    CHECK_THROWS_AS(run_trajectory_separation(bad), std::invalid_argument);
    bad.base.beta = 3.0;  // 4 alpha mu = 0.1
    CHECK_THROWS_AS(run_trajectory_separation(bad), std::invalid_argument);
  }

  SUBCASE("ratio test and exact start") {
    const SweepResult r = run_experiment(spec);
    REQUIRE(r.separations.size() == 3);
    for (const auto& s : r.separations) {
      CHECK(s.distance.front() == doctest::Approx(s.delta).epsilon(1e-12));
      CHECK(s.t.back() == doctest::Approx(1.0));
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        CHECK(s.distance[i] <= s.delta * std::exp(r.fitted_rate * s.t[i]) * (1 + 1e-12));
      }
    }
    CHECK(r.ratio_span < 2.0);
    CHECK(r.separation_pass);
  }

  SUBCASE("boundary case beta = 3, 4 alpha mu = 1") {
    ExperimentSpec b = spec;
    b.base.beta = 3.0;
    b.base.mu = 0.5;
    b.base.alpha = 0.5;
    const SweepResult r = run_trajectory_separation(b);
    CHECK(r.separation_pass);
  }
}

TEST_CASE("experiment spec validation") {
  ExperimentSpec spec;
  spec.base = small_config(0.1, 0.5, 1.0);
  CHECK_NOTHROW(spec.validate());
  spec.alphas = {0.2, -1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.alphas = {};
  spec.betas = {0.5};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.betas = {};
  spec.kind = ExperimentKind::kTrajectorySeparation;
  spec.deltas = {1e-3, 0.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK(cell_name(0.2, 4.0) == "a0.2_b4");
}
