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
#include <numbers>

#include "dampns/diagnostics.hpp"
#include "dampns/initial_condition.hpp"
#include "dampns/spectral_ops.hpp"
#include "doctest.h"
#include "random_fields.hpp"

using namespace dampns;

namespace {

constexpr double kPi = std::numbers::pi;

Physics make_physics(const WaveGrid& g, double mu, double alpha, double beta,
                     const ForcingSpec& f = ZeroForcing{}) {
  return Physics{mu, alpha, beta, std::make_shared<ForcingField>(f, g)};
}

SchemeConfig fixed(double dt) {
  SchemeConfig s;
  s.adaptive = false;
  s.dt = dt;
  s.dt_min = dt;
  s.dt_max = dt;
  return s;
}

}  // namespace

TEST_CASE("record: zero field") {
  const WaveGrid g(8, 2 * kPi);
  const auto ph = make_physics(g, 0.1, 0.5, 3.0, CylinderForcing::box_centered(2 * kPi));
  const DiagnosticsRecord r = record(SpectralVelocity(g), 2.5, ph);
  CHECK(r.t == 2.5);
  CHECK(r.E == 0.0);
  CHECK(r.V2 == 0.0);
  CHECK(r.Lbp == 0.0);
  CHECK(r.A2 == 0.0);
  CHECK(r.P_f == 0.0);
  CHECK(r.P_damp == 0.0);
  CHECK(r.umax == 0.0);
}

TEST_CASE("record: shear mode closed forms") {
  const WaveGrid g(16, 2 * kPi);
  const double a = 1.3, alpha = 0.5;
  const auto ph = make_physics(g, 0.1, alpha, 3.0);
  const DiagnosticsRecord r = record(make_initial_condition(ShearInit{a}, g), 0.0, ph);
  const double vol = std::pow(2 * kPi, 3);

  CHECK(r.E == doctest::Approx(a * a * vol / 2).epsilon(1e-14));
  CHECK(r.V2 == doctest::Approx(r.E).epsilon(1e-14));
  CHECK(r.A2 == doctest::Approx(r.E).epsilon(1e-14));

  // Independent oracle: fine midpoint quadrature of sin^4 over one period,
  // against the closed form 3*pi/4.
  const int fine = 20000;
  double s4 = 0.0;
  for (int i = 0; i < fine; ++i) {
    const double y = (i + 0.5) * 2 * kPi / fine;
    s4 += std::pow(std::sin(y), 4);
  }
  s4 *= 2 * kPi / fine;
  CHECK(s4 == doctest::Approx(3 * kPi / 4).epsilon(1e-12));
  const double lbp_exact = std::pow(a, 4) * (2 * kPi) * (2 * kPi) * s4;
  CHECK(lbp_exact == doctest::Approx(vol * 3.0 / 8.0 * std::pow(a, 4)).epsilon(1e-12));
  CHECK(r.Lbp == doctest::Approx(lbp_exact).epsilon(1e-12));
  CHECK(r.P_damp == doctest::Approx(alpha * lbp_exact).epsilon(1e-12));
  CHECK(r.umax == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("record: single-mode ratio and norm chains") {
  const WaveGrid g(16, 3.0);
  const auto ph = make_physics(g, 0.1, 0.5, 1.0);

  SpectralVector v(g);
  const auto q = g.spectral_index(g.axis_index(1), g.axis_index(-2), 1);
  v.comp[0][q] = Complex(0.3, 0.1);
  v.comp[1][q] = Complex(-0.2, 0.4);
  v.comp[2][q] = Complex(0.5, 0.0);
  const DiagnosticsRecord r = record(leray_project(v), 0.0, ph);
  const double k2 = g.lambda1() * (1 + 4 + 1);
  CHECK(r.V2 / r.E == doctest::Approx(k2).epsilon(1e-14));
  CHECK(r.A2 / r.V2 == doctest::Approx(k2).epsilon(1e-14));

  for (std::uint64_t seed = 61; seed <= 65; ++seed) {
    const SpectralVelocity u = dampns::testing::random_velocity(seed, g);
    const DiagnosticsRecord rr = record(u, 0.0, ph);
    CHECK(rr.V2 >= g.lambda1() * rr.E);
    CHECK(rr.A2 >= g.lambda1() * rr.V2);
    // beta = 1: Lbp is the squared L2 norm
    CHECK(rr.Lbp == doctest::Approx(rr.E).epsilon(1e-12));
  }
}

TEST_CASE("fill_energy_rate is exact on quadratics") {
  std::vector<DiagnosticsRecord> recs(5);
  for (int i = 0; i < 5; ++i) {
    recs[i].t = 0.5 * i;
    recs[i].E = 3.0 + 2.0 * recs[i].t - 0.7 * recs[i].t * recs[i].t;
  }
  fill_energy_rate(recs);
  for (const auto& r : recs) {
    CHECK(r.dEdt == doctest::Approx(2.0 - 1.4 * r.t).epsilon(1e-12));
  }
}

TEST_CASE("energy_balance_residual") {
  SUBCASE("shear decay, beta = 1, f = 0") {
    const WaveGrid g(16, 2 * kPi);
    const double mu = 0.1, alpha = 0.2, T = 5.0;
    const auto ph = make_physics(g, mu, alpha, 1.0);
    std::vector<DiagnosticsRecord> recs;
    std::vector<Observer> obs{make_recorder(recs, ph, 1)};
    integrate(SolverState{0.0, make_initial_condition(ShearInit{1.0}, g)}, T, fixed(1e-3),
              ph, obs);
    const auto r = energy_balance_residual(recs, mu);
    double worst = 0.0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    CHECK(worst <= 1e-6 * recs.front().E / T);
  }

  SUBCASE("steady balance: a state with dE/dt = 0 reduces to mu V2 + P_damp - P_f") {
    std::vector<DiagnosticsRecord> recs(3);
    for (int i = 0; i < 3; ++i) {
      recs[i].t = i * 0.1;
      recs[i].E = 4.0;
      recs[i].V2 = 2.0;
      recs[i].P_damp = 0.5;
      recs[i].P_f = 0.7;
    }
    for (double x : energy_balance_residual(recs, 0.1)) {
      CHECK(x == doctest::Approx(0.1 * 2.0 + 0.5 - 0.7));
    }
  }

  SUBCASE("non-uniform stride and short windows are rejected") {
    std::vector<DiagnosticsRecord> recs(3);
    recs[1].t = 0.1;
    recs[2].t = 0.3;
    CHECK_THROWS_AS(energy_balance_residual(recs, 0.1), std::invalid_argument);
    recs.resize(2);
    CHECK_THROWS_AS(energy_balance_residual(recs, 0.1), std::invalid_argument);
  }

  SUBCASE("second-order convergence on a forced random run") {
    const WaveGrid g(16, 2 * kPi);
    const double mu = 0.05;
    const auto ph = make_physics(g, mu, 0.5, 3.0, CylinderForcing::box_centered(2 * kPi));
    const SolverState s0{0.0, make_initial_condition(RandomInit{9, 10.0}, g)};
    auto worst_residual = [&](double dt) {
      std::vector<DiagnosticsRecord> recs;
      std::vector<Observer> obs{make_recorder(recs, ph, 5)};
      integrate(s0, 1.0, fixed(dt), ph, obs);
      double w = 0.0;
      for (double x : energy_balance_residual(recs, mu)) w = std::max(w, std::abs(x));
      return w;
    };
    const double ratio = worst_residual(0.01) / worst_residual(0.005);
    MESSAGE("residual ratio " << ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.6);
  }
}

TEST_CASE("time_derivative_proxy") {
  const WaveGrid g(8, 2 * kPi);
  const SpectralVelocity a = make_initial_condition(ShearInit{1.0}, g);
  const SpectralVelocity b = make_initial_condition(ShearInit{1.5}, g);
  const double expected = 0.5 * std::sqrt(std::pow(2 * kPi, 3) / 2) / 0.25;
  CHECK(time_derivative_proxy(a, b, 0.25) == doctest::Approx(expected).epsilon(1e-14));
}
