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

#include "dampns/estimates.hpp"
#include "dampns/initial_condition.hpp"
#include "doctest.h"

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

std::vector<DiagnosticsRecord> run(const Physics& ph, SpectralVelocity u0, double T,
                                   double dt, std::int64_t stride) {
  std::vector<DiagnosticsRecord> recs;
  std::vector<Observer> obs{make_recorder(recs, ph, stride)};
  integrate(SolverState{0.0, std::move(u0)}, T, fixed(dt), ph, obs);
  return recs;
}

// Shear decay, beta = 1, f = 0, L = 2 pi: E(t) = E0 exp(-2 (mu + alpha) t).
struct ShearDecay {
  explicit ShearDecay(double amplitude = 3.0, double T = 4.0)
      : recs(run(physics, make_initial_condition(ShearInit{amplitude}, grid), T, 0.01, 5)) {}

  WaveGrid grid{16, 2 * kPi};
  double mu = 0.1, alpha = 0.2;
  Physics physics = make_physics(grid, mu, alpha, 1.0);
  std::vector<DiagnosticsRecord> recs;
};

}  // namespace

TEST_CASE("regime predicates") {
  CHECK(in_regime(Regime::kUniqueness, 0.1, 0.5, 3.5));
  CHECK(in_regime(Regime::kUniqueness, 0.5, 0.5, 3.0));   // 4 alpha mu = 1
  CHECK_FALSE(in_regime(Regime::kRegularity, 0.5, 0.5, 3.0));
  CHECK(in_regime(Regime::kRegularity, 0.6, 0.5, 3.0));   // 4 alpha mu = 1.2
  CHECK_FALSE(in_regime(Regime::kUniqueness, 0.1, 0.5, 3.0));
  CHECK_FALSE(in_regime(Regime::kRegularity, 0.1, 0.5, 5.0));
  CHECK(in_regime(Regime::kUniqueness, 0.1, 0.5, 5.0));
  CHECK_FALSE(in_regime(Regime::kUniqueness, 1.0, 1.0, 2.0));
}

TEST_CASE("check_decay_bound") {
  SUBCASE("shear decay clears the bound with positive margin for t > 0") {
    ShearDecay sd;
    const auto rep = check_decay_bound(sd.recs, sd.recs.front().E, sd.mu,
                                       sd.grid.lambda1(), 0.0, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.margin.front() == 0.0);
    for (std::size_t i = 1; i < rep.margin.size(); ++i) CHECK(rep.margin[i] > 0.0);
    // margin matches the analytic comparison e^{-mu t} - e^{-2(mu+alpha)t}
    const double t = rep.checked_at.back();
    const double e0 = sd.recs.front().E;
    const double analytic = e0 * (std::exp(-sd.mu * t) - std::exp(-2 * (sd.mu + sd.alpha) * t));
    CHECK(rep.margin.back() == doctest::Approx(analytic).epsilon(1e-5));
  }

  SUBCASE("E0 below the forcing floor: margin at t = 0 equals the floor") {
    DiagnosticsRecord r;
    r.E = 0.5;
    const double f2 = 3.0, mu = 0.2, l1 = 1.0;
    const auto rep = check_decay_bound(std::span(&r, 1), 0.5, mu, l1, f2, 1e-8);
    CHECK(rep.margin.front() == doctest::Approx(f2 / (mu * mu)));
    CHECK(rep.pass);
  }

  SUBCASE("a violating trajectory fails and the margin shows by how much") {
    std::vector<DiagnosticsRecord> recs(2);
    recs[0].E = 1.0;
    recs[1].t = 1.0;
    recs[1].E = 1.0;  // no decay at all
    const auto rep = check_decay_bound(recs, 1.0, 1.0, 1.0, 0.0, 1e-8);
    CHECK_FALSE(rep.pass);
    CHECK(rep.min_margin() == doctest::Approx(std::exp(-1.0) - 1.0));
  }

  SUBCASE("u0 = 0 under forcing stays below |f|^2/(mu l1)^2") {
    const WaveGrid g(16, 2 * kPi);
    const auto ph = make_physics(g, 0.2, 0.5, 3.0, CylinderForcing::box_centered(2 * kPi));
    const auto recs = run(ph, SpectralVelocity(g), 2.0, 0.02, 5);
    const auto rep =
        check_decay_bound(recs, 0.0, 0.2, g.lambda1(), ph.forcing->norm_sq(), 1e-8);
    CHECK(rep.pass);
  }
}

TEST_CASE("check_integral_bound") {
  ShearDecay sd;
  const double l1 = sd.grid.lambda1();

  SUBCASE("s == t") {
    const auto rep = check_integral_bound(sd.recs, 1.0, 1.0, sd.mu, sd.alpha, l1, 0.0);
    CHECK(rep.pass);
    CHECK(rep.margin.size() == 1);
    CHECK(rep.margin.front() == sd.recs.front().E);
  }

  SUBCASE("closed form for the shear decay") {
    // V2 = Lbp = E: lhs = (mu + 2 alpha) E0 (1 - e^{-2cT}) / (2c), c = mu + alpha
    const double T = sd.recs.back().t;
    const auto rep = check_integral_bound(sd.recs, 0.0, T, sd.mu, sd.alpha, l1, 0.0);
    const double c = sd.mu + sd.alpha;
    const double e0 = sd.recs.front().E;
    const double lhs = (sd.mu + 2 * sd.alpha) * e0 * (1 - std::exp(-2 * c * T)) / (2 * c);
    CHECK(*rep.stat("lhs") == doctest::Approx(lhs).epsilon(1e-4));
    CHECK(rep.pass);
    CHECK(rep.min_margin() > 0.0);
  }

  SUBCASE("interval outside the records is rejected") {
    CHECK_THROWS_AS(check_integral_bound(sd.recs, 0.0, 100.0, sd.mu, sd.alpha, l1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_integral_bound(sd.recs, 2.0, 1.0, sd.mu, sd.alpha, l1, 0.0),
                    std::invalid_argument);
  }

  SUBCASE("sub-interval [T/2, T]") {
    const double T = sd.recs.back().t;
    const auto rep = check_integral_bound(sd.recs, T / 2, T, sd.mu, sd.alpha, l1, 0.0);
    CHECK(rep.pass);
    CHECK(rep.checked_at.front() == T / 2);
  }
}

TEST_CASE("check_absorbing_ball") {
  SUBCASE("already inside: entry at t = 0") {
    std::vector<DiagnosticsRecord> recs(3);
    for (int i = 0; i < 3; ++i) {
      recs[i].t = i;
      recs[i].E = 0.5;
    }
    const auto rep = check_absorbing_ball(recs, 0.1, 1.0, 0.0, 1.0);
    CHECK(rep.pass);
    CHECK(*rep.stat("entry_time") == 0.0);
  }

  SUBCASE("f = 0 shear decay enters no later than the analytic time") {
    ShearDecay sd(0.3, 8.0);
    const double e0 = sd.recs.front().E;
    const auto rep = check_absorbing_ball(sd.recs, sd.mu, sd.grid.lambda1(), 0.0, 1.0);
    REQUIRE(rep.pass);
    const double analytic = std::log(e0) / (2 * (sd.mu + sd.alpha));
    const double stride = sd.recs[1].t - sd.recs[0].t;
    CHECK(*rep.stat("entry_time") <= analytic + stride + 1e-12);
    CHECK(*rep.stat("entry_time") >= analytic - 1e-9);
    CHECK(analytic < *rep.stat("predicted_entry_bound"));
  }

  SUBCASE("never entering fails") {
    std::vector<DiagnosticsRecord> recs(2);
    recs[0].E = recs[1].E = 50.0;
    recs[1].t = 1.0;
    const auto rep = check_absorbing_ball(recs, 0.1, 1.0, 0.0, 1.0);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.note.empty());
  }

  SUBCASE("re-exit is flagged") {
    std::vector<DiagnosticsRecord> recs(3);
    recs[0].E = 0.5;
    recs[1].t = 1.0;
    recs[1].E = 2.0;
    recs[2].t = 2.0;
    recs[2].E = 0.5;
    CHECK_FALSE(check_absorbing_ball(recs, 0.1, 1.0, 0.0, 1.0).pass);
  }
}

TEST_CASE("check_norm_boundedness") {
  SUBCASE("regime violation is a precondition error") {
    std::vector<DiagnosticsRecord> recs(3);
    recs[2].t = 2.0;
    CHECK_THROWS_AS(check_norm_boundedness(recs, 0.5, 0.1, 0.5, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_norm_boundedness(recs, 5.0, 0.1, 0.5, 4.0),
                    std::invalid_argument);
  }

  SUBCASE("stationary tail has zero envelope slope") {
    std::vector<DiagnosticsRecord> recs(20);
    for (int i = 0; i < 20; ++i) {
      recs[i].t = i;
      recs[i].V2 = i < 3 ? 5.0 - i : 2.0;
      recs[i].Lbp = 1.0;
      recs[i].A2 = 7.0;
    }
    const auto rep = check_norm_boundedness(recs, 1.0, 0.1, 0.5, 4.0);
    CHECK(rep.pass);
    CHECK(*rep.stat("log_envelope_slope_V2") == 0.0);
    CHECK(*rep.stat("sup_V2") == 4.0);
  }

  SUBCASE("growth over the final half fails") {
    std::vector<DiagnosticsRecord> recs(20);
    for (int i = 0; i < 20; ++i) {
      recs[i].t = i;
      recs[i].V2 = recs[i].Lbp = recs[i].A2 = std::exp(0.1 * i);
    }
    CHECK_FALSE(check_norm_boundedness(recs, 0.0, 0.6, 0.5, 3.0).pass);
  }
}

TEST_CASE("damping positivity, energy envelope and reproducibility") {
  const WaveGrid g(8, 2 * kPi);
  const auto ph = make_physics(g, 0.1, 0.5, 3.0, CylinderForcing::box_centered(2 * kPi));
  const auto recs = run(ph, make_initial_condition(RandomInit{2, 20.0}, g), 2.0, 0.01, 4);
  const auto pos = check_damping_positivity(recs);
  CHECK(pos.pass);
  CHECK(pos.tolerance == 0.0);

  const double f2 = ph.forcing->norm_sq();
  const auto env = check_energy_envelope(recs, 0.1, g.lambda1(), f2, 1e-8 * recs.front().E);
  CHECK(env.pass);

  const auto a = check_decay_bound(recs, recs.front().E, 0.1, g.lambda1(), f2, 1e-8);
  const auto b = check_decay_bound(recs, recs.front().E, 0.1, g.lambda1(), f2, 1e-8);
  CHECK(a.margin == b.margin);
  CHECK(a.pass == b.pass);
  CHECK(to_string(a.id) == "decay_EstWeak1");
}
