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

#include "dampns/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dampns/spectral_ops.hpp"

namespace dampns {

std::string to_string(Method m) {
  return m == Method::kIfRk2 ? "IF-RK2" : "IF-RK4";
}

int order(Method m) { return m == Method::kIfRk2 ? 2 : 4; }

void SchemeConfig::validate() const {
  if (!(dt_min > 0.0) || !(dt_min <= dt_max)) {
    throw std::invalid_argument("scheme: need 0 < dt_min <= dt_max");
  }
  if (!(dt >= dt_min && dt <= dt_max)) {
    throw std::invalid_argument("scheme: dt must lie in [dt_min, dt_max]");
  }
  if (!(cfl_target > 0.0 && cfl_target <= 1.0)) {
    throw std::invalid_argument("scheme: cfl_target must lie in (0, 1]");
  }
}

void Physics::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("physics: mu must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("physics: alpha must be > 0");
  if (!(beta >= 1.0)) throw std::invalid_argument("physics: beta must be >= 1");
  if (!forcing) throw std::invalid_argument("physics: forcing not set");
}

SpectralVelocity explicit_rhs(const SpectralVelocity& u, const Physics& physics) {
  SpectralVelocity rhs = advection_and_damping(u, physics.alpha, physics.beta);
  if (!physics.forcing->is_zero()) rhs += physics.f_hat();
  return rhs;
}

namespace {

// exp(-mu |k|^2 h) for every stored mode.
std::vector<double> viscous_factor(const WaveGrid& g, double mu, double h) {
  std::vector<double> f(g.spectral_size());
  const double k0sq = g.k0() * g.k0();
  for (int i = 0; i < g.n(); ++i) {
    const double mx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const double my = g.wavenumber(j);
      for (int l = 0; l < g.n_half(); ++l) {
        const double k2 = k0sq * (mx * mx + my * my + double(l) * l);
        f[g.spectral_index(i, j, l)] = std::exp(-mu * k2 * h);
      }
    }
  }
  return f;
}

void guard(const SpectralVelocity& u, double t) {
  const double m = u.max_abs_coeff();
  if (!std::isfinite(m)) throw BlowUpError(t, "non-finite velocity coefficients");
  if (m > kBlowUpThreshold) {
    throw BlowUpError(t, "velocity exceeded blow-up guard (reduce dt)");
  }
}

SpectralVelocity rk2(const SpectralVelocity& u, const Physics& ph, double dt) {
  const auto e = viscous_factor(u.grid(), ph.mu, dt);
  const SpectralVelocity k1 = explicit_rhs(u, ph);

  SpectralVelocity stage = u;
  stage.axpy(dt, k1).scale_modes(e);
  const SpectralVelocity k2 = explicit_rhs(stage, ph);

  SpectralVelocity next = u;
  next.axpy(0.5 * dt, k1).scale_modes(e).axpy(0.5 * dt, k2);
  return next;
}

SpectralVelocity rk4(const SpectralVelocity& u, const Physics& ph, double dt) {
  const auto e = viscous_factor(u.grid(), ph.mu, dt);
  const auto eh = viscous_factor(u.grid(), ph.mu, 0.5 * dt);

  const SpectralVelocity k1 = explicit_rhs(u, ph);

  SpectralVelocity a = u;
  a.axpy(0.5 * dt, k1).scale_modes(eh);
  const SpectralVelocity k2 = explicit_rhs(a, ph);

  SpectralVelocity eh_u = u;
  eh_u.scale_modes(eh);
  SpectralVelocity b = eh_u;
  b.axpy(0.5 * dt, k2);
  const SpectralVelocity k3 = explicit_rhs(b, ph);

  SpectralVelocity c = eh_u;
  c.axpy(dt, k3).scale_modes(eh);
  const SpectralVelocity k4 = explicit_rhs(c, ph);

  // u+ = E u + dt/6 (E k1 + 2 E_h (k2 + k3) + k4)
  SpectralVelocity mid = k2;
  mid += k3;
  mid.scale_modes(eh);
  SpectralVelocity next = u;
  next.axpy(dt / 6.0, k1).scale_modes(e);
  next.axpy(dt / 3.0, mid).axpy(dt / 6.0, k4);
  return next;
}

}  // namespace

SolverState step(const SolverState& state, const SchemeConfig& scheme,
                 const Physics& physics, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  SpectralVelocity next = scheme.method == Method::kIfRk2
                              ? rk2(state.u, physics, dt)
                              : rk4(state.u, physics, dt);
  guard(next, state.t + dt);
  // Re-establish the invariants instead of trusting the update to keep them.
  return SolverState{state.t + dt, leray_project(next.raw()),
                     state.step_count + 1, dt};
}

SolverState step(const SolverState& state, const SchemeConfig& scheme,
                 const Physics& physics) {
  const double dt = scheme.adaptive ? adapt_dt(state, scheme, physics) : scheme.dt;
  return step(state, scheme, physics, dt);
}

double adapt_dt(const SolverState& state, const SchemeConfig& scheme,
                const Physics& physics) {
  const double umax = to_physical(state.u).max_speed();
  if (!std::isfinite(umax)) {
    throw BlowUpError(state.t, "adapt_dt: non-finite velocity");
  }
  double dt = scheme.dt_max;
  if (umax > 0.0) {
    const double dx = state.u.grid().dx();
    dt = std::min(dt, scheme.cfl_target * dx / umax);
    const double stiffness = physics.alpha * std::pow(umax, physics.beta - 1.0);
    dt = std::min(dt, scheme.cfl_target / stiffness);
  }
  return std::clamp(dt, scheme.dt_min, scheme.dt_max);
}

SolverState integrate(SolverState state, double until,
                      const SchemeConfig& scheme, const Physics& physics,
                      std::span<Observer> observers, bool observe_initial) {
  if (until < state.t) {
    throw std::invalid_argument("integrate: until precedes the current time");
  }
  for (const auto& o : observers) {
    if (o.stride < 1) throw std::invalid_argument("observer stride must be >= 1");
  }

  auto notify = [&](const SolverState& s) {
    bool stop = false;
    for (auto& o : observers) {
      if (s.step_count % o.stride == 0 &&
          o.callback(s) == ObserverAction::kStop) {
        stop = true;
      }
    }
    return stop;
  };

  if (observe_initial && notify(state)) return state;

  while (state.t < until) {
    double dt = scheme.adaptive ? adapt_dt(state, scheme, physics) : scheme.dt;
    const double remaining = until - state.t;
    bool last = false;
    if (remaining <= dt * (1.0 + 1e-9)) {
      dt = remaining;
      last = true;
    }
    state = step(state, scheme, physics, dt);
    if (last) state.t = until;
    if (notify(state)) break;
  }
  return state;
}

}  // namespace dampns
