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
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "dampns/fields.hpp"
#include "dampns/forcing.hpp"

namespace dampns {

enum class Method {
  kIfRk2,  ///< integrating-factor Heun, second order
  kIfRk4,  ///< integrating-factor classical RK4 (Lawson)
};

std::string to_string(Method m);
int order(Method m);

struct SchemeConfig {
  Method method = Method::kIfRk2;
  double dt = 1e-2;
  double cfl_target = 0.4;
  double dt_min = 1e-6;
  double dt_max = 0.1;
  bool adaptive = true;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// mu, alpha, beta and the forcing. The forcing is shared and immutable so
/// many solvers can reference one precomputed field.
struct Physics {
  double mu = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::shared_ptr<const ForcingField> forcing;

  void validate() const;
  const SpectralVelocity& f_hat() const { return forcing->spectral(); }
};

struct SolverState {
  double t = 0.0;
  SpectralVelocity u;
  std::int64_t step_count = 0;
  double last_dt = 0.0;
};

/// Raised when the solution leaves the representable range; carries the time
/// of the failing step.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, const std::string& what)
      : std::runtime_error(what + " at t = " + std::to_string(t)), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

inline constexpr double kBlowUpThreshold = 1e15;

/// Non-viscous part of du/dt: -P[(u.grad)u] - P[alpha|u|^(beta-1)u] + Pf.
SpectralVelocity explicit_rhs(const SpectralVelocity& u, const Physics& physics);

/// One step of size `dt`. The viscous factor exp(-mu|k|^2 dt) is applied
/// exactly per mode; the rest is explicit.
SolverState step(const SolverState& state, const SchemeConfig& scheme,
                 const Physics& physics, double dt);
/// One step with dt from adapt_dt (adaptive) or scheme.dt.
SolverState step(const SolverState& state, const SchemeConfig& scheme,
                 const Physics& physics);

/// clamp(min(cfl dx / max|u|, cfl / (alpha max|u|^(beta-1))), dt_min, dt_max).
/// A zero field returns dt_max.
double adapt_dt(const SolverState& state, const SchemeConfig& scheme,
                const Physics& physics);

enum class ObserverAction { kContinue, kStop };

struct Observer {
  std::int64_t stride = 1;  // in steps
  std::function<ObserverAction(const SolverState&)> callback;
};

/// Steps until `until`, shortening the last step to land on it exactly.
/// Observers fire when step_count is a multiple of their stride, and at the
/// initial state when `observe_initial` is set. Any observer returning kStop
/// ends the integration early.
SolverState integrate(SolverState state, double until,
                      const SchemeConfig& scheme, const Physics& physics,
                      std::span<Observer> observers = {},
                      bool observe_initial = true);

}  // namespace dampns
