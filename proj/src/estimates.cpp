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

#include "dampns/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dampns {

std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::kDecay: return "decay_EstWeak1";
    case BoundId::kIntegral: return "integral_EstWeak2";
    case BoundId::kAbsorbingBall: return "absorbing_ball";
    case BoundId::kDampingPositivity: return "damping_positivity";
    case BoundId::kNormBoundedness: return "norm_boundedness";
    case BoundId::kEnergyEnvelope: return "energy_envelope";
  }
  return "unknown";
}

double BoundReport::min_margin() const {
  if (margin.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(margin.begin(), margin.end());
}

std::optional<double> BoundReport::stat(const std::string& name) const {
  for (const auto& [k, v] : stats) {
    if (k == name) return v;
  }
  return std::nullopt;
}

bool in_regime(Regime regime, double mu, double alpha, double beta) {
  const double product = 4.0 * alpha * mu;
  switch (regime) {
    case Regime::kUniqueness:
      return beta > 3.0 || (beta == 3.0 && product >= 1.0);
    case Regime::kRegularity:
      return (beta > 3.0 && beta < 5.0) || (beta == 3.0 && product > 1.0);
  }
  return false;
}

std::string describe(Regime regime) {
  return regime == Regime::kUniqueness
             ? "beta > 3, or beta = 3 with 4*alpha*mu >= 1"
             : "beta in (3,5), or beta = 3 with 4*alpha*mu > 1";
}

double forcing_floor(double mu, double lambda1, double f_norm_sq) {
  const double ml = mu * lambda1;
  return 1.0 + f_norm_sq / (ml * ml);
}

double decay_tolerance(double e0, double dt, int order, double c_scheme) {
  return std::max(1e-8, c_scheme * std::pow(dt, order) * e0);
}

namespace {

void finish(BoundReport& r) { r.pass = r.min_margin() >= -r.tolerance; }

}  // namespace

BoundReport check_decay_bound(std::span<const DiagnosticsRecord> records, double e0,
                              double mu, double lambda1, double f_norm_sq,
                              double tolerance) {
  BoundReport r;
  r.id = BoundId::kDecay;
  r.tolerance = tolerance;
  if (records.empty()) {
    r.note = "no records";
    return r;
  }
  const double ml = mu * lambda1;
  const double floor = f_norm_sq / (ml * ml);
  const double t0 = records.front().t;
  for (const auto& rec : records) {
    const double bound = std::exp(-ml * (rec.t - t0)) * e0 + floor;
    r.checked_at.push_back(rec.t);
    r.margin.push_back(bound - rec.E);
  }
  finish(r);
  return r;
}

BoundReport check_integral_bound(std::span<const DiagnosticsRecord> records, double s,
                                 double t, double mu, double alpha, double lambda1,
                                 double f_norm_sq) {
  if (records.empty() || s > t) {
    throw std::invalid_argument("check_integral_bound: need records and s <= t");
  }
  const double eps = 1e-9 * std::max(1.0, std::abs(records.back().t));
  if (s < records.front().t - eps || t > records.back().t + eps) {
    throw std::invalid_argument("check_integral_bound: [s, t] not covered by records");
  }

  BoundReport r;
  r.id = BoundId::kIntegral;
  const double ml = mu * lambda1;
  const double e0 = records.front().E;
  auto rhs = [&](double tau) {
    return e0 + f_norm_sq / (ml * ml) + f_norm_sq * (tau - s) / ml;
  };
  auto integrand = [&](const DiagnosticsRecord& rec) {
    return mu * rec.V2 + 2.0 * alpha * rec.Lbp;
  };
  // Linear interpolation of the integrand at an arbitrary covered time.
  auto integrand_at = [&](double tau) {
    auto it = std::lower_bound(records.begin(), records.end(), tau,
                               [](const DiagnosticsRecord& a, double x) { return a.t < x; });
    if (it == records.end()) return integrand(records.back());
    if (it == records.begin() || it->t == tau) return integrand(*it);
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (tau - lo.t) / (hi.t - lo.t);
    return (1 - w) * integrand(lo) + w * integrand(hi);
  };

  std::vector<double> ts{s};
  std::vector<double> ys{integrand_at(s)};
  for (const auto& rec : records) {
    if (rec.t > s && rec.t < t) {
      ts.push_back(rec.t);
      ys.push_back(integrand(rec));
    }
  }
  if (t > s) {
    ts.push_back(t);
    ys.push_back(integrand_at(t));
  }

  double running = 0.0;
  r.checked_at.push_back(s);
  r.margin.push_back(rhs(s));
  for (std::size_t i = 1; i < ts.size(); ++i) {
    running += 0.5 * (ts[i] - ts[i - 1]) * (ys[i] + ys[i - 1]);
    r.checked_at.push_back(ts[i]);
    r.margin.push_back(rhs(ts[i]) - running);
  }

  double coarse = 0.0;
  std::size_t prev = 0;
  for (std::size_t i = 2; i < ts.size(); i += 2) {
    coarse += 0.5 * (ts[i] - ts[prev]) * (ys[i] + ys[prev]);
    prev = i;
  }
  if (prev + 1 < ts.size()) {
    const std::size_t last = ts.size() - 1;
    coarse += 0.5 * (ts[last] - ts[prev]) * (ys[last] + ys[prev]);
  }
  r.tolerance = std::max(1e-8, std::abs(running - coarse));
  r.stats = {{"lhs", running}, {"rhs", rhs(t)}};
  finish(r);
  return r;
}

BoundReport check_absorbing_ball(std::span<const DiagnosticsRecord> records, double mu,
                                 double lambda1, double f_norm_sq, double entry_tol,
                                 double time_slack, double tolerance) {
  BoundReport r;
  r.id = BoundId::kAbsorbingBall;
  r.tolerance = tolerance;
  if (records.empty()) {
    r.note = "no records";
    return r;
  }
  const double radius_sq = forcing_floor(mu, lambda1, f_norm_sq);
  const double t0 = records.front().t;
  const double e0 = records.front().E;
  const double predicted =
      std::max(0.0, std::log(e0 / entry_tol)) / (mu * lambda1) + time_slack;
  r.stats.emplace_back("radius_sq", radius_sq);
  r.stats.emplace_back("predicted_entry_bound", predicted);

  std::size_t entry = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].E <= radius_sq) {
      entry = i;
      break;
    }
  }
  if (entry == records.size()) {
    const double span = records.back().t - t0;
    r.note = span < predicted ? "run ended before entry and before the predicted entry time"
                              : "trajectory never entered the absorbing ball";
    r.pass = false;
    return r;
  }
  const double t_star = records[entry].t - t0;
  r.stats.emplace_back("entry_time", t_star);
  for (std::size_t i = entry; i < records.size(); ++i) {
    r.checked_at.push_back(records[i].t);
    r.margin.push_back(radius_sq - records[i].E);
  }
  finish(r);
  if (t_star > predicted) {
    r.pass = false;
    r.note = "entry later than log(E0/entry_tol)/(mu*lambda1) + slack";
  }
  return r;
}

BoundReport check_damping_positivity(std::span<const DiagnosticsRecord> records) {
  BoundReport r;
  r.id = BoundId::kDampingPositivity;
  r.tolerance = 0.0;
  for (const auto& rec : records) {
    r.checked_at.push_back(rec.t);
    r.margin.push_back(rec.P_damp);
  }
  finish(r);
  return r;
}

BoundReport check_norm_boundedness(std::span<const DiagnosticsRecord> records,
                                   double burn_in, double mu, double alpha,
                                   double beta, double slope_tol) {
  if (!in_regime(Regime::kRegularity, mu, alpha, beta)) {
    throw std::invalid_argument("check_norm_boundedness: parameters outside " +
                                describe(Regime::kRegularity));
  }
  if (records.empty() || records.back().t <= burn_in) {
    throw std::invalid_argument("check_norm_boundedness: run does not extend past burn_in");
  }
  BoundReport r;
  r.id = BoundId::kNormBoundedness;
  r.tolerance = slope_tol;

  const double t_end = records.back().t;
  const double t_mid = burn_in + 0.5 * (t_end - burn_in);
  const char* names[] = {"V2", "Lbp", "A2"};
  bool finite = true;
  for (int q = 0; q < 3; ++q) {
    auto value = [q](const DiagnosticsRecord& rec) {
      return q == 0 ? rec.V2 : (q == 1 ? rec.Lbp : rec.A2);
    };
    double sup = 0.0, sup_mid = 0.0;
    for (const auto& rec : records) {
      if (rec.t < burn_in) continue;
      sup = std::max(sup, value(rec));
      if (rec.t <= t_mid) sup_mid = sup;
    }
    finite = finite && std::isfinite(sup);
    double slope = 0.0;
    if (sup > 0.0 && sup_mid > 0.0 && t_end > t_mid) {
      slope = std::log(sup / sup_mid) / (t_end - t_mid);
    } else if (sup > 0.0) {
      // zero at mid-run but positive later: growth from rest
      slope = std::numeric_limits<double>::infinity();
    }
    r.stats.emplace_back(std::string("sup_") + names[q], sup);
    r.stats.emplace_back(std::string("log_envelope_slope_") + names[q], slope);
    r.checked_at.push_back(t_end);
    r.margin.push_back(-slope);
  }
  finish(r);
  if (!finite) {
    r.pass = false;
    r.note = "non-finite supremum";
  }
  return r;
}

BoundReport check_energy_envelope(std::span<const DiagnosticsRecord> records, double mu,
                                  double lambda1, double f_norm_sq, double tolerance) {
  BoundReport r;
  r.id = BoundId::kEnergyEnvelope;
  r.tolerance = tolerance;
  const double rate = f_norm_sq / (mu * lambda1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double j0 = records[i - 1].E - rate * records[i - 1].t;
    const double j1 = records[i].E - rate * records[i].t;
    r.checked_at.push_back(records[i].t);
    r.margin.push_back(j0 - j1);
  }
  finish(r);
  return r;
}

}  // namespace dampns
