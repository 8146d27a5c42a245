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

#include "dampns/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace dampns {

void RunConfig::validate() const {
  if (!(mu > 0.0)) throw ConfigError(0, "mu must be > 0 (kinematic viscosity)");
  if (!(alpha > 0.0)) throw ConfigError(0, "alpha must be > 0 (damping strength)");
  if (!(beta >= 1.0)) {
    throw ConfigError(0, "beta must be >= 1 (damping term alpha |u|^(beta-1) u)");
  }
  if (n < 4 || n % 2 != 0) throw ConfigError(0, "N must be an even integer >= 4");
  if (!(length > 0.0)) throw ConfigError(0, "L must be > 0");
  if (diag_stride < 1) throw ConfigError(0, "diag_stride must be >= 1");
  if (snapshot_stride < 0) throw ConfigError(0, "snapshot_stride must be >= 0");
  if (!(t_end >= 0.0)) throw ConfigError(0, "T_end must be >= 0");
  if (run_id.empty()) throw ConfigError(0, "run_id must not be empty");
  if (const auto* r = std::get_if<RandomInit>(&initial); r && r->energy < 0.0) {
    throw ConfigError(0, "initial energy must be >= 0");
  }
  try {
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

Physics RunConfig::make_physics() const {
  validate();
  return Physics{mu, alpha, beta, std::make_shared<ForcingField>(forcing, grid())};
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  std::string s = v;
  if (s == "2pi" || s == "2*pi") return 2.0 * std::numbers::pi;
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(line, key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& v, int line, const std::string& key) {
  std::int64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(line, key + ": expected true/false, got '" + v + "'");
}

Vec3 parse_vec3(const std::string& v, int line, const std::string& key) {
  Vec3 out{};
  std::stringstream ss(v);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i == 3) break;
    out[i++] = parse_double(trim(part), line, key);
  }
  if (i != 3 || std::getline(ss, part, ',')) {
    throw ConfigError(line, key + ": expected three comma-separated numbers");
  }
  return out;
}

int parse_axis(const std::string& v, int line) {
  if (v == "x" || v == "0") return 0;
  if (v == "y" || v == "1") return 1;
  if (v == "z" || v == "2") return 2;
  throw ConfigError(line, "axis: expected x, y or z");
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"physics", {"mu", "alpha", "beta"}},
      {"grid", {"N", "L"}},
      {"forcing", {"type", "center", "radius", "height", "axis", "g"}},
      {"scheme", {"method", "dt", "adaptive", "cfl_target", "dt_min", "dt_max"}},
      {"run",
       {"T_end", "diag_stride", "snapshot_stride", "output_dir", "run_id", "initial",
        "amplitude", "seed", "energy", "slope", "vector"}},
  };
  return keys;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!allowed_keys().contains(current)) {
        throw ConfigError(line_no, "unknown section [" + current + "]");
      }
      if (sections.contains(current)) {
        throw ConfigError(line_no, "duplicate section [" + current + "]");
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    if (current.empty()) throw ConfigError(line_no, "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!allowed_keys().at(current).contains(key)) {
      throw ConfigError(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
    if (value.empty()) throw ConfigError(line_no, key + ": missing value");
    auto& sec = sections[current];
    if (sec.contains(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    sec[key] = Entry{value, line_no};
  }

  auto find = [&](const std::string& s, const std::string& k) -> const Entry* {
    auto it = sections.find(s);
    if (it == sections.end()) return nullptr;
    auto jt = it->second.find(k);
    return jt == it->second.end() ? nullptr : &jt->second;
  };
  auto require = [&](const std::string& s, const std::string& k) -> const Entry& {
    const Entry* e = find(s, k);
    if (e == nullptr) throw ConfigError(0, "missing required key " + k + " in [" + s + "]");
    return *e;
  };
  auto number = [&](const std::string& s, const std::string& k, double fallback) {
    const Entry* e = find(s, k);
    return e ? parse_double(e->value, e->line, k) : fallback;
  };
  auto integer = [&](const std::string& s, const std::string& k, std::int64_t fallback) {
    const Entry* e = find(s, k);
    return e ? parse_int(e->value, e->line, k) : fallback;
  };
  // Range check that reports the line the value came from.
  auto check = [&](bool ok, const std::string& s, const std::string& k,
                   const std::string& message) {
    if (!ok) {
      const Entry* e = find(s, k);
      throw ConfigError(e ? e->line : 0, message);
    }
  };

  RunConfig c;
  {
    const auto& e = require("physics", "mu");
    c.mu = parse_double(e.value, e.line, "mu");
  }
  {
    const auto& e = require("physics", "alpha");
    c.alpha = parse_double(e.value, e.line, "alpha");
  }
  {
    const auto& e = require("physics", "beta");
    c.beta = parse_double(e.value, e.line, "beta");
  }
  check(c.mu > 0.0, "physics", "mu", "mu must be > 0 (kinematic viscosity)");
  check(c.alpha > 0.0, "physics", "alpha", "alpha must be > 0 (damping strength)");
  check(c.beta >= 1.0, "physics", "beta",
        "beta must be >= 1 (damping term alpha |u|^(beta-1) u)");
  {
    const auto& e = require("grid", "N");
    c.n = static_cast<int>(parse_int(e.value, e.line, "N"));
    check(c.n >= 4 && c.n % 2 == 0, "grid", "N", "N must be an even integer >= 4");
  }
  {
    const auto& e = require("grid", "L");
    c.length = parse_double(e.value, e.line, "L");
    check(c.length > 0.0, "grid", "L", "L must be > 0");
  }

  const Entry* ftype = find("forcing", "type");
  const std::string forcing_type = ftype ? ftype->value : "zero";
  if (forcing_type == "zero") {
    for (const auto& [k, e] : sections["forcing"]) {
      if (k != "type") throw ConfigError(e.line, k + " is only valid for cylinder forcing");
    }
    c.forcing = ZeroForcing{};
  } else if (forcing_type == "cylinder") {
    CylinderForcing cyl = CylinderForcing::box_centered(c.length);
    if (const Entry* e = find("forcing", "center")) cyl.center = parse_vec3(e->value, e->line, "center");
    cyl.radius = number("forcing", "radius", cyl.radius);
    cyl.height = number("forcing", "height", cyl.height);
    if (const Entry* e = find("forcing", "axis")) cyl.axis = parse_axis(e->value, e->line);
    if (const Entry* e = find("forcing", "g")) cyl.g = parse_vec3(e->value, e->line, "g");
    check(cyl.radius > 0.0, "forcing", "radius", "radius must be > 0");
    check(cyl.height > 0.0, "forcing", "height", "height must be > 0");
    c.forcing = cyl;
  } else {
    throw ConfigError(ftype->line, "forcing type must be zero or cylinder");
  }

  if (const Entry* e = find("scheme", "method")) {
    if (e->value == "IF-RK2" || e->value == "rk2") {
      c.scheme.method = Method::kIfRk2;
    } else if (e->value == "IF-RK4" || e->value == "rk4") {
      c.scheme.method = Method::kIfRk4;
    } else {
      throw ConfigError(e->line, "method must be IF-RK2 or IF-RK4");
    }
  }
  c.scheme.dt_min = number("scheme", "dt_min", c.scheme.dt_min);
  c.scheme.dt_max = number("scheme", "dt_max", c.scheme.dt_max);
  c.scheme.dt = number("scheme", "dt", c.scheme.dt);
  c.scheme.cfl_target = number("scheme", "cfl_target", c.scheme.cfl_target);
  if (const Entry* e = find("scheme", "adaptive")) {
    c.scheme.adaptive = parse_bool(e->value, e->line, "adaptive");
  }
  // A fixed-step run only needs dt; widen the unset bounds around it.
  if (!c.scheme.adaptive) {
    if (!find("scheme", "dt_min")) c.scheme.dt_min = std::min(c.scheme.dt_min, c.scheme.dt);
    if (!find("scheme", "dt_max")) c.scheme.dt_max = std::max(c.scheme.dt_max, c.scheme.dt);
  }
  check(c.scheme.cfl_target > 0.0 && c.scheme.cfl_target <= 1.0, "scheme", "cfl_target",
        "cfl_target must lie in (0, 1]");
  check(c.scheme.dt_min > 0.0 && c.scheme.dt_min <= c.scheme.dt_max, "scheme", "dt_min",
        "need 0 < dt_min <= dt_max");
  check(c.scheme.dt >= c.scheme.dt_min && c.scheme.dt <= c.scheme.dt_max, "scheme", "dt",
        "dt must lie in [dt_min, dt_max]");

  c.t_end = number("run", "T_end", c.t_end);
  check(c.t_end >= 0.0, "run", "T_end", "T_end must be >= 0");
  c.diag_stride = integer("run", "diag_stride", c.diag_stride);
  check(c.diag_stride >= 1, "run", "diag_stride", "diag_stride must be >= 1");
  c.snapshot_stride = integer("run", "snapshot_stride", c.snapshot_stride);
  check(c.snapshot_stride >= 0, "run", "snapshot_stride", "snapshot_stride must be >= 0");
  if (const Entry* e = find("run", "output_dir")) c.output_dir = e->value;
  if (const Entry* e = find("run", "run_id")) c.run_id = e->value;

  const Entry* init = find("run", "initial");
  const std::string init_type = init ? init->value : "zero";
  const std::map<std::string, std::set<std::string>> init_keys = {
      {"zero", {}},
      {"shear", {"amplitude"}},
      {"random", {"seed", "energy", "slope"}},
      {"ball", {"vector"}},
  };
  if (!init_keys.contains(init_type)) {
    throw ConfigError(init->line, "initial must be zero, shear, random or ball");
  }
  for (const char* k : {"amplitude", "seed", "energy", "slope", "vector"}) {
    if (const Entry* e = find("run", k); e && !init_keys.at(init_type).contains(k)) {
      throw ConfigError(e->line, std::string(k) + " does not apply to initial = " + init_type);
    }
  }
  if (init_type == "zero") {
    c.initial = ZeroInit{};
  } else if (init_type == "shear") {
    c.initial = ShearInit{number("run", "amplitude", 1.0)};
  } else if (init_type == "random") {
    RandomInit r;
    r.seed = static_cast<std::uint64_t>(integer("run", "seed", 1));
    r.energy = number("run", "energy", 1.0);
    r.slope = number("run", "slope", r.slope);
    check(r.energy >= 0.0, "run", "energy", "energy must be >= 0");
    c.initial = r;
  } else {
    BallInit b;
    if (const Entry* e = find("run", "vector")) b.vector = parse_vec3(e->value, e->line, "vector");
    c.initial = b;
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string vec(const Vec3& v) {
  return num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]);
}

}  // namespace

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[physics]\nmu = " << num(c.mu) << "\nalpha = " << num(c.alpha)
      << "\nbeta = " << num(c.beta) << "\n\n[grid]\nN = " << c.n << "\nL = " << num(c.length)
      << "\n\n[forcing]\n";
  if (const auto* cyl = std::get_if<CylinderForcing>(&c.forcing)) {
    out << "type = cylinder\ncenter = " << vec(cyl->center) << "\nradius = " << num(cyl->radius)
        << "\nheight = " << num(cyl->height) << "\naxis = " << "xyz"[cyl->axis]
        << "\ng = " << vec(cyl->g) << "\n";
  } else if (std::holds_alternative<ZeroForcing>(c.forcing)) {
    out << "type = zero\n";
  } else {
    throw ConfigError(0, "grid-valued forcing has no text form");
  }
  out << "\n[scheme]\nmethod = " << to_string(c.scheme.method) << "\ndt = " << num(c.scheme.dt)
      << "\nadaptive = " << (c.scheme.adaptive ? "true" : "false")
      << "\ncfl_target = " << num(c.scheme.cfl_target) << "\ndt_min = " << num(c.scheme.dt_min)
      << "\ndt_max = " << num(c.scheme.dt_max) << "\n\n[run]\nT_end = " << num(c.t_end)
      << "\ndiag_stride = " << c.diag_stride << "\nsnapshot_stride = " << c.snapshot_stride
      << "\noutput_dir = " << c.output_dir << "\nrun_id = " << c.run_id << "\n";
  struct {
    std::ostringstream& o;
    void operator()(const ZeroInit&) const { o << "initial = zero\n"; }
    void operator()(const ShearInit& s) const {
      o << "initial = shear\namplitude = " << num(s.amplitude) << "\n";
    }
    void operator()(const RandomInit& r) const {
      o << "initial = random\nseed = " << r.seed << "\nenergy = " << num(r.energy)
        << "\nslope = " << num(r.slope) << "\n";
    }
    void operator()(const BallInit& b) const { o << "initial = ball\nvector = " << vec(b.vector) << "\n"; }
  } init_writer{out};
  std::visit(init_writer, c.initial);
  return out.str();
}

namespace {

std::string experiment_text(double alpha, double beta, const std::string& initial) {
  std::ostringstream out;
  out << "[physics]\nmu = " << num(kExperimentViscosity) << "\nalpha = " << num(alpha)
      << "\nbeta = " << num(beta)
      << "\n\n[grid]\nN = 32\nL = 12\n\n[forcing]\ntype = cylinder\n"
         "radius = 4\nheight = 4\naxis = y\ng = 0, 2, 0\n\n"
         "[scheme]\nmethod = IF-RK2\nadaptive = false\ndt = 0.02\n\n"
         "[run]\nT_end = 200\ndiag_stride = 25\n"
      << initial;
  return out.str();
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> p;
    for (const auto& [a, atag] : {std::pair{0.2, "02"}, std::pair{0.5, "05"}}) {
      for (const auto& [b, btag] : {std::pair{1.0, "1"}, std::pair{2.0, "2"}, std::pair{4.0, "4"}}) {
        const std::string name = std::string("paper-sec4-a") + atag + "-b" + btag;
        p.push_back({name,
                     "cylinder forcing g = (0,2,0), L = 12, N = 32, u0 = 0, alpha = " + num(a) +
                         ", beta = " + num(b),
                     experiment_text(a, b, "initial = zero\nrun_id = " + name + "\n")});
      }
    }
    p.push_back({"paper-sec4-a02-b1-u0x",
                 "as paper-sec4-a02-b1 but u0 = P[(1,0,0) on the inscribed ball]",
                 experiment_text(0.2, 1.0,
                                 "initial = ball\nvector = 1, 0, 0\nrun_id = paper-sec4-a02-b1-u0x\n")});
    p.push_back({"decay-shear-b1",
                 "shear mode A = 1, beta = 1, f = 0: exact exponential decay",
                 "[physics]\nmu = 0.1\nalpha = 0.2\nbeta = 1\n\n[grid]\nN = 16\nL = 2pi\n\n"
                 "[scheme]\nmethod = IF-RK2\nadaptive = false\ndt = 0.001\n\n"
                 "[run]\nT_end = 5\ndiag_stride = 10\ninitial = shear\namplitude = 1\n"
                 "run_id = decay-shear-b1\n"});
    return p;
  }();
  return all;
}

RunConfig preset_config(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return parse_config(p.text);
  }
  throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
}

}  // namespace dampns
