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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dampns/forcing.hpp"
#include "dampns/initial_condition.hpp"
#include "dampns/time_integration.hpp"

namespace dampns {

/// Everything needed to reproduce one run.
struct RunConfig {
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int n = 0;
  double length = 0.0;
  ForcingSpec forcing = ZeroForcing{};
  InitialConditionSpec initial = ZeroInit{};
  SchemeConfig scheme;
  std::int64_t diag_stride = 10;
  std::int64_t snapshot_stride = 0;  // 0 disables periodic snapshots
  double t_end = 10.0;
  std::string output_dir = "out";
  std::string run_id = "run";

  WaveGrid grid() const { return WaveGrid(n, length); }
  /// Builds the forcing field; validates first.
  Physics make_physics() const;
  void validate() const;
};

/// Parse failure with the offending 1-based line (0 when not line-specific).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses the sectioned key = value format ([physics], [grid], [forcing],
/// [scheme], [run]). Unknown sections or keys, duplicates and range
/// violations raise ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text for a config; parsing it back gives the same settings.
/// Grid-valued forcing has no text form and raises ConfigError.
std::string format_config(const RunConfig& config);

struct Preset {
  std::string name;
  std::string description;
  std::string text;
};

/// Built-in configurations: the cylinder-forcing experiment matrix and the
/// analytic shear-decay check.
const std::vector<Preset>& presets();
/// Throws ConfigError for unknown names.
RunConfig preset_config(std::string_view name);

/// Viscosity used by the cylinder-forcing experiment presets.
inline constexpr double kExperimentViscosity = 0.5;

}  // namespace dampns
