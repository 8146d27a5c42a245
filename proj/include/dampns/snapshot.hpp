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
#include <filesystem>
#include <stdexcept>
#include <string>

#include "dampns/time_integration.hpp"

namespace dampns {

// File layout, all integers and floats little-endian:
//
//   offset  size  field
//        0     8  magic "DAMPNSSN"
//        8     4  u32 format version
//       12     4  u32 N
//       16     8  f64 L
//       24     8  f64 t
//       32     8  i64 step_count
//       40     8  f64 last_dt
//       48     8  f64 mu
//       56     8  f64 alpha
//       64     8  f64 beta
//       72     8  u64 mode count M (retained modes per component)
//       80     4  u32 CRC-32 of bytes [0, 80) followed by the payload
//       84        payload: 3 * M complex coefficients, (re, im) f64 pairs
//
// Payload order: component 0, 1, 2; within a component mx ascending, then
// my ascending (both over -K..K with K the largest retained wavenumber),
// then mz over 0..K. Only the stored half spectrum (mz >= 0) is written.
inline constexpr char kSnapshotMagic[8] = {'D', 'A', 'M', 'P', 'N', 'S', 'S', 'N'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderSize = 84;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  int n = 0;
  double length = 0.0;
  double t = 0.0;
  std::int64_t step_count = 0;
  double last_dt = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t mode_count = 0;
  std::uint32_t checksum = 0;
};

struct Snapshot {
  SnapshotHeader header;
  SolverState state;
};

std::uint64_t retained_mode_count(const WaveGrid& grid);

/// Written to `path.partial` and renamed on success.
void write_snapshot(const SolverState& state, const Physics& physics,
                    const std::filesystem::path& path);

/// Validates magic, version, size, checksum and field invariants before
/// returning anything.
Snapshot read_snapshot(const std::filesystem::path& path);

/// read_snapshot plus a check that grid and (mu, alpha, beta) match what the
/// restarted run will use.
SolverState restart_state(const std::filesystem::path& path, const WaveGrid& grid,
                          const Physics& physics);

}  // namespace dampns
