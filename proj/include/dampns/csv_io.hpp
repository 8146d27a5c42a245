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

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dampns/diagnostics.hpp"

namespace dampns {

inline constexpr const char* kCsvHeader = "t,E,V2,Lbp,A2,P_f,P_damp,dEdt,umax";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text at 17 significant digits, C locale.
std::string format_double(double v);

/// One CSV row, 17 significant digits, C locale.
std::string format_row(const DiagnosticsRecord& r);

/// Writes header + rows. Data goes to `path.partial` first and is renamed
/// into place on success, so a failed write leaves only the marker file.
void write_diagnostics(std::span<const DiagnosticsRecord> records,
                       const std::filesystem::path& path);

/// Exact inverse of write_diagnostics.
std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

/// Streams records to CSV while a run is in progress. Rows are emitted once
/// their dEdt is final (one record of lag); finish() flushes the tail and
/// renames the `.partial` file. Output equals write_diagnostics on the same
/// records after fill_energy_rate.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(std::filesystem::path path);
  ~DiagnosticsWriter();
  DiagnosticsWriter(const DiagnosticsWriter&) = delete;
  DiagnosticsWriter& operator=(const DiagnosticsWriter&) = delete;

  void append(const DiagnosticsRecord& r);
  void finish();

  std::span<const DiagnosticsRecord> records() const { return records_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void emit(std::size_t i);
  void check_stream();

  std::filesystem::path path_;
  std::filesystem::path partial_;
  std::ofstream out_;
  std::vector<DiagnosticsRecord> records_;
  std::size_t written_ = 0;
  bool finished_ = false;
};

/// Observer that records every `stride` steps into `writer`.
Observer make_csv_observer(DiagnosticsWriter& writer, const Physics& physics,
                           std::int64_t stride);

}  // namespace dampns
