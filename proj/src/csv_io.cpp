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

#include "dampns/csv_io.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace dampns {

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, p);
}

std::array<double, 9> fields(const DiagnosticsRecord& r) {
  return {r.t, r.E, r.V2, r.Lbp, r.A2, r.P_f, r.P_damp, r.dEdt, r.umax};
}

std::filesystem::path partial_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".partial";
  return p;
}

void ensure_parent(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

}  // namespace

std::string format_double(double v) {
  std::string out;
  append_number(out, v);
  return out;
}

std::string format_row(const DiagnosticsRecord& r) {
  std::string out;
  bool first = true;
  for (double v : fields(r)) {
    if (!first) out.push_back(',');
    first = false;
    append_number(out, v);
  }
  out.push_back('\n');
  return out;
}

void write_diagnostics(std::span<const DiagnosticsRecord> records,
                       const std::filesystem::path& path) {
  ensure_parent(path);
  const auto partial = partial_path(path);
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + partial.string());
    out << kCsvHeader << '\n';
    for (const auto& r : records) out << format_row(r);
    out.flush();
    if (!out) throw IoError("write failed: " + partial.string());
  }
  std::filesystem::rename(partial, path);
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError(path.string() + ": missing or unexpected CSV header");
  }
  std::vector<DiagnosticsRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 9> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 9; ++k) {
      const auto res = std::from_chars(p, end, v[k]);
      if (res.ec != std::errc()) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      }
      p = res.ptr;
      if (k < 8) {
        if (p == end || *p != ',') {
          throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 9 columns");
        }
        ++p;
      }
    }
    if (p != end) throw IoError(path.string() + ":" + std::to_string(line_no) + ": trailing data");
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
  }
  return out;
}

DiagnosticsWriter::DiagnosticsWriter(std::filesystem::path path)
    : path_(std::move(path)), partial_(partial_path(path_)) {
  ensure_parent(path_);
  out_.open(partial_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + partial_.string());
  out_ << kCsvHeader << '\n';
  check_stream();
}

// An unfinished writer leaves the .partial file behind as the failure marker.
DiagnosticsWriter::~DiagnosticsWriter() = default;

void DiagnosticsWriter::check_stream() {
  if (!out_) throw IoError("write failed: " + partial_.string());
}

void DiagnosticsWriter::emit(std::size_t i) {
  DiagnosticsRecord r = records_[i];
  if (records_.size() >= 3) r.dEdt = energy_rate(records_, i);
  out_ << format_row(r);
  records_[i].dEdt = r.dEdt;
}

void DiagnosticsWriter::append(const DiagnosticsRecord& r) {
  if (finished_) throw std::logic_error("DiagnosticsWriter: append after finish");
  records_.push_back(r);
  // Row i (interior) needs i+1; row 0 needs rows 1 and 2.
  const std::size_t n = records_.size();
  while (n >= 3 && written_ + 1 < n) emit(written_++);
  check_stream();
}

void DiagnosticsWriter::finish() {
  if (finished_) return;
  const std::size_t n = records_.size();
  if (n == 2) {
    const double d = (records_[1].E - records_[0].E) / (records_[1].t - records_[0].t);
    records_[0].dEdt = records_[1].dEdt = d;
  }
  while (written_ < n) {
    if (n >= 3) {
      emit(written_++);
    } else {
      out_ << format_row(records_[written_++]);
    }
  }
  out_.flush();
  check_stream();
  out_.close();
  std::filesystem::rename(partial_, path_);
  finished_ = true;
}

Observer make_csv_observer(DiagnosticsWriter& writer, const Physics& physics,
                           std::int64_t stride) {
  return Observer{stride, [&writer, physics](const SolverState& s) {
                    writer.append(record(s.u, s.t, physics));
                    return ObserverAction::kContinue;
                  }};
}

}  // namespace dampns
