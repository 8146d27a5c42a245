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

#include "dampns/snapshot.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "dampns/spectral_ops.hpp"

namespace dampns {

namespace {

class ByteWriter {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }
  std::vector<unsigned char> bytes;

 private:
  void put(std::uint64_t v, int width) {
    for (int b = 0; b < width; ++b) bytes.push_back(static_cast<unsigned char>(v >> (8 * b)));
  }
};

class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char>& b, std::size_t pos) : bytes_(b), pos_(pos) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }

 private:
  std::uint64_t get(int width) {
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= std::uint64_t(bytes_[pos_++]) << (8 * b);
    return v;
  }
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_;
};

// Visits retained modes of one component in file order.
template <typename F>
void for_each_retained(const WaveGrid& g, F&& f) {
  const int k = g.max_retained();
  for (int mx = -k; mx <= k; ++mx) {
    for (int my = -k; my <= k; ++my) {
      for (int mz = 0; mz <= k; ++mz) {
        f(g.spectral_index(g.axis_index(mx), g.axis_index(my), mz));
      }
    }
  }
}

std::uint32_t crc(const unsigned char* p, std::size_t n, std::uint32_t seed = 0) {
  uLong c = seed;
  // zlib takes uInt lengths; feed in bounded chunks.
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

std::uint64_t retained_mode_count(const WaveGrid& grid) {
  const std::uint64_t k = static_cast<std::uint64_t>(grid.max_retained());
  return (2 * k + 1) * (2 * k + 1) * (k + 1);
}

void write_snapshot(const SolverState& state, const Physics& physics,
                    const std::filesystem::path& path) {
  const auto& g = state.u.grid();
  ByteWriter w;
  w.raw(kSnapshotMagic, sizeof kSnapshotMagic);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(g.n()));
  w.f64(g.length());
  w.f64(state.t);
  w.u64(static_cast<std::uint64_t>(state.step_count));
  w.f64(state.last_dt);
  w.f64(physics.mu);
  w.f64(physics.alpha);
  w.f64(physics.beta);
  w.u64(retained_mode_count(g));
  const std::size_t crc_at = w.bytes.size();
  w.u32(0);

  for (int c = 0; c < 3; ++c) {
    const auto& comp = state.u.component(c);
    for_each_retained(g, [&](std::size_t q) {
      w.f64(comp[q].real());
      w.f64(comp[q].imag());
    });
  }

  std::uint32_t sum = crc(w.bytes.data(), crc_at);
  sum = crc(w.bytes.data() + kSnapshotHeaderSize, w.bytes.size() - kSnapshotHeaderSize, sum);
  for (int b = 0; b < 4; ++b) w.bytes[crc_at + b] = static_cast<unsigned char>(sum >> (8 * b));

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError("cannot open " + partial.string());
    out.write(reinterpret_cast<const char*>(w.bytes.data()),
              static_cast<std::streamsize>(w.bytes.size()));
    out.flush();
    if (!out) throw SnapshotError("write failed: " + partial.string());
  }
  std::filesystem::rename(partial, path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < kSnapshotHeaderSize) throw SnapshotError(where + "truncated header");
  if (std::memcmp(bytes.data(), kSnapshotMagic, sizeof kSnapshotMagic) != 0) {
    throw SnapshotError(where + "not a snapshot file (bad magic)");
  }

  ByteReader r(bytes, sizeof kSnapshotMagic);
  SnapshotHeader h;
  h.version = r.u32();
  if (h.version != kSnapshotVersion) {
    throw SnapshotError(where + "unsupported format version " + std::to_string(h.version));
  }
  h.n = static_cast<int>(r.u32());
  h.length = r.f64();
  h.t = r.f64();
  h.step_count = static_cast<std::int64_t>(r.u64());
  h.last_dt = r.f64();
  h.mu = r.f64();
  h.alpha = r.f64();
  h.beta = r.f64();
  h.mode_count = r.u64();
  h.checksum = r.u32();

  std::uint32_t sum = crc(bytes.data(), kSnapshotHeaderSize - 4);
  sum = crc(bytes.data() + kSnapshotHeaderSize, bytes.size() - kSnapshotHeaderSize, sum);
  if (sum != h.checksum) throw SnapshotError(where + "checksum mismatch");

  WaveGrid g = [&] {
    try {
      return WaveGrid(h.n, h.length);
    } catch (const std::invalid_argument& e) {
      throw SnapshotError(where + "invalid grid: " + e.what());
    }
  }();
  if (h.mode_count != retained_mode_count(g)) {
    throw SnapshotError(where + "mode count does not match the grid");
  }
  if (bytes.size() != kSnapshotHeaderSize + 3 * h.mode_count * 16) {
    throw SnapshotError(where + "payload size does not match the mode count");
  }

  SpectralVector v(g);
  for (int c = 0; c < 3; ++c) {
    auto& comp = v.comp[c];
    for_each_retained(g, [&](std::size_t q) {
      const double re = r.f64();
      const double im = r.f64();
      comp[q] = Complex(re, im);
    });
  }
  SpectralVelocity u = SpectralVelocity::assume_projected(std::move(v));
  try {
    check_invariants(u);
  } catch (const std::logic_error& e) {
    throw SnapshotError(where + "field violates invariants: " + e.what());
  }
  return Snapshot{h, SolverState{h.t, std::move(u), h.step_count, h.last_dt}};
}

SolverState restart_state(const std::filesystem::path& path, const WaveGrid& grid,
                          const Physics& physics) {
  Snapshot s = read_snapshot(path);
  const auto& h = s.header;
  if (!(s.state.u.grid() == grid)) {
    throw SnapshotError("restart grid mismatch: snapshot has N = " + std::to_string(h.n) +
                        ", L = " + std::to_string(h.length));
  }
  if (h.mu != physics.mu || h.alpha != physics.alpha || h.beta != physics.beta) {
    throw SnapshotError("restart physics mismatch: snapshot has mu = " + std::to_string(h.mu) +
                        ", alpha = " + std::to_string(h.alpha) +
                        ", beta = " + std::to_string(h.beta));
  }
  return std::move(s.state);
}

}  // namespace dampns
