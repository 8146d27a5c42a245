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

#include "dampns/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace dampns {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void* fftw_aligned_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

struct Fft3d::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

Fft3d::Fft3d(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  const WaveGrid grid(n, 1.0);
  RealArray real(grid.physical_size());
  ComplexArray spec(grid.spectral_size());
  auto* r = real.data();
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());

  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE);
  if (plans_->r2c == nullptr || plans_->c2r == nullptr) {
    throw std::runtime_error("Fft3d: FFTW plan creation failed");
  }
}

Fft3d::~Fft3d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
}

void Fft3d::forward(const RealArray& in, ComplexArray& out) const {
  const WaveGrid grid(n_, 1.0);
  out.resize(grid.spectral_size());
  // r2c preserves its input by default, the const_cast is only for the C API.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.physical_size());
  for (auto& v : out) v *= scale;
}

void Fft3d::inverse(const ComplexArray& in, RealArray& out) const {
  const WaveGrid grid(n_, 1.0);
  thread_local ComplexArray scratch;
  scratch.assign(in.begin(), in.end());
  out.resize(grid.physical_size());
  fftw_execute_dft_c2r(plans_->c2r,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

const Fft3d& fft_for(const WaveGrid& grid) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<Fft3d>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[grid.n()];
  if (!slot) slot = std::make_unique<Fft3d>(grid.n());
  return *slot;
}

}  // namespace dampns
