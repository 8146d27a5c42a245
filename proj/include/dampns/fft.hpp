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

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

#include "dampns/wave_grid.hpp"

namespace dampns {

/// Allocator backed by fftw_malloc so every field buffer carries the SIMD
/// alignment the cached plans were created with.
template <class T>
struct FftwAllocator {
  using value_type = T;

  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  void* p = fftw_aligned_alloc(n * sizeof(T));
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_aligned_free(p);
}

using Complex = std::complex<double>;
using RealArray = std::vector<double, FftwAllocator<double>>;
using ComplexArray = std::vector<Complex, FftwAllocator<Complex>>;

/// Real 3D transforms for one grid size. Plans are built with FFTW_ESTIMATE,
/// so the same binary always executes the same algorithm and results are
/// bitwise reproducible. Execution is thread-safe; construction is
/// serialized internally.
class Fft3d {
 public:
  explicit Fft3d(int n);
  ~Fft3d();
  Fft3d(const Fft3d&) = delete;
  Fft3d& operator=(const Fft3d&) = delete;

  /// Physical values -> Fourier coefficients, normalized by 1/N^3 so that
  /// u(x) = sum_k c_k exp(i k.x).
  void forward(const RealArray& in, ComplexArray& out) const;
  /// Fourier coefficients -> physical values. `in` is left untouched.
  void inverse(const ComplexArray& in, RealArray& out) const;

  int n() const { return n_; }

 private:
  int n_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Process-wide cached transform for grids with `grid.n()` points per axis.
const Fft3d& fft_for(const WaveGrid& grid);

}  // namespace dampns
