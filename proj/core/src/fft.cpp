/*
 * Copyright 2026 The advmask Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "advmask/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "advmask/error.hpp"

namespace advmask {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    if (n == 0) throw InvalidArgument("RealFft: size must be positive");
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(cplx);
  }
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const noexcept { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = impl_->n;
  if (in.size() != n || out.size() != n / 2 + 1) throw InvalidArgument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->r2c);
  for (std::size_t k = 0; k <= n / 2; ++k) out[k] = {impl_->cplx[k][0], impl_->cplx[k][1]};
}

void RealFft::adjoint_real(std::span<const std::complex<double>> coeffs, std::span<double> out) {
  const std::size_t n = impl_->n;
  if (coeffs.size() != n / 2 + 1 || out.size() != n) throw InvalidArgument("RealFft::adjoint_real: size mismatch");
  // c2r computes sum_k C_k e^{+2 pi i k m / n} over the Hermitian extension of C.
  // Choosing C_k = conj(c_k) / 2 for interior bins and the real parts at DC and
  // Nyquist reproduces Re sum_k c_k e^{-2 pi i k m / n}.
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    if (edge) {
      impl_->cplx[k][0] = coeffs[k].real();
      impl_->cplx[k][1] = 0.0;
    } else {
      impl_->cplx[k][0] = 0.5 * coeffs[k].real();
      impl_->cplx[k][1] = -0.5 * coeffs[k].imag();
    }
  }
  fftw_execute(impl_->c2r);
  std::copy(impl_->real, impl_->real + n, out.begin());
}

RealFft& RealFft::cached(std::size_t n) {
  thread_local std::map<std::size_t, RealFft> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, RealFft(n)).first;
  return it->second;
}

}  // namespace advmask
