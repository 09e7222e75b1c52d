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

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace advmask {

/// Real-input DFT of a fixed size backed by an FFTW plan.
///
/// forward() maps n real samples to n/2 + 1 complex bins using the
/// e^{-2 pi i k m / n} convention. adjoint_real() evaluates
/// y_m = Re sum_{k=0}^{n/2} c_k e^{-2 pi i k m / n}, which is the
/// vector-Jacobian product needed to backpropagate through forward().
///
/// Plans are built with FFTW_ESTIMATE so results are bit-reproducible.
/// Instances are not shareable across threads; use thread_local caching.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const noexcept;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void adjoint_real(std::span<const std::complex<double>> coeffs, std::span<double> out);

  /// Per-thread cached instance for size n.
  static RealFft& cached(std::size_t n);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace advmask
