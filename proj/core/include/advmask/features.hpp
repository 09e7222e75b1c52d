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
#include <vector>

#include <Eigen/Core>

#include "advmask/audio.hpp"

namespace advmask {

/// Log-mel front end of the toy recognizer.
struct FeatureChain {
  int window = 512;  ///< samples, power of two
  int hop = 256;
  int mel_filter_count = 32;
  double log_floor_db = -80.0;  ///< energy floor applied before the log
  bool include_dct = false;
  int sample_rate = 16000;

  double log_floor() const;
  int coefficient_count() const noexcept { return mel_filter_count; }
  void validate() const;

  friend bool operator==(const FeatureChain&, const FeatureChain&) = default;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters (rows) over the window/2 + 1 DFT bins. Filter centres are
/// equally spaced on the mel scale with the first at 0 Hz and the last at
/// Nyquist, so the columns sum to one.
Eigen::MatrixXd mel_filterbank(int filter_count, int window, int sample_rate);

/// Centre frequency of every mel filter in Hz.
std::vector<double> mel_centers(int filter_count, int sample_rate);

/// Orthonormal DCT-II matrix.
Eigen::MatrixXd dct_matrix(int n);

/// Intermediate values retained for the backward pass.
struct FeatureTape {
  std::size_t clip_length = 0;
  std::vector<std::vector<std::complex<double>>> spectra;  ///< per frame
  Eigen::MatrixXd mel_energy;                             ///< frames x filters
  Eigen::MatrixXd features;                               ///< frames x coefficients
};

/// Precomputed window, filterbank and DCT for a FeatureChain.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureChain& chain);

  const FeatureChain& chain() const noexcept { return chain_; }
  const Eigen::MatrixXd& filterbank() const noexcept { return mel_; }

  /// frames x coefficients. Throws InvalidArgument if the clip is shorter
  /// than one window or its rate differs from the chain's.
  Eigen::MatrixXd compute(const AudioClip& clip) const;
  FeatureTape compute_with_tape(const AudioClip& clip) const;

  /// Vector-Jacobian product: gradient w.r.t. samples given the gradient
  /// w.r.t. the feature matrix. Overlapping frame contributions are summed.
  std::vector<double> backward(const FeatureTape& tape, const Eigen::MatrixXd& grad_features) const;

 private:
  FeatureChain chain_;
  std::vector<double> window_;
  Eigen::MatrixXd mel_;
  Eigen::MatrixXd dct_;
};

/// Convenience wrapper around FeatureExtractor.
Eigen::MatrixXd features(const AudioClip& clip, const FeatureChain& chain);

}  // namespace advmask
