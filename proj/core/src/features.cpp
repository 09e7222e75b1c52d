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

#include "advmask/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "advmask/error.hpp"
#include "advmask/fft.hpp"

namespace advmask {

double FeatureChain::log_floor() const { return std::pow(10.0, log_floor_db / 10.0); }

void FeatureChain::validate() const {
  if (window <= 0 || (window & (window - 1)) != 0) throw InvalidArgument("feature window must be a power of two");
  if (hop <= 0 || hop > window) throw InvalidArgument("feature hop must be in (0, window]");
  if (mel_filter_count < 2 || mel_filter_count > window / 2 + 1)
    throw InvalidArgument("mel_filter_count must be in [2, window/2 + 1]");
  if (sample_rate <= 0) throw InvalidArgument("feature sample_rate must be positive");
  if (!std::isfinite(log_floor_db) || log_floor() <= 0.0) throw InvalidArgument("log floor must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_centers(int filter_count, int sample_rate) {
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> c(static_cast<std::size_t>(filter_count));
  for (int m = 0; m < filter_count; ++m)
    c[static_cast<std::size_t>(m)] = mel_to_hz(top * static_cast<double>(m) / static_cast<double>(filter_count - 1));
  return c;
}

Eigen::MatrixXd mel_filterbank(int filter_count, int window, int sample_rate) {
  const int bins = window / 2 + 1;
  const double top = hz_to_mel(sample_rate / 2.0);
  const double step = top / static_cast<double>(filter_count - 1);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(filter_count, bins);
  for (int k = 0; k < bins; ++k) {
    const double mel = hz_to_mel(static_cast<double>(k) * sample_rate / window);
    // Hat functions on the mel axis: bin lies between centres m and m + 1.
    const double pos = std::clamp(mel / step, 0.0, static_cast<double>(filter_count - 1));
    const int m = std::min(static_cast<int>(std::floor(pos)), filter_count - 2);
    const double t = pos - m;
    fb(m, k) += 1.0 - t;
    fb(m + 1, k) += t;
  }
  return fb;
}

Eigen::MatrixXd dct_matrix(int n) {
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = i == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int j = 0; j < n; ++j) d(i, j) = s * std::cos(std::numbers::pi * i * (j + 0.5) / n);
  }
  return d;
}

FeatureExtractor::FeatureExtractor(const FeatureChain& chain)
    : chain_(chain),
      window_(hann(static_cast<std::size_t>(chain.window))),
      mel_(mel_filterbank(chain.mel_filter_count, chain.window, chain.sample_rate)),
      dct_(chain.include_dct ? dct_matrix(chain.mel_filter_count) : Eigen::MatrixXd()) {
  chain_.validate();
}

FeatureTape FeatureExtractor::compute_with_tape(const AudioClip& clip) const {
  if (clip.sample_rate != chain_.sample_rate)
    throw InvalidArgument("features: clip rate " + std::to_string(clip.sample_rate) + " != chain rate " +
                          std::to_string(chain_.sample_rate));
  const auto n = static_cast<std::size_t>(chain_.window);
  if (clip.size() < n) throw InvalidArgument("features: clip shorter than one analysis window");
  const auto hop = static_cast<std::size_t>(chain_.hop);
  const std::size_t frames = frame_count(clip.size(), n, hop);
  const std::size_t bins = n / 2 + 1;
  const double floor = chain_.log_floor();

  FeatureTape tape;
  tape.clip_length = clip.size();
  tape.spectra.assign(frames, std::vector<std::complex<double>>(bins));
  Eigen::MatrixXd power(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(bins));

  auto& fft = RealFft::cached(n);
  std::vector<double> buf(n);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = start + i;
      buf[i] = idx < clip.size() ? clip.samples[idx] * window_[i] : 0.0;
    }
    fft.forward(buf, tape.spectra[f]);
    for (std::size_t k = 0; k < bins; ++k)
      power(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) = std::norm(tape.spectra[f][k]);
  }

  tape.mel_energy = power * mel_.transpose();
  Eigen::MatrixXd logmel = tape.mel_energy.unaryExpr([floor](double e) { return std::log(std::max(e, floor)); });
  tape.features = chain_.include_dct ? Eigen::MatrixXd(logmel * dct_.transpose()) : logmel;
  return tape;
}

Eigen::MatrixXd FeatureExtractor::compute(const AudioClip& clip) const { return compute_with_tape(clip).features; }

std::vector<double> FeatureExtractor::backward(const FeatureTape& tape, const Eigen::MatrixXd& grad_features) const {
  const auto frames = static_cast<Eigen::Index>(tape.spectra.size());
  if (grad_features.rows() != frames || grad_features.cols() != chain_.coefficient_count())
    throw InvalidArgument("features backward: gradient shape mismatch");
  const auto n = static_cast<std::size_t>(chain_.window);
  const auto hop = static_cast<std::size_t>(chain_.hop);
  const std::size_t bins = n / 2 + 1;
  const double floor = chain_.log_floor();

  const Eigen::MatrixXd grad_log = chain_.include_dct ? Eigen::MatrixXd(grad_features * dct_) : grad_features;
  // d log(max(e, floor)) / de is 1/e above the floor and 0 below it.
  Eigen::MatrixXd grad_energy(grad_log.rows(), grad_log.cols());
  for (Eigen::Index i = 0; i < grad_log.size(); ++i) {
    const double e = tape.mel_energy.data()[i];
    grad_energy.data()[i] = e > floor ? grad_log.data()[i] / e : 0.0;
  }
  const Eigen::MatrixXd grad_power = grad_energy * mel_;

  std::vector<double> grad(tape.clip_length, 0.0);
  auto& fft = RealFft::cached(n);
  std::vector<std::complex<double>> coeffs(bins);
  std::vector<double> frame_grad(n);
  for (Eigen::Index f = 0; f < frames; ++f) {
    const auto& spectrum = tape.spectra[static_cast<std::size_t>(f)];
    for (std::size_t k = 0; k < bins; ++k)
      coeffs[k] = grad_power(f, static_cast<Eigen::Index>(k)) * std::conj(spectrum[k]);
    fft.adjoint_real(coeffs, frame_grad);
    const std::size_t start = static_cast<std::size_t>(f) * hop;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = start + i;
      if (idx >= grad.size()) break;
      grad[idx] += 2.0 * window_[i] * frame_grad[i];
    }
  }
  return grad;
}

Eigen::MatrixXd features(const AudioClip& clip, const FeatureChain& chain) {
  return FeatureExtractor(chain).compute(clip);
}

}  // namespace advmask
