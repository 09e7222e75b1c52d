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
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace advmask {

/// Mono PCM signal. Samples are nominally in [-1, 1]; the attack's unclipped
/// refinement stage may temporarily leave that range, so only finiteness is
/// enforced by validate().
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 16000;

  AudioClip() = default;
  AudioClip(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

  static AudioClip silence(std::size_t length, int rate) { return {std::vector<double>(length, 0.0), rate}; }

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }

  /// Throws InvalidArgument if the rate is not positive or a sample is not finite.
  void validate() const;

  friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

/// One row per analysis window, window_size/2 + 1 bins per row.
struct Spectrogram {
  Eigen::MatrixXcd frames;
  int window_size = 2048;
  int hop = 512;
  int sample_rate = 16000;

  Eigen::Index num_frames() const noexcept { return frames.rows(); }
  Eigen::Index num_bins() const noexcept { return frames.cols(); }
};

/// Frame count for the framing rule shared by stft() and the ASR feature chain:
/// 0 for an empty clip, 1 for clips no longer than one window, otherwise
/// ceil((length - window) / hop) + 1 with the last frame zero-padded.
std::size_t frame_count(std::size_t length, std::size_t window, std::size_t hop);

/// Power-normalized ("modified") periodic Hann window: sqrt(8/3) * 0.5 * (1 - cos(2 pi n / N)).
std::vector<double> modified_hann(std::size_t n);
/// Plain periodic Hann window.
std::vector<double> hann(std::size_t n);

Spectrogram stft(const AudioClip& clip, int window_size = 2048, int hop = 512);

/// Sample-wise sum with `b` delayed by `offset` samples, saturated to [-1, 1].
AudioClip mix(const AudioClip& a, const AudioClip& b, std::size_t offset = 0);

/// Sum without saturation; used where a gradient must flow through the mixture.
AudioClip add_unclipped(const AudioClip& a, const AudioClip& b, std::size_t offset = 0);

/// Band-limited windowed-sinc resampling. Output length is
/// round(length * target_rate / sample_rate).
AudioClip resample(const AudioClip& clip, int target_rate);

/// Adds i.i.d. N(0, sigma^2) noise drawn from a generator seeded with `seed`,
/// then clips to [-1, 1].
AudioClip add_white_noise(const AudioClip& clip, double sigma, std::uint64_t seed);

AudioClip scale(const AudioClip& clip, double gain);
AudioClip clip_to_unit(const AudioClip& clip);
AudioClip pad_to(const AudioClip& clip, std::size_t length);

double rms(std::span<const double> x);
double peak(std::span<const double> x);
double energy(std::span<const double> x);

AudioClip sine(double freq_hz, double amplitude, std::size_t length, int rate, double phase = 0.0);

}  // namespace advmask
