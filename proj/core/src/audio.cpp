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

#include "advmask/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "advmask/error.hpp"
#include "advmask/fft.hpp"

namespace advmask {

void AudioClip::validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample_rate must be positive, got " + std::to_string(sample_rate));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw InvalidArgument("non-finite sample at index " + std::to_string(i));
  }
}

std::size_t frame_count(std::size_t length, std::size_t window, std::size_t hop) {
  if (length == 0) return 0;
  if (length <= window) return 1;
  return (length - window + hop - 1) / hop + 1;
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
  return w;
}

std::vector<double> modified_hann(std::size_t n) {
  auto w = hann(n);
  const double norm = std::sqrt(8.0 / 3.0);
  for (double& v : w) v *= norm;
  return w;
}

Spectrogram stft(const AudioClip& clip, int window_size, int hop) {
  if (window_size <= 0) throw InvalidArgument("stft: window_size must be positive");
  if ((window_size & (window_size - 1)) != 0) throw InvalidArgument("stft: window_size must be a power of two");
  if (hop <= 0 || hop > window_size) throw InvalidArgument("stft: hop must be in (0, window_size]");

  const auto n = static_cast<std::size_t>(window_size);
  const auto h = static_cast<std::size_t>(hop);
  const std::size_t frames = frame_count(clip.size(), n, h);
  const std::size_t bins = n / 2 + 1;
  const auto window = modified_hann(n);

  Spectrogram out;
  out.window_size = window_size;
  out.hop = hop;
  out.sample_rate = clip.sample_rate;
  out.frames.resize(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(bins));

  auto& fft = RealFft::cached(n);
  std::vector<double> buf(n);
  std::vector<std::complex<double>> spectrum(bins);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * h;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = start + i;
      buf[i] = idx < clip.size() ? clip.samples[idx] * window[i] : 0.0;
    }
    fft.forward(buf, spectrum);
    for (std::size_t k = 0; k < bins; ++k) out.frames(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) = spectrum[k];
  }
  return out;
}

AudioClip add_unclipped(const AudioClip& a, const AudioClip& b, std::size_t offset) {
  if (a.sample_rate != b.sample_rate)
    throw InvalidArgument("mix: sample rate mismatch (" + std::to_string(a.sample_rate) + " vs " +
                          std::to_string(b.sample_rate) + ")");
  AudioClip out;
  out.sample_rate = a.sample_rate;
  out.samples.assign(std::max(a.size(), offset + b.size()), 0.0);
  std::copy(a.samples.begin(), a.samples.end(), out.samples.begin());
  for (std::size_t i = 0; i < b.size(); ++i) out.samples[offset + i] += b.samples[i];
  return out;
}

AudioClip mix(const AudioClip& a, const AudioClip& b, std::size_t offset) {
  return clip_to_unit(add_unclipped(a, b, offset));
}

namespace {

double bessel_i0(double x) { return std::cyl_bessel_i(0.0, x); }

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Kaiser-windowed sinc low-pass, evaluated at offset tau (input samples).
struct SincKernel {
  double cutoff;      // cycles per input sample
  double half_width;  // input samples
  double beta;
  double i0_beta;

  double operator()(double tau) const {
    if (std::abs(tau) >= half_width) return 0.0;
    const double r = tau / half_width;
    const double win = bessel_i0(beta * std::sqrt(1.0 - r * r)) / i0_beta;
    return 2.0 * cutoff * sinc(2.0 * cutoff * tau) * win;
  }
};

constexpr double kZeroCrossings = 64.0;
constexpr double kKaiserBeta = 8.6;  // about 85 dB stopband
constexpr double kRolloff = 0.96;

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw InvalidArgument("resample: target_rate must be positive");
  if (clip.sample_rate <= 0) throw InvalidArgument("resample: source sample_rate must be positive");
  if (target_rate == clip.sample_rate) return clip;

  const long long g = std::gcd(static_cast<long long>(target_rate), static_cast<long long>(clip.sample_rate));
  const long long up = target_rate / g;
  const long long down = clip.sample_rate / g;

  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(clip.size()) * static_cast<double>(target_rate) / clip.sample_rate));

  // Cutoff in cycles per input sample, placed just below the lower Nyquist.
  const double nyquist_ratio = 0.5 * std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  SincKernel kernel{};
  kernel.cutoff = kRolloff * nyquist_ratio;
  kernel.half_width = kZeroCrossings / (2.0 * kernel.cutoff);
  kernel.beta = kKaiserBeta;
  kernel.i0_beta = bessel_i0(kKaiserBeta);

  const auto taps_half = static_cast<long long>(std::ceil(kernel.half_width));
  const long long n_in = static_cast<long long>(clip.size());

  // Polyphase table: output i sits at input position (i * down) / up, whose
  // fractional part cycles through `up` phases.
  const bool tabulate = up <= 4096;
  std::vector<std::vector<double>> phases;
  if (tabulate) {
    phases.resize(static_cast<std::size_t>(up));
    for (long long p = 0; p < up; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up);
      auto& taps = phases[static_cast<std::size_t>(p)];
      taps.resize(static_cast<std::size_t>(2 * taps_half + 1));
      double sum = 0.0;
      for (long long t = -taps_half; t <= taps_half; ++t) {
        const double v = kernel(frac - static_cast<double>(t));
        taps[static_cast<std::size_t>(t + taps_half)] = v;
        sum += v;
      }
      for (double& v : taps) v /= sum;
    }
  }

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.assign(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const long long num = static_cast<long long>(i) * down;
    const long long base = num / up;
    const long long phase = num % up;
    double acc = 0.0;
    if (tabulate) {
      const auto& taps = phases[static_cast<std::size_t>(phase)];
      for (long long t = -taps_half; t <= taps_half; ++t) {
        const long long j = base + t;
        if (j < 0 || j >= n_in) continue;
        acc += clip.samples[static_cast<std::size_t>(j)] * taps[static_cast<std::size_t>(t + taps_half)];
      }
    } else {
      const double frac = static_cast<double>(phase) / static_cast<double>(up);
      double norm = 0.0;
      for (long long t = -taps_half; t <= taps_half; ++t) {
        const double v = kernel(frac - static_cast<double>(t));
        norm += v;
        const long long j = base + t;
        if (j >= 0 && j < n_in) acc += clip.samples[static_cast<std::size_t>(j)] * v;
      }
      acc /= norm;
    }
    out.samples[i] = acc;
  }
  return out;
}

AudioClip add_white_noise(const AudioClip& clip, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("add_white_noise: sigma must be >= 0");
  if (sigma == 0.0) return clip;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  AudioClip out = clip;
  for (double& s : out.samples) s = std::clamp(s + dist(rng), -1.0, 1.0);
  return out;
}

AudioClip scale(const AudioClip& clip, double gain) {
  AudioClip out = clip;
  for (double& s : out.samples) s *= gain;
  return out;
}

AudioClip clip_to_unit(const AudioClip& clip) {
  AudioClip out = clip;
  for (double& s : out.samples) s = std::clamp(s, -1.0, 1.0);
  return out;
}

AudioClip pad_to(const AudioClip& clip, std::size_t length) {
  AudioClip out = clip;
  if (out.samples.size() < length) out.samples.resize(length, 0.0);
  return out;
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(energy(x) / static_cast<double>(x.size()));
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

AudioClip sine(double freq_hz, double amplitude, std::size_t length, int rate, double phase) {
  AudioClip out = AudioClip::silence(length, rate);
  const double w = 2.0 * std::numbers::pi * freq_hz / static_cast<double>(rate);
  for (std::size_t i = 0; i < length; ++i) out.samples[i] = amplitude * std::sin(w * static_cast<double>(i) + phase);
  return out;
}

}  // namespace advmask
