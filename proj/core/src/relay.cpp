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

#include "advmask/relay.hpp"

#include <cmath>
#include <random>

#include "advmask/error.hpp"

namespace advmask {

ChannelParams ChannelParams::identity() {
  ChannelParams p;
  p.low_rate = 0;
  p.gain_jitter_db = 0.0;
  p.noise_sigma = 0.0;
  p.reverb_mix = 0.0;
  return p;
}

void ChannelParams::validate() const {
  if (low_rate < 0) throw InvalidArgument("channel: low_rate must be >= 0");
  if (!(gain_jitter_db >= 0.0)) throw InvalidArgument("channel: gain_jitter_db must be >= 0");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("channel: noise_sigma must be >= 0");
  if (!(reverb_decay_ms > 0.0) || !(reverb_length_ms >= 0.0))
    throw InvalidArgument("channel: reverb decay must be > 0 and length >= 0");
  if (!(reverb_mix >= 0.0)) throw InvalidArgument("channel: reverb_mix must be >= 0");
}

std::vector<double> reverb_kernel(const ChannelParams& p, int sample_rate) {
  const auto len = static_cast<std::size_t>(std::llround(p.reverb_length_ms * 1e-3 * sample_rate));
  std::vector<double> h(len + 1, 0.0);
  h[0] = 1.0;
  if (p.reverb_mix == 0.0 || len == 0) return {1.0};
  // -60 dB after reverb_decay_ms.
  const double tau = p.reverb_decay_ms * 1e-3 * sample_rate / std::log(1000.0);
  double norm = 0.0;
  for (std::size_t n = 1; n <= len; ++n) norm += std::exp(-static_cast<double>(n) / tau);
  for (std::size_t n = 1; n <= len; ++n) h[n] = p.reverb_mix * std::exp(-static_cast<double>(n) / tau) / norm;
  return h;
}

AudioClip relay_hop(const AudioClip& clip, const ChannelParams& p, int hop_index) {
  p.validate();
  AudioClip out = clip;
  if (p.low_rate > 0 && p.low_rate != clip.sample_rate)
    out = pad_to(resample(resample(clip, p.low_rate), clip.sample_rate), clip.size());

  const auto h = reverb_kernel(p, clip.sample_rate);
  if (h.size() > 1) {
    std::vector<double> y(out.size(), 0.0);
    for (std::size_t n = 0; n < out.size(); ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.size() && k <= n; ++k) acc += h[k] * out.samples[n - k];
      y[n] = acc;
    }
    out.samples = std::move(y);
  }

  std::mt19937_64 rng(p.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(hop_index + 1));
  if (p.gain_jitter_db > 0.0) {
    std::uniform_real_distribution<double> jitter(-p.gain_jitter_db, p.gain_jitter_db);
    out = scale(out, std::pow(10.0, jitter(rng) / 20.0));
  }
  if (p.noise_sigma > 0.0) out = add_white_noise(out, p.noise_sigma, rng());
  return out;
}

AudioClip relay_simulate(const AudioClip& clip, int hops, const ChannelParams& per_hop) {
  if (hops < 1) throw InvalidArgument("relay: hops must be >= 1");
  AudioClip out = clip;
  for (int h = 0; h < hops; ++h) out = relay_hop(out, per_hop, h);
  return out;
}

double si_sdr(const AudioClip& reference, const AudioClip& estimate) {
  const std::size_t n = std::min(reference.size(), estimate.size());
  double dot = 0.0, ref_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += reference.samples[i] * estimate.samples[i];
    ref_energy += reference.samples[i] * reference.samples[i];
  }
  if (ref_energy == 0.0) throw InvalidArgument("si_sdr: silent reference");
  const double a = dot / ref_energy;
  double target = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = a * reference.samples[i];
    const double e = estimate.samples[i] - t;
    target += t * t;
    noise += e * e;
  }
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(target / noise);
}

}  // namespace advmask
