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

#include "advmask/footage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "advmask/error.hpp"

namespace advmask {

const std::vector<TimbreProfile>& timbre_profiles() {
  static const std::vector<TimbreProfile> profiles = {
      {"sine", {1.0}, 0.0, 0.0},
      {"piano", {1.0, 0.55, 0.35, 0.22, 0.14, 0.09, 0.06, 0.04}, 3.0, 1.5},
      {"organ", {1.0, 0.0, 0.33, 0.0, 0.2, 0.0, 0.14, 0.0, 0.11}, 0.0, 0.0},
      {"strings", {1.0, 0.5, 0.33, 0.25, 0.2, 0.17}, 0.0, 0.0},
  };
  return profiles;
}

const TimbreProfile& timbre_by_name(const std::string& name) {
  for (const auto& p : timbre_profiles())
    if (p.name == name) return p;
  throw InvalidArgument("unknown timbre '" + name + "'");
}

MusicFootage synth_footage(double tone_hz, const std::string& timbre, double duration_ms, double amplitude,
                           int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("synth_footage: sample_rate must be positive");
  if (!(tone_hz > 0.0) || tone_hz >= sample_rate / 2.0)
    throw InvalidArgument("synth_footage: tone " + std::to_string(tone_hz) + " Hz not below Nyquist");
  if (!(duration_ms > 0.0)) throw InvalidArgument("synth_footage: duration must be positive");
  if (!(amplitude >= 0.0)) throw InvalidArgument("synth_footage: amplitude must be >= 0");
  const auto& profile = timbre_by_name(timbre);

  const auto length = static_cast<std::size_t>(std::llround(duration_ms * 1e-3 * sample_rate));
  std::vector<double> s(length, 0.0);
  for (std::size_t h = 1; h <= profile.harmonics.size(); ++h) {
    const double a = profile.harmonics[h - 1];
    const double f = tone_hz * static_cast<double>(h);
    if (a == 0.0 || f >= sample_rate / 2.0) continue;
    const double w = 2.0 * std::numbers::pi * f / sample_rate;
    const double decay = profile.decay_per_second * (1.0 + profile.decay_harmonic_slope * static_cast<double>(h - 1));
    for (std::size_t i = 0; i < length; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      s[i] += a * std::exp(-decay * t) * std::sin(w * static_cast<double>(i));
    }
  }

  const std::size_t fade = std::min(length / 2, static_cast<std::size_t>(std::llround(0.010 * sample_rate)));
  for (std::size_t i = 0; i < fade; ++i) {
    const double g = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(fade)));
    s[i] *= g;
    s[length - 1 - i] *= g;
  }

  const double pk = peak(s);
  for (double& v : s) v = pk > 0.0 ? v * amplitude / pk : 0.0;

  MusicFootage out;
  out.tone_hz = tone_hz;
  out.timbre = timbre;
  out.duration_ms = duration_ms;
  out.rendered = AudioClip(std::move(s), sample_rate);
  return out;
}

}  // namespace advmask
