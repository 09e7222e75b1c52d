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

#include <cstdint>
#include <string>
#include <vector>

#include "advmask/acoustic_model.hpp"
#include "advmask/audio.hpp"

namespace advmask {

/// A clip paired with the transcription it is expected to decode to.
struct LabeledSample {
  std::string id;
  AudioClip clip;
  Transcription target;
};

struct DefenseEntry {
  std::string id;
  Transcription target;
  Transcription before;
  Transcription after;
  bool success_before = false;
  bool success_after = false;
};

struct DefenseReport {
  std::vector<DefenseEntry> entries;
  double rate_before = 0.0;
  double rate_after = 0.0;
  int low_rate = 0;
  int restore_rate = 0;
};

/// Resamples each clip to `low` Hz, then to `restore` Hz, then back to the
/// model rate if that differs, and decodes before and after. Requires
/// low <= restore <= clip rate; throws InvalidArgument otherwise.
DefenseReport defense_downsample(const std::vector<LabeledSample>& samples, const AcousticModel& model, int low,
                                 int restore, unsigned jobs = 1);

/// The down/up resampling on its own.
AudioClip downsample_restore(const AudioClip& clip, int low, int restore);

struct NoisePoint {
  double sigma = 0.0;
  double success = 0.0;
  friend bool operator==(const NoisePoint&, const NoisePoint&) = default;
};

/// Targeted-decode rate of sample + N(0, sigma^2) over `trials` draws for
/// each sigma. Throws InvalidArgument if the grid is not ascending.
std::vector<NoisePoint> defense_noise_probe(const AudioClip& sample, const AcousticModel& model,
                                            const Transcription& target, const std::vector<double>& sigma_grid,
                                            int trials, std::uint64_t seed, unsigned jobs = 1);

/// Least-squares fit constrained to be non-increasing (pool adjacent violators).
std::vector<double> isotonic_non_increasing(const std::vector<double>& y);
/// Least-squares fit constrained to be non-decreasing.
std::vector<double> isotonic_non_decreasing(const std::vector<double>& y);

/// Ordinary least-squares slope of y against x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

/// True when the non-increasing isotonic fit explains the curve at least as
/// well as the non-decreasing one and the linear slope is not positive.
bool trend_non_increasing(const std::vector<NoisePoint>& curve);

/// Fraction of grid points where `upper` is >= `lower`. Grids must match.
double dominance_fraction(const std::vector<NoisePoint>& upper, const std::vector<NoisePoint>& lower);

}  // namespace advmask
