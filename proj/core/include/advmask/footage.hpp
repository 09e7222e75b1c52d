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

#include <string>
#include <vector>

#include "advmask/audio.hpp"

namespace advmask {

/// Additive-synthesis instrument: relative harmonic amplitudes plus an
/// exponential decay whose rate grows with harmonic number.
struct TimbreProfile {
  std::string name;
  std::vector<double> harmonics;  ///< amplitude of harmonic h at index h - 1
  double decay_per_second = 0.0;  ///< 0 for a sustained tone
  double decay_harmonic_slope = 0.0;  ///< extra decay per harmonic above the first
};

/// "sine", "piano" (decaying harmonics), "organ" (odd harmonics), "strings".
const std::vector<TimbreProfile>& timbre_profiles();
/// Throws InvalidArgument for an unknown name.
const TimbreProfile& timbre_by_name(const std::string& name);

struct MusicFootage {
  double tone_hz = 440.0;
  std::string timbre = "sine";
  double duration_ms = 200.0;
  std::size_t position = 0;  ///< insertion point in samples, on the frame grid
  AudioClip rendered;
};

/// Sum of the timbre's harmonics below Nyquist, 10 ms raised-cosine fade in
/// and out, scaled to a peak of `amplitude`. Throws InvalidArgument if the
/// tone is at or above Nyquist, or the duration is not positive.
MusicFootage synth_footage(double tone_hz, const std::string& timbre, double duration_ms, double amplitude,
                           int sample_rate);

}  // namespace advmask
