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

#include "advmask/audio.hpp"

namespace advmask {

/// One simulated play-and-record hop. Identity parameters (low_rate 0 or
/// equal to the clip rate, zero jitter, zero noise, zero reverb mix) leave
/// the clip unchanged.
struct ChannelParams {
  int low_rate = 12000;          ///< resample down to this rate and back; 0 disables
  double gain_jitter_db = 1.0;   ///< uniform gain in [-j, +j] dB
  double noise_sigma = 0.002;    ///< additive white noise
  double reverb_decay_ms = 30.0; ///< time for the reverb tail to fall by 60 dB
  double reverb_length_ms = 60.0;
  double reverb_mix = 0.2;       ///< tail weight relative to the direct path
  std::uint64_t seed = 1;

  static ChannelParams identity();
  void validate() const;
};

/// Impulse response with a unit direct path followed by an exponentially
/// decaying tail.
std::vector<double> reverb_kernel(const ChannelParams& p, int sample_rate);

/// Applies one hop; `hop_index` decorrelates randomness across hops.
AudioClip relay_hop(const AudioClip& clip, const ChannelParams& p, int hop_index);

/// Applies `hops` hops in sequence. Throws InvalidArgument when hops < 1.
AudioClip relay_simulate(const AudioClip& clip, int hops, const ChannelParams& per_hop);

/// Scale-invariant signal-to-distortion ratio in dB of `estimate` against
/// `reference` over their common length.
double si_sdr(const AudioClip& reference, const AudioClip& estimate);

}  // namespace advmask
