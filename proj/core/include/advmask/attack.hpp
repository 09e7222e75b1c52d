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
#include <vector>

#include "advmask/acoustic_model.hpp"
#include "advmask/audio.hpp"

namespace advmask {

struct AttackConfig {
  double epsilon = 0.15;       ///< infinity-norm bound of the first stage
  double lr = 5e-3;            ///< step size of both stages
  double sigma = 0.01;         ///< std-dev of the injected Gaussian noise
  int max_iters = 3000;        ///< first-stage iteration budget
  int refine_iters = 1000;     ///< second-stage iteration budget
  double alpha_value = 1000.0; ///< weight of the energy term once the target is reached
  double alpha_init = 0.001;   ///< weight used by a standalone refinement run
  std::uint64_t seed = 7;
  std::size_t duration = 16000;  ///< samples of the perturbation
  int check_interval = 10;       ///< iterations between noise-free transcription checks

  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
};

struct AttackResult {
  AudioClip delta;
  Transcription achieved;
  bool success = false;
  int iterations_used = 0;
  std::vector<double> loss_trace;  ///< one entry per iteration
  double l2_energy = 0.0;          ///< mean squared amplitude of delta
};

/// Mean squared amplitude of delta.
double energy_penalty(const AudioClip& delta);

/// Sign-gradient stage: starting from silence, every iteration draws fresh
/// noise z ~ N(0, sigma^2), steps delta against sign(grad loss(delta + z)) and
/// clips to [-epsilon, epsilon]. Stops at the first noise-free check (every
/// check_interval iterations, including iteration 0) whose decode equals the
/// target, or after max_iters.
AttackResult stage1(const AcousticModel& model, const Transcription& target, const AttackConfig& cfg);

/// Refinement stage: unclipped gradient descent on loss(delta + z) +
/// alpha_init * energy_penalty(delta), starting from `start`. Keeps the
/// lowest-energy iterate that still decodes to the target.
/// Throws PreconditionError if `start` did not succeed.
AttackResult stage2(const AcousticModel& model, const AttackResult& start, const Transcription& target,
                    const AttackConfig& cfg);

/// stage1, then stage2 with the energy weight switched to alpha_value.
AttackResult generate(const AcousticModel& model, const Transcription& target, const AttackConfig& cfg);

/// Fraction of `trials` noise draws at `sigma` for which delta + z still
/// decodes to the target.
double noise_robustness(const AcousticModel& model, const AudioClip& delta, const Transcription& target, double sigma,
                        int trials, std::uint64_t seed);

}  // namespace advmask
