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

#include "advmask/attack.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "advmask/error.hpp"

namespace advmask {

void AttackConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("attack: epsilon must be > 0");
  if (!(lr >= 0.0)) throw InvalidArgument("attack: lr must be >= 0");
  if (!(sigma >= 0.0)) throw InvalidArgument("attack: sigma must be >= 0");
  if (!(alpha_init >= 0.0) || !(alpha_value >= 0.0)) throw InvalidArgument("attack: alpha must be >= 0");
  if (max_iters < 0 || refine_iters < 0) throw InvalidArgument("attack: iteration budgets must be >= 0");
  if (check_interval <= 0) throw InvalidArgument("attack: check_interval must be > 0");
  if (duration == 0) throw InvalidArgument("attack: duration must be > 0");
}

double energy_penalty(const AudioClip& delta) {
  if (delta.empty()) return 0.0;
  return energy(delta.samples) / static_cast<double>(delta.size());
}

namespace {

AudioClip with_noise(const AudioClip& delta, double sigma, std::mt19937_64& rng) {
  if (sigma == 0.0) return delta;
  std::normal_distribution<double> gauss(0.0, sigma);
  AudioClip out = delta;
  for (double& s : out.samples) s += gauss(rng);
  return out;
}

}  // namespace

AttackResult stage1(const AcousticModel& model, const Transcription& target, const AttackConfig& cfg) {
  cfg.validate();
  validate_transcription(target, model.vocab_size());
  const std::size_t length = std::max(cfg.duration, static_cast<std::size_t>(model.chain().window));

  std::mt19937_64 rng(cfg.seed);
  AttackResult r;
  r.delta = AudioClip::silence(length, model.chain().sample_rate);

  for (int it = 0;; ++it) {
    if (it % cfg.check_interval == 0 || it == cfg.max_iters) {
      r.achieved = transcribe(model, r.delta);
      if (r.achieved == target) {
        r.success = true;
        r.iterations_used = it;
        break;
      }
    }
    if (it == cfg.max_iters) {
      r.iterations_used = it;
      break;
    }
    const AudioClip noisy = with_noise(r.delta, cfg.sigma, rng);
    const LossGradient lg = loss_and_grad(model, noisy, target);
    r.loss_trace.push_back(lg.loss);
    for (std::size_t i = 0; i < length; ++i) {
      const double g = lg.grad[i];
      const double step = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
      r.delta.samples[i] = std::clamp(r.delta.samples[i] - cfg.lr * step, -cfg.epsilon, cfg.epsilon);
    }
  }
  r.l2_energy = energy_penalty(r.delta);
  return r;
}

AttackResult stage2(const AcousticModel& model, const AttackResult& start, const Transcription& target,
                    const AttackConfig& cfg) {
  cfg.validate();
  validate_transcription(target, model.vocab_size());
  if (!start.success) throw PreconditionError("stage2: starting perturbation does not reach the target");

  std::mt19937_64 rng(cfg.seed ^ 0xD1B54A32D192ED03ULL);
  AttackResult best = start;
  best.l2_energy = energy_penalty(start.delta);
  AudioClip delta = start.delta;
  const double n = static_cast<double>(delta.size());
  int used = 0;

  for (int it = 1; it <= cfg.refine_iters; ++it) {
    const AudioClip noisy = with_noise(delta, cfg.sigma, rng);
    const LossGradient lg = loss_and_grad(model, noisy, target);
    const double penalty = energy_penalty(delta);
    best.loss_trace.push_back(lg.loss + cfg.alpha_init * penalty);
    for (std::size_t i = 0; i < delta.size(); ++i)
      delta.samples[i] -= cfg.lr * (lg.grad[i] + cfg.alpha_init * 2.0 * delta.samples[i] / n);
    used = it;

    if (it % cfg.check_interval == 0 || it == cfg.refine_iters) {
      const double e = energy_penalty(delta);
      if (e < best.l2_energy && transcribe(model, delta) == target) {
        best.delta = delta;
        best.l2_energy = e;
        best.achieved = target;
      }
    }
  }
  best.iterations_used = start.iterations_used + used;
  return best;
}

AttackResult generate(const AcousticModel& model, const Transcription& target, const AttackConfig& cfg) {
  AttackResult first = stage1(model, target, cfg);
  // A zero perturbation has no energy left to remove.
  if (!first.success || first.l2_energy == 0.0) return first;
  AttackConfig refine = cfg;
  refine.alpha_init = cfg.alpha_value;
  return stage2(model, first, target, refine);
}

double noise_robustness(const AcousticModel& model, const AudioClip& delta, const Transcription& target, double sigma,
                        int trials, std::uint64_t seed) {
  if (trials <= 0) return 0.0;
  std::mt19937_64 rng(seed);
  int hits = 0;
  for (int t = 0; t < trials; ++t) hits += transcribe(model, with_noise(delta, sigma, rng)) == target ? 1 : 0;
  return static_cast<double>(hits) / trials;
}

}  // namespace advmask
