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

#include <Eigen/Core>

#include "advmask/acoustic_model.hpp"
#include "advmask/audio.hpp"
#include "advmask/footage.hpp"
#include "advmask/psychoacoustics.hpp"

namespace advmask {

inline constexpr double kMaxFrameLenMs = 200.0;

/// Candidate footage values the search may combine.
struct BankSpec {
  std::vector<double> tones_hz{3136.0, 3520.0, 3951.0, 4186.0, 4699.0};
  std::vector<std::string> timbres{"sine", "piano", "organ"};
  std::vector<double> durations_ms{200.0, 400.0};

  void validate(int sample_rate) const;
};

struct SearchConfig {
  int k = 2;                   ///< footage pieces in the mixture
  double frame_len_ms = 200.0; ///< insertion grid step, at most 200 ms
  int max_iters = 500;
  int init_attempts = 20;  ///< random initial draws tried until one preserves the target
  std::uint64_t seed = 1;
  BankSpec bank;
  double amplitude = 0.05;     ///< footage peak amplitude
  bool hinge = false;          ///< score mean(max(theta_delta - theta, 0)) instead of mean |.|
  double max_saturation = 0.01;  ///< largest tolerated fraction of clipped mixture samples
  int window_size = 2048;
  int hop = 512;

  void validate(int sample_rate) const;
};

/// Bank indices of one footage piece.
struct Placement {
  int tone = 0;
  int timbre = 0;
  int duration = 0;
  int position = 0;  ///< index into the frame grid

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct MaskedSample {
  AudioClip mixture;
  std::vector<MusicFootage> placements;
  std::vector<Placement> indices;
  double score = 0.0;          ///< v_best
  double initial_score = 0.0;  ///< v_t of the initial mixture
  double coverage = 0.0;       ///< fraction of cells with theta_delta > theta
  Transcription transcription;
  bool masked = true;  ///< false when no mixture preserved the target and delta is returned alone
  double music_gain = 1.0;
  int accepted = 0;
  std::vector<double> score_trace;  ///< v_t per evaluated candidate
  std::vector<double> best_trace;   ///< v_best after each candidate
};

/// Insertion points (samples) at multiples of frame_len covering the clip;
/// {0} for clips shorter than one frame. Throws InvalidArgument when
/// frame_len exceeds 200 ms or is not positive.
std::vector<std::size_t> frame_grid(const AudioClip& delta, double frame_len_ms);

struct ScoreDetail {
  double v = 0.0;
  double coverage = 0.0;
};

/// Scores mixtures against a fixed perturbation. The perturbation's PSD is
/// computed once; each mixture contributes its masking threshold and
/// per-frame normalization offset, which also shifts the perturbation's PSD.
/// Only bins in the 20 Hz - 20 kHz range are averaged.
class MaskingScorer {
 public:
  MaskingScorer(const AudioClip& delta, int window_size = 2048, int hop = 512, bool hinge = false);

  /// Throws InvalidArgument on a rate mismatch or a mixture shorter than delta.
  ScoreDetail evaluate(const AudioClip& mixture) const;

  /// theta_delta and theta on the same dB scale, frames x bins.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> overlay(const AudioClip& mixture) const;

 private:
  AudioClip delta_;
  int window_;
  int hop_;
  bool hinge_;
  std::vector<bool> in_range_;
};

/// v_t = mean over frames and in-range bins of |theta_delta - theta|.
double score(const AudioClip& mixture, const AudioClip& delta, bool hinge = false);

/// Fraction of in-range cells where the perturbation exceeds the threshold.
double masking_coverage(const AudioClip& mixture, const AudioClip& delta);

/// Renders delta plus the footage described by `placements`; the music gain is
/// reduced in 10% steps until at most `max_saturation` of samples clip.
AudioClip render_mixture(const AudioClip& delta, const std::vector<MusicFootage>& footage, double max_saturation,
                         double* gain_out = nullptr);

/// Heuristic search over placements. Each iteration mutates one coordinate of
/// one piece and accepts iff the score improves and the mixture still decodes
/// to the target. Throws PreconditionError if delta does not decode to target.
MaskedSample search(const AudioClip& delta, const Transcription& target, const AcousticModel& model,
                    const SearchConfig& cfg);

}  // namespace advmask
