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
#include <filesystem>
#include <vector>

#include "advmask/acoustic_model.hpp"
#include "advmask/corpus.hpp"

namespace advmask {

struct TrainConfig {
  std::vector<int> hidden{128, 128};
  int context = 3;
  int epochs = 12;
  int batch_size = 128;
  double learning_rate = 1e-3;  ///< Adam step size
  double heldout_fraction = 0.2;
  std::uint64_t seed = 1;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double train_frame_accuracy = 0.0;
  double heldout_frame_accuracy = 0.0;
  double heldout_exact_match = 0.0;
};

struct TrainReport {
  std::vector<EpochMetrics> epochs;
  std::size_t train_clips = 0;
  std::size_t heldout_clips = 0;
  /// Fraction of held-out clips whose decode equals the label exactly.
  double heldout_exact_match = 0.0;
};

struct TrainResult {
  AcousticModel model;
  TrainReport report;
};

/// Mini-batch training of the frame classifier on frame-level labels derived
/// from the corpus segments. Throws InvalidArgument for an empty corpus or
/// labels outside the vocabulary. Zero epochs return the initialized model.
TrainResult train(const std::vector<LabeledClip>& corpus, const FeatureChain& chain, const TokenMapper& tokens,
                  const TrainConfig& config);

/// Exact-match rate of transcribe() against the labels.
double exact_match_rate(const AcousticModel& model, const std::vector<LabeledClip>& clips);

/// Versioned JSON container with shapes, vocabulary, feature chain and seed.
void save_model(const AcousticModel& model, const std::filesystem::path& path);
/// Throws FormatError on a version or shape mismatch, IoError if unreadable.
AcousticModel load_model(const std::filesystem::path& path);

}  // namespace advmask
