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
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "advmask/audio.hpp"
#include "advmask/features.hpp"
#include "advmask/tokens.hpp"

namespace advmask {

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< out x in
  Eigen::VectorXd bias;

  friend bool operator==(const DenseLayer& a, const DenseLayer& b) { return a.weight == b.weight && a.bias == b.bias; }
};

/// Activations kept by forward_with_tape() for backpropagation.
struct ForwardTape {
  Eigen::MatrixXd input;                    ///< frames x input_dim, normalized and context-stacked
  std::vector<Eigen::MatrixXd> activations;  ///< tanh outputs of the hidden layers
  Eigen::MatrixXd probs;                    ///< frames x vocab
};

/// Frame classifier: normalized log-mel frames with +/- `context` neighbours,
/// tanh hidden layers and a softmax over the vocabulary (blank = 0).
class AcousticModel {
 public:
  AcousticModel(FeatureChain chain, TokenMapper tokens, int context, std::vector<DenseLayer> layers,
                Eigen::VectorXd feature_mean, Eigen::VectorXd feature_scale, std::uint64_t seed);

  /// Gaussian-initialized weights scaled by 1/sqrt(fan_in), zero biases,
  /// identity feature normalization.
  static AcousticModel initialize(const FeatureChain& chain, const TokenMapper& tokens, const std::vector<int>& hidden,
                                  int context, std::uint64_t seed);

  const FeatureChain& chain() const noexcept { return extractor_->chain(); }
  const FeatureExtractor& extractor() const noexcept { return *extractor_; }
  const TokenMapper& tokens() const noexcept { return tokens_; }
  int context() const noexcept { return context_; }
  int vocab_size() const noexcept { return tokens_.vocab_size(); }
  int input_dim() const noexcept { return (2 * context_ + 1) * chain().coefficient_count(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }
  const Eigen::VectorXd& feature_mean() const noexcept { return feature_mean_; }
  const Eigen::VectorXd& feature_scale() const noexcept { return feature_scale_; }
  void set_normalization(Eigen::VectorXd mean, Eigen::VectorXd scale);

  /// Normalizes and stacks context frames (edge frames are replicated).
  Eigen::MatrixXd prepare_input(const Eigen::MatrixXd& features) const;

  /// Row-wise softmax probabilities. Throws InvalidArgument on a width mismatch.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& features) const;
  ForwardTape forward_with_tape(const Eigen::MatrixXd& features) const;
  /// Same, starting from an already prepared input matrix.
  ForwardTape forward_prepared(const Eigen::MatrixXd& input) const;

  /// Backpropagates a gradient on the logits. Fills `layer_grads` (same
  /// shapes as layers()) when non-null and returns the gradient on the
  /// prepared input matrix.
  Eigen::MatrixXd backward(const ForwardTape& tape, const Eigen::MatrixXd& grad_logits,
                           std::vector<DenseLayer>* layer_grads) const;

  /// Maps a gradient on the prepared input back to the raw feature matrix.
  Eigen::MatrixXd unprepare_gradient(const Eigen::MatrixXd& grad_input, Eigen::Index frames) const;

  friend bool operator==(const AcousticModel& a, const AcousticModel& b);

 private:
  std::shared_ptr<const FeatureExtractor> extractor_;
  TokenMapper tokens_;
  int context_;
  std::vector<DenseLayer> layers_;
  Eigen::VectorXd feature_mean_;
  Eigen::VectorXd feature_scale_;
  std::uint64_t seed_;
};

/// Per-frame argmax, collapse adjacent repeats, drop blanks.
Transcription decode(const Eigen::MatrixXd& probs);

/// Token t of T owns frames [tF/T, (t+1)F/T). An empty target aligns every
/// frame to blank.
std::vector<int> uniform_alignment(std::size_t frames, const Transcription& target);

/// Mean frame cross-entropy and the matching gradient on the logits.
double cross_entropy(const Eigen::MatrixXd& probs, const std::vector<int>& labels, Eigen::MatrixXd* grad_logits);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  ///< d loss / d sample, same length as the clip
  Eigen::MatrixXd probs;
};

/// Targeted loss against the uniform alignment of `target`.
double loss(const AcousticModel& model, const AudioClip& clip, const Transcription& target);
LossGradient loss_and_grad(const AcousticModel& model, const AudioClip& clip, const Transcription& target);
AudioClip grad_input(const AcousticModel& model, const AudioClip& clip, const Transcription& target);

/// decode(forward(features(clip))). Clips shorter than one window are zero-padded.
Transcription transcribe(const AcousticModel& model, const AudioClip& clip);

}  // namespace advmask
