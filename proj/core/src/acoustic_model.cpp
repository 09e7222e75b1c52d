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

#include "advmask/acoustic_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "advmask/error.hpp"

namespace advmask {

AcousticModel::AcousticModel(FeatureChain chain, TokenMapper tokens, int context, std::vector<DenseLayer> layers,
                             Eigen::VectorXd feature_mean, Eigen::VectorXd feature_scale, std::uint64_t seed)
    : extractor_(std::make_shared<const FeatureExtractor>(chain)),
      tokens_(std::move(tokens)),
      context_(context),
      layers_(std::move(layers)),
      feature_mean_(std::move(feature_mean)),
      feature_scale_(std::move(feature_scale)),
      seed_(seed) {
  if (context_ < 0) throw InvalidArgument("context must be >= 0");
  if (layers_.empty()) throw InvalidArgument("model needs at least one layer");
  const int coeffs = chain.coefficient_count();
  if (feature_mean_.size() != coeffs || feature_scale_.size() != coeffs)
    throw InvalidArgument("feature normalization size mismatch");
  Eigen::Index in = input_dim();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weight.cols() != in || l.bias.size() != l.weight.rows())
      throw InvalidArgument("layer " + std::to_string(i) + " shape mismatch");
    in = l.weight.rows();
  }
  if (in != vocab_size()) throw InvalidArgument("output layer width must equal vocabulary size");
}

AcousticModel AcousticModel::initialize(const FeatureChain& chain, const TokenMapper& tokens,
                                        const std::vector<int>& hidden, int context, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<DenseLayer> layers;
  int in = (2 * context + 1) * chain.coefficient_count();
  std::vector<int> widths = hidden;
  widths.push_back(tokens.vocab_size());
  for (int out : widths) {
    if (out <= 0) throw InvalidArgument("layer widths must be positive");
    DenseLayer l;
    l.weight.resize(out, in);
    const double s = 1.0 / std::sqrt(static_cast<double>(in));
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = s * gauss(rng);
    l.bias = Eigen::VectorXd::Zero(out);
    layers.push_back(std::move(l));
    in = out;
  }
  const int c = chain.coefficient_count();
  return AcousticModel(chain, tokens, context, std::move(layers), Eigen::VectorXd::Zero(c), Eigen::VectorXd::Ones(c),
                       seed);
}

void AcousticModel::set_normalization(Eigen::VectorXd mean, Eigen::VectorXd scale) {
  if (mean.size() != feature_mean_.size() || scale.size() != feature_scale_.size())
    throw InvalidArgument("feature normalization size mismatch");
  feature_mean_ = std::move(mean);
  feature_scale_ = std::move(scale);
}

Eigen::MatrixXd AcousticModel::prepare_input(const Eigen::MatrixXd& features) const {
  const Eigen::Index c = chain().coefficient_count();
  if (features.cols() != c)
    throw InvalidArgument("feature width " + std::to_string(features.cols()) + " != model width " + std::to_string(c));
  const Eigen::Index frames = features.rows();
  Eigen::MatrixXd norm = (features.rowwise() - feature_mean_.transpose()).array().rowwise() *
                         feature_scale_.transpose().array();
  Eigen::MatrixXd out(frames, input_dim());
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int d = -context_; d <= context_; ++d) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t + d, 0, frames - 1);
      out.block(t, (d + context_) * c, 1, c) = norm.row(src);
    }
  }
  return out;
}

Eigen::MatrixXd AcousticModel::unprepare_gradient(const Eigen::MatrixXd& grad_input, Eigen::Index frames) const {
  const Eigen::Index c = chain().coefficient_count();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(frames, c);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int d = -context_; d <= context_; ++d) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t + d, 0, frames - 1);
      grad.row(src) += grad_input.block(t, (d + context_) * c, 1, c);
    }
  }
  return grad.array().rowwise() * feature_scale_.transpose().array();
}

namespace {

void softmax_rows(Eigen::MatrixXd& logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    logits.row(r) = (logits.row(r).array() - mx).exp();
    logits.row(r) /= logits.row(r).sum();
  }
}

}  // namespace

ForwardTape AcousticModel::forward_prepared(const Eigen::MatrixXd& input) const {
  if (input.cols() != input_dim()) throw InvalidArgument("prepared input width mismatch");
  ForwardTape tape;
  tape.input = input;
  const Eigen::MatrixXd* x = &tape.input;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    Eigen::MatrixXd a = ((*x) * layers_[i].weight.transpose()).rowwise() + layers_[i].bias.transpose();
    tape.activations.push_back(a.array().tanh().matrix());
    x = &tape.activations.back();
  }
  Eigen::MatrixXd logits = ((*x) * layers_.back().weight.transpose()).rowwise() + layers_.back().bias.transpose();
  softmax_rows(logits);
  tape.probs = std::move(logits);
  return tape;
}

ForwardTape AcousticModel::forward_with_tape(const Eigen::MatrixXd& features) const {
  return forward_prepared(prepare_input(features));
}

Eigen::MatrixXd AcousticModel::forward(const Eigen::MatrixXd& features) const {
  return forward_with_tape(features).probs;
}

Eigen::MatrixXd AcousticModel::backward(const ForwardTape& tape, const Eigen::MatrixXd& grad_logits,
                                        std::vector<DenseLayer>* layer_grads) const {
  if (layer_grads) layer_grads->resize(layers_.size());
  Eigen::MatrixXd grad = grad_logits;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Eigen::MatrixXd& in = i == 0 ? tape.input : tape.activations[i - 1];
    if (layer_grads) {
      (*layer_grads)[i].weight = grad.transpose() * in;
      (*layer_grads)[i].bias = grad.colwise().sum().transpose();
    }
    Eigen::MatrixXd grad_in = grad * layers_[i].weight;
    if (i > 0) {
      const auto& act = tape.activations[i - 1];
      grad_in.array() *= 1.0 - act.array().square();
    }
    grad = std::move(grad_in);
  }
  return grad;
}

bool operator==(const AcousticModel& a, const AcousticModel& b) {
  return a.chain() == b.chain() && a.tokens_ == b.tokens_ && a.context_ == b.context_ && a.layers_ == b.layers_ &&
         a.feature_mean_ == b.feature_mean_ && a.feature_scale_ == b.feature_scale_ && a.seed_ == b.seed_;
}

Transcription decode(const Eigen::MatrixXd& probs) {
  Transcription t;
  int prev = -1;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    Eigen::Index best = 0;
    probs.row(r).maxCoeff(&best);
    const int tok = static_cast<int>(best);
    if (tok != prev && tok != kBlank) t.tokens.push_back(tok);
    prev = tok;
  }
  return t;
}

std::vector<int> uniform_alignment(std::size_t frames, const Transcription& target) {
  std::vector<int> labels(frames, kBlank);
  const std::size_t n = target.tokens.size();
  if (n == 0) return labels;
  for (std::size_t f = 0; f < frames; ++f) labels[f] = target.tokens[(f * n) / frames];
  return labels;
}

double cross_entropy(const Eigen::MatrixXd& probs, const std::vector<int>& labels, Eigen::MatrixXd* grad_logits) {
  const Eigen::Index frames = probs.rows();
  if (static_cast<std::size_t>(frames) != labels.size()) throw InvalidArgument("label count != frame count");
  if (frames == 0) {
    if (grad_logits) grad_logits->resize(0, probs.cols());
    return 0.0;
  }
  double total = 0.0;
  for (Eigen::Index f = 0; f < frames; ++f) {
    const double p = probs(f, labels[static_cast<std::size_t>(f)]);
    total -= std::log(std::max(p, 1e-300));
  }
  if (grad_logits) {
    *grad_logits = probs;
    for (Eigen::Index f = 0; f < frames; ++f) (*grad_logits)(f, labels[static_cast<std::size_t>(f)]) -= 1.0;
    *grad_logits /= static_cast<double>(frames);
  }
  return total / static_cast<double>(frames);
}

namespace {

AudioClip padded_to_window(const AcousticModel& model, const AudioClip& clip) {
  const auto w = static_cast<std::size_t>(model.chain().window);
  return clip.size() < w ? pad_to(clip, w) : clip;
}

}  // namespace

LossGradient loss_and_grad(const AcousticModel& model, const AudioClip& clip, const Transcription& target) {
  validate_transcription(target, model.vocab_size());
  const auto& fx = model.extractor();
  const FeatureTape ftape = fx.compute_with_tape(clip);
  const ForwardTape tape = model.forward_with_tape(ftape.features);
  const auto labels = uniform_alignment(static_cast<std::size_t>(tape.probs.rows()), target);
  Eigen::MatrixXd grad_logits;
  LossGradient out;
  out.loss = cross_entropy(tape.probs, labels, &grad_logits);
  const Eigen::MatrixXd grad_in = model.backward(tape, grad_logits, nullptr);
  const Eigen::MatrixXd grad_feat = model.unprepare_gradient(grad_in, tape.probs.rows());
  out.grad = fx.backward(ftape, grad_feat);
  out.probs = tape.probs;
  return out;
}

double loss(const AcousticModel& model, const AudioClip& clip, const Transcription& target) {
  validate_transcription(target, model.vocab_size());
  const Eigen::MatrixXd probs = model.forward(model.extractor().compute(clip));
  return cross_entropy(probs, uniform_alignment(static_cast<std::size_t>(probs.rows()), target), nullptr);
}

AudioClip grad_input(const AcousticModel& model, const AudioClip& clip, const Transcription& target) {
  return {loss_and_grad(model, clip, target).grad, clip.sample_rate};
}

Transcription transcribe(const AcousticModel& model, const AudioClip& clip) {
  return decode(model.forward(model.extractor().compute(padded_to_window(model, clip))));
}

}  // namespace advmask
