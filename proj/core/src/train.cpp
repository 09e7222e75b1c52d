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

#include "advmask/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "advmask/error.hpp"

namespace advmask {

namespace {

struct AdamState {
  std::vector<DenseLayer> m, v;
  int step = 0;
};

void adam_update(std::vector<DenseLayer>& params, const std::vector<DenseLayer>& grads, AdamState& st, double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (st.m.empty()) {
    for (const auto& p : params) {
      st.m.push_back({Eigen::MatrixXd::Zero(p.weight.rows(), p.weight.cols()), Eigen::VectorXd::Zero(p.bias.size())});
      st.v.push_back(st.m.back());
    }
  }
  ++st.step;
  const double c1 = 1.0 - std::pow(b1, st.step);
  const double c2 = 1.0 - std::pow(b2, st.step);
  const auto apply = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    apply(params[i].weight, grads[i].weight, st.m[i].weight, st.v[i].weight);
    apply(params[i].bias, grads[i].bias, st.m[i].bias, st.v[i].bias);
  }
}

Eigen::Index argmax_row(const Eigen::MatrixXd& m, Eigen::Index r) {
  Eigen::Index best = 0;
  m.row(r).maxCoeff(&best);
  return best;
}

}  // namespace

double exact_match_rate(const AcousticModel& model, const std::vector<LabeledClip>& clips) {
  if (clips.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& c : clips) hits += transcribe(model, c.audio) == c.label ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(clips.size());
}

TrainResult train(const std::vector<LabeledClip>& corpus, const FeatureChain& chain, const TokenMapper& tokens,
                  const TrainConfig& cfg) {
  if (corpus.empty()) throw InvalidArgument("train: empty corpus");
  if (cfg.epochs < 0 || cfg.batch_size <= 0 || !(cfg.learning_rate > 0.0))
    throw InvalidArgument("train: epochs >= 0, batch_size > 0 and learning_rate > 0 required");
  if (!(cfg.heldout_fraction >= 0.0 && cfg.heldout_fraction < 1.0))
    throw InvalidArgument("train: heldout_fraction must be in [0, 1)");
  for (const auto& c : corpus) validate_transcription(c.label, tokens.vocab_size());

  AcousticModel model = AcousticModel::initialize(chain, tokens, cfg.hidden, cfg.context, cfg.seed);
  std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_held = static_cast<std::size_t>(std::floor(cfg.heldout_fraction * static_cast<double>(corpus.size())));
  std::vector<LabeledClip> heldout;
  std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_held));
  for (std::size_t i = corpus.size() - n_held; i < corpus.size(); ++i) heldout.push_back(corpus[order[i]]);

  TrainResult result{model, {}};
  result.report.train_clips = train_idx.size();
  result.report.heldout_clips = heldout.size();
  if (cfg.epochs == 0) {
    result.report.heldout_exact_match = exact_match_rate(model, heldout);
    return result;
  }

  // Features and frame labels of the training split.
  const auto& fx = model.extractor();
  std::vector<Eigen::MatrixXd> feats;
  std::vector<std::vector<int>> labels;
  Eigen::Index total_frames = 0;
  for (std::size_t i : train_idx) {
    const auto& c = corpus[i];
    const AudioClip audio =
        c.audio.size() < static_cast<std::size_t>(chain.window) ? pad_to(c.audio, chain.window) : c.audio;
    feats.push_back(fx.compute(audio));
    labels.push_back(frame_labels(c, chain.window, chain.hop));
    total_frames += feats.back().rows();
  }

  const int coeffs = chain.coefficient_count();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(coeffs);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(coeffs);
  for (const auto& f : feats) {
    mean += f.colwise().sum().transpose();
    sq += f.array().square().colwise().sum().matrix().transpose();
  }
  mean /= static_cast<double>(total_frames);
  Eigen::VectorXd var = sq / static_cast<double>(total_frames) - mean.cwiseProduct(mean);
  Eigen::VectorXd scale = var.unaryExpr([](double v) { return 1.0 / std::sqrt(std::max(v, 1e-8)); });
  model.set_normalization(mean, scale);

  Eigen::MatrixXd inputs(total_frames, model.input_dim());
  std::vector<int> targets;
  targets.reserve(static_cast<std::size_t>(total_frames));
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const Eigen::MatrixXd in = model.prepare_input(feats[i]);
    inputs.middleRows(row, in.rows()) = in;
    row += in.rows();
    targets.insert(targets.end(), labels[i].begin(), labels[i].end());
  }
  feats.clear();

  AdamState adam;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(total_frames));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<DenseLayer> grads;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(perm.begin(), perm.end(), rng);
    double loss_sum = 0.0;
    Eigen::Index correct = 0;
    for (Eigen::Index start = 0; start < total_frames; start += cfg.batch_size) {
      const Eigen::Index n = std::min<Eigen::Index>(cfg.batch_size, total_frames - start);
      Eigen::MatrixXd batch(n, model.input_dim());
      std::vector<int> batch_labels(static_cast<std::size_t>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = perm[static_cast<std::size_t>(start + j)];
        batch.row(j) = inputs.row(src);
        batch_labels[static_cast<std::size_t>(j)] = targets[static_cast<std::size_t>(src)];
      }
      const ForwardTape tape = model.forward_prepared(batch);
      Eigen::MatrixXd grad_logits;
      loss_sum += cross_entropy(tape.probs, batch_labels, &grad_logits) * static_cast<double>(n);
      for (Eigen::Index j = 0; j < n; ++j)
        correct += argmax_row(tape.probs, j) == batch_labels[static_cast<std::size_t>(j)] ? 1 : 0;
      model.backward(tape, grad_logits, &grads);
      adam_update(model.mutable_layers(), grads, adam, cfg.learning_rate);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(total_frames);
    m.train_frame_accuracy = static_cast<double>(correct) / static_cast<double>(total_frames);
    if (!heldout.empty()) {
      Eigen::Index held_frames = 0, held_correct = 0;
      std::size_t exact = 0;
      for (const auto& c : heldout) {
        const AudioClip audio =
            c.audio.size() < static_cast<std::size_t>(chain.window) ? pad_to(c.audio, chain.window) : c.audio;
        const Eigen::MatrixXd probs = model.forward(fx.compute(audio));
        const auto lab = frame_labels(c, chain.window, chain.hop);
        for (Eigen::Index r = 0; r < probs.rows(); ++r)
          held_correct += argmax_row(probs, r) == lab[static_cast<std::size_t>(r)] ? 1 : 0;
        held_frames += probs.rows();
        exact += decode(probs) == c.label ? 1 : 0;
      }
      m.heldout_frame_accuracy = static_cast<double>(held_correct) / static_cast<double>(held_frames);
      m.heldout_exact_match = static_cast<double>(exact) / static_cast<double>(heldout.size());
    }
    result.report.epochs.push_back(m);
  }
  result.report.heldout_exact_match = result.report.epochs.back().heldout_exact_match;
  result.model = std::move(model);
  return result;
}

}  // namespace advmask
