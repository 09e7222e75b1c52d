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

#include "advmask/masking_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advmask/error.hpp"

namespace advmask {

void BankSpec::validate(int sample_rate) const {
  if (tones_hz.empty() || timbres.empty() || durations_ms.empty())
    throw InvalidArgument("bank: tones, timbres and durations must be non-empty");
  for (double t : tones_hz)
    if (!(t > 0.0) || t >= sample_rate / 2.0) throw InvalidArgument("bank: tone " + std::to_string(t) + " Hz invalid");
  for (const auto& t : timbres) timbre_by_name(t);
  for (double d : durations_ms)
    if (!(d > 0.0)) throw InvalidArgument("bank: durations must be positive");
}

void SearchConfig::validate(int sample_rate) const {
  if (k < 1) throw InvalidArgument("search: k must be >= 1");
  if (!(frame_len_ms > 0.0) || frame_len_ms > kMaxFrameLenMs)
    throw InvalidArgument("search: frame_len_ms must be in (0, 200]");
  if (max_iters < 0) throw InvalidArgument("search: max_iters must be >= 0");
  if (init_attempts < 1) throw InvalidArgument("search: init_attempts must be >= 1");
  if (!(amplitude >= 0.0)) throw InvalidArgument("search: amplitude must be >= 0");
  if (!(max_saturation >= 0.0 && max_saturation <= 1.0)) throw InvalidArgument("search: max_saturation in [0, 1]");
  bank.validate(sample_rate);
}

std::vector<std::size_t> frame_grid(const AudioClip& delta, double frame_len_ms) {
  if (!(frame_len_ms > 0.0) || frame_len_ms > kMaxFrameLenMs)
    throw InvalidArgument("frame_grid: frame length " + std::to_string(frame_len_ms) + " ms outside (0, 200]");
  const auto step =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frame_len_ms * 1e-3 * delta.sample_rate)));
  std::vector<std::size_t> grid{0};
  for (std::size_t p = step; p < delta.size(); p += step) grid.push_back(p);
  return grid;
}

MaskingScorer::MaskingScorer(const AudioClip& delta, int window_size, int hop, bool hinge)
    : delta_(delta),
      window_(window_size),
      hop_(hop),
      hinge_(hinge),
      in_range_(psy::hearing_range_mask(window_size, delta.sample_rate)) {}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> MaskingScorer::overlay(const AudioClip& mixture) const {
  if (mixture.sample_rate != delta_.sample_rate) throw InvalidArgument("score: sample rate mismatch");
  if (mixture.size() < delta_.size()) throw InvalidArgument("score: mixture shorter than delta");
  const auto mt = psy::masking_threshold(mixture, window_, hop_);
  Eigen::MatrixXd theta_delta = psy::psd_matrix(pad_to(delta_, mixture.size()), window_, hop_);
  for (Eigen::Index f = 0; f < theta_delta.rows(); ++f)
    theta_delta.row(f).array() += mt.offsets[static_cast<std::size_t>(f)];
  return {std::move(theta_delta), mt.theta};
}

ScoreDetail MaskingScorer::evaluate(const AudioClip& mixture) const {
  const auto [theta_delta, theta] = overlay(mixture);
  double sum = 0.0;
  std::size_t cells = 0, above = 0;
  for (Eigen::Index f = 0; f < theta.rows(); ++f) {
    for (Eigen::Index k = 0; k < theta.cols(); ++k) {
      if (!in_range_[static_cast<std::size_t>(k)]) continue;
      const double d = theta_delta(f, k) - theta(f, k);
      sum += hinge_ ? std::max(d, 0.0) : std::abs(d);
      above += d > 0.0 ? 1 : 0;
      ++cells;
    }
  }
  if (cells == 0) return {};
  return {sum / static_cast<double>(cells), static_cast<double>(above) / static_cast<double>(cells)};
}

double score(const AudioClip& mixture, const AudioClip& delta, bool hinge) {
  return MaskingScorer(delta, 2048, 512, hinge).evaluate(mixture).v;
}

double masking_coverage(const AudioClip& mixture, const AudioClip& delta) {
  return MaskingScorer(delta).evaluate(mixture).coverage;
}

AudioClip render_mixture(const AudioClip& delta, const std::vector<MusicFootage>& footage, double max_saturation,
                         double* gain_out) {
  AudioClip music = AudioClip::silence(delta.size(), delta.sample_rate);
  for (const auto& f : footage) music = add_unclipped(music, f.rendered, f.position);
  const AudioClip base = pad_to(delta, music.size());

  double gain = 1.0;
  AudioClip sum;
  for (int attempt = 0; attempt < 200; ++attempt) {
    sum = add_unclipped(base, scale(music, gain));
    std::size_t clipped = 0;
    for (double s : sum.samples) clipped += std::abs(s) > 1.0 ? 1 : 0;
    if (static_cast<double>(clipped) <= max_saturation * static_cast<double>(sum.size())) break;
    gain *= 0.9;
  }
  if (gain_out) *gain_out = gain;
  return clip_to_unit(sum);
}

namespace {

class PlacementSpace {
 public:
  PlacementSpace(const SearchConfig& cfg, std::vector<std::size_t> grid, int rate)
      : cfg_(cfg), grid_(std::move(grid)), rate_(rate) {}

  Placement random(std::mt19937_64& rng) const {
    return {pick(rng, cfg_.bank.tones_hz.size()), pick(rng, cfg_.bank.timbres.size()),
            pick(rng, cfg_.bank.durations_ms.size()), pick(rng, grid_.size())};
  }

  // Changes one coordinate to a different value when the axis allows it.
  Placement mutate(Placement p, std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> axis(0, 3);
    const int a = axis(rng);
    const auto redraw = [&](int current, std::size_t n) {
      if (n <= 1) return current;
      std::uniform_int_distribution<int> d(0, static_cast<int>(n) - 2);
      const int v = d(rng);
      return v >= current ? v + 1 : v;
    };
    switch (a) {
      case 0: p.tone = redraw(p.tone, cfg_.bank.tones_hz.size()); break;
      case 1: p.timbre = redraw(p.timbre, cfg_.bank.timbres.size()); break;
      case 2: p.duration = redraw(p.duration, cfg_.bank.durations_ms.size()); break;
      default: p.position = redraw(p.position, grid_.size()); break;
    }
    return p;
  }

  MusicFootage render(const Placement& p) const {
    auto f = synth_footage(cfg_.bank.tones_hz[static_cast<std::size_t>(p.tone)],
                           cfg_.bank.timbres[static_cast<std::size_t>(p.timbre)],
                           cfg_.bank.durations_ms[static_cast<std::size_t>(p.duration)], cfg_.amplitude, rate_);
    f.position = grid_[static_cast<std::size_t>(p.position)];
    return f;
  }

 private:
  static int pick(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(0, static_cast<int>(n) - 1);
    return d(rng);
  }

  const SearchConfig& cfg_;
  std::vector<std::size_t> grid_;
  int rate_;
};

struct Evaluated {
  std::vector<Placement> indices;
  std::vector<MusicFootage> footage;
  AudioClip mixture;
  double gain = 1.0;
  ScoreDetail score;
  Transcription decoded;
};

}  // namespace

MaskedSample search(const AudioClip& delta, const Transcription& target, const AcousticModel& model,
                    const SearchConfig& cfg) {
  cfg.validate(delta.sample_rate);
  if (transcribe(model, delta) != target) throw PreconditionError("search: delta does not decode to the target");

  std::mt19937_64 rng(cfg.seed);
  const PlacementSpace space(cfg, frame_grid(delta, cfg.frame_len_ms), delta.sample_rate);
  const MaskingScorer scorer(delta, cfg.window_size, cfg.hop, cfg.hinge);

  const auto evaluate = [&](std::vector<Placement> indices) {
    Evaluated e;
    e.indices = std::move(indices);
    for (const auto& p : e.indices) e.footage.push_back(space.render(p));
    e.mixture = render_mixture(delta, e.footage, cfg.max_saturation, &e.gain);
    e.score = scorer.evaluate(e.mixture);
    e.decoded = transcribe(model, e.mixture);
    return e;
  };

  Evaluated current;
  for (int attempt = 0; attempt < cfg.init_attempts; ++attempt) {
    std::vector<Placement> init;
    for (int i = 0; i < cfg.k; ++i) init.push_back(space.random(rng));
    current = evaluate(std::move(init));
    if (current.decoded == target) break;
  }

  MaskedSample out;
  out.initial_score = current.score.v;
  out.score_trace.push_back(current.score.v);
  bool have_best = current.decoded == target;
  double v_best = have_best ? current.score.v : std::numeric_limits<double>::infinity();
  out.accepted = have_best ? 1 : 0;
  out.best_trace.push_back(v_best);

  for (int it = 0; it < cfg.max_iters; ++it) {
    std::uniform_int_distribution<int> which(0, cfg.k - 1);
    auto indices = current.indices;
    const auto j = static_cast<std::size_t>(which(rng));
    indices[j] = space.mutate(indices[j], rng);
    Evaluated cand = evaluate(std::move(indices));
    out.score_trace.push_back(cand.score.v);
    if (cand.score.v < v_best && cand.decoded == target) {
      v_best = cand.score.v;
      current = std::move(cand);
      have_best = true;
      ++out.accepted;
    }
    out.best_trace.push_back(v_best);
  }

  if (!have_best) {
    const ScoreDetail alone = scorer.evaluate(delta);
    out.mixture = delta;
    out.score = alone.v;
    out.coverage = alone.coverage;
    out.transcription = transcribe(model, delta);
    out.masked = false;
    return out;
  }
  out.mixture = current.mixture;
  out.placements = current.footage;
  out.indices = current.indices;
  out.score = v_best;
  out.coverage = current.score.coverage;
  out.transcription = current.decoded;
  out.music_gain = current.gain;
  return out;
}

}  // namespace advmask
