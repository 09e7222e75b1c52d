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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "advmask/attack.hpp"
#include "advmask/corpus.hpp"
#include "advmask/error.hpp"
#include "advmask/masking_search.hpp"
#include "fixture.hpp"

namespace advmask {
namespace {

using testing::fixture_model;

// v_t evaluated from the mixture's threshold and a direct PSD of delta.
std::pair<double, double> score_oracle(const AudioClip& mixture, const AudioClip& delta, bool hinge) {
  const auto mt = psy::masking_threshold(mixture);
  const auto s = stft(pad_to(delta, mixture.size()));
  double sum = 0.0;
  std::size_t cells = 0, above = 0;
  for (Eigen::Index f = 0; f < s.num_frames(); ++f)
    for (Eigen::Index k = 0; k < s.num_bins(); ++k) {
      const double freq = static_cast<double>(k) * mixture.sample_rate / 2048.0;
      if (freq < 20.0 || freq > 20000.0) continue;
      const double mag2 = std::norm(s.frames(f, k) / 2048.0);
      const double p = mag2 > 0.0 ? std::max(10.0 * std::log10(mag2), -200.0) : -200.0;
      const double d = p + mt.offsets[static_cast<std::size_t>(f)] - mt.theta(f, k);
      sum += hinge ? std::max(d, 0.0) : std::abs(d);
      above += d > 0.0;
      ++cells;
    }
  return {sum / static_cast<double>(cells), static_cast<double>(above) / static_cast<double>(cells)};
}

AudioClip noisy_tone(std::size_t n, std::uint64_t seed) {
  auto c = sine(1200.0, 0.05, n, 16000);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.005);
  for (double& v : c.samples) v += d(rng);
  return c;
}

TEST(FrameGrid, Examples) {
  const auto one_second = AudioClip::silence(16000, 16000);
  EXPECT_EQ(frame_grid(one_second, 200.0), (std::vector<std::size_t>{0, 3200, 6400, 9600, 12800}));
  EXPECT_THROW(frame_grid(one_second, 250.0), InvalidArgument);
  EXPECT_THROW(frame_grid(one_second, 0.0), InvalidArgument);
  EXPECT_EQ(frame_grid(AudioClip::silence(1000, 16000), 200.0), std::vector<std::size_t>{0});
  for (double ms : {10.0, 50.0, 125.0, 200.0}) {
    const auto grid = frame_grid(one_second, ms);
    const auto step = static_cast<std::size_t>(std::llround(ms * 16.0));
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i], i * step);
    EXPECT_LT(grid.back(), 16000u);
    EXPECT_GE(grid.back() + step, 16000u);
  }
}

TEST(Score, MatchesDirectEvaluation) {
  const auto delta = noisy_tone(8000, 1);
  const auto music = synth_footage(1500.0, "piano", 200.0, 0.3, 16000);
  const auto mixture = mix(delta, music.rendered, 3200);
  for (bool hinge : {false, true}) {
    const auto [v, cov] = score_oracle(mixture, delta, hinge);
    const auto got = MaskingScorer(delta, 2048, 512, hinge).evaluate(mixture);
    EXPECT_NEAR(got.v, v, 1e-9 * std::abs(v));
    EXPECT_DOUBLE_EQ(got.coverage, cov);
    EXPECT_DOUBLE_EQ(score(mixture, delta, hinge), got.v);
  }
}

TEST(Score, SilentDeltaSitsOnTheFloor) {
  const auto mixture = noisy_tone(6000, 2);
  const auto silent = AudioClip::silence(6000, 16000);
  const auto [theta_delta, theta] = MaskingScorer(silent).overlay(mixture);
  const auto mt = psy::masking_threshold(mixture);
  for (Eigen::Index f = 0; f < theta_delta.rows(); ++f)
    for (Eigen::Index k = 0; k < theta_delta.cols(); ++k)
      EXPECT_DOUBLE_EQ(theta_delta(f, k), psy::kPsdFloorDb + mt.offsets[static_cast<std::size_t>(f)]);
  EXPECT_NEAR(score(mixture, silent), score_oracle(mixture, silent, false).first, 1e-9);
  EXPECT_EQ(masking_coverage(mixture, silent), 0.0);
}

TEST(Score, SelfMixtureComparesPsdWithItsOwnThreshold) {
  const auto delta = noisy_tone(6000, 3);
  const auto [theta_delta, theta] = MaskingScorer(delta).overlay(delta);
  const auto mt = psy::masking_threshold(delta);
  EXPECT_LT((theta_delta - mt.normalized_psd).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Score, OverlappingToneMasksBetterThanDisjoint) {
  // Delta occupies the first half; the same footage goes on top of it or after it.
  auto delta = AudioClip::silence(16000, 16000);
  delta = mix(delta, noisy_tone(6400, 4));
  const auto music = synth_footage(1200.0, "sine", 400.0, 0.5, 16000);
  const double overlapping = score(mix(delta, music.rendered, 0), delta);
  const double disjoint = score(mix(delta, music.rendered, 9600), delta);
  EXPECT_LT(overlapping, disjoint);
}

TEST(Score, RejectsMismatchedInputs) {
  const auto delta = noisy_tone(4000, 5);
  EXPECT_THROW(score(AudioClip::silence(4000, 8000), delta), InvalidArgument);
  EXPECT_THROW(score(AudioClip::silence(3000, 16000), delta), InvalidArgument);
}

TEST(RenderMixture, CapsSaturation) {
  const auto delta = noisy_tone(8000, 6);
  std::vector<MusicFootage> loud{synth_footage(3136.0, "organ", 400.0, 1.0, 16000),
                                 synth_footage(3520.0, "organ", 400.0, 1.0, 16000)};
  double gain = 0.0;
  const auto m = render_mixture(delta, loud, 0.01, &gain);
  EXPECT_LT(gain, 1.0);
  EXPECT_LE(peak(m.samples), 1.0);
  // Re-render without the final clip to count the saturated samples.
  auto raw = delta;
  for (auto& f : loud) raw = add_unclipped(raw, scale(f.rendered, gain), f.position);
  std::size_t clipped = 0;
  for (double v : raw.samples) clipped += std::abs(v) > 1.0;
  EXPECT_LE(static_cast<double>(clipped), 0.01 * raw.size());
  double quiet_gain = 0.0;
  render_mixture(delta, {synth_footage(3136.0, "sine", 200.0, 0.05, 16000)}, 0.01, &quiet_gain);
  EXPECT_EQ(quiet_gain, 1.0);
}

TEST(SearchConfig, ValidateRejectsBadValues) {
  SearchConfig c;
  c.k = 0;
  EXPECT_THROW(c.validate(16000), InvalidArgument);
  c = {};
  c.frame_len_ms = 201.0;
  EXPECT_THROW(c.validate(16000), InvalidArgument);
  c = {};
  c.bank.tones_hz = {9000.0};
  EXPECT_THROW(c.validate(16000), InvalidArgument);
  c = {};
  c.bank.timbres = {"kazoo"};
  EXPECT_THROW(c.validate(16000), InvalidArgument);
  c = {};
  c.bank.durations_ms.clear();
  EXPECT_THROW(c.validate(16000), InvalidArgument);
}

// Refined adversarial perturbation shared by the search tests.
struct AdversarialFixture {
  Transcription target;
  AudioClip delta;
};

const AdversarialFixture& adversarial() {
  static const AdversarialFixture f = [] {
    AdversarialFixture out;
    out.target = random_transcription(3, fixture_model().vocab_size(), 5001);
    AttackConfig cfg;
    cfg.seed = 8;
    const auto r = generate(fixture_model(), out.target, cfg);
    EXPECT_TRUE(r.success);
    out.delta = r.delta;
    return out;
  }();
  return f;
}

SearchConfig short_search(int iters) {
  SearchConfig cfg;
  cfg.max_iters = iters;
  cfg.seed = 3;
  return cfg;
}

TEST(Search, RejectsNonAdversarialDelta) {
  EXPECT_THROW(search(AudioClip::silence(16000, 16000), adversarial().target, fixture_model(), short_search(5)),
               PreconditionError);
}

TEST(Search, ZeroIterationsReturnsInitialMixture) {
  const auto& a = adversarial();
  const auto r = search(a.delta, a.target, fixture_model(), short_search(0));
  ASSERT_TRUE(r.masked);
  EXPECT_EQ(r.score, r.initial_score);
  EXPECT_DOUBLE_EQ(r.score, score(r.mixture, a.delta));
  EXPECT_EQ(r.score_trace.size(), 1u);
}

TEST(Search, AcceptedScoresNeverIncreaseAndInvariantsHold) {
  const auto& a = adversarial();
  const auto cfg = short_search(40);
  const auto r = search(a.delta, a.target, fixture_model(), cfg);
  ASSERT_TRUE(r.masked);
  EXPECT_EQ(transcribe(fixture_model(), r.mixture), a.target);
  EXPECT_EQ(r.transcription, a.target);
  ASSERT_EQ(r.best_trace.size(), 41u);
  for (std::size_t i = 1; i < r.best_trace.size(); ++i) EXPECT_LE(r.best_trace[i], r.best_trace[i - 1]);
  EXPECT_EQ(r.best_trace.back(), r.score);
  EXPECT_LE(r.score, r.initial_score);
  EXPECT_TRUE(std::isfinite(r.score));
  EXPECT_DOUBLE_EQ(r.score, score(r.mixture, a.delta));
  const auto grid = frame_grid(a.delta, cfg.frame_len_ms);
  ASSERT_EQ(r.placements.size(), static_cast<std::size_t>(cfg.k));
  for (const auto& p : r.placements) {
    EXPECT_NE(std::find(grid.begin(), grid.end(), p.position), grid.end());
    EXPECT_NE(std::find(cfg.bank.tones_hz.begin(), cfg.bank.tones_hz.end(), p.tone_hz), cfg.bank.tones_hz.end());
  }
}

TEST(Search, DeterministicPerSeed) {
  const auto& a = adversarial();
  const auto x = search(a.delta, a.target, fixture_model(), short_search(15));
  const auto y = search(a.delta, a.target, fixture_model(), short_search(15));
  EXPECT_EQ(x.mixture, y.mixture);
  EXPECT_EQ(x.indices, y.indices);
  EXPECT_EQ(x.score_trace, y.score_trace);
}

TEST(Search, UnreachableBankFallsBackToDeltaAlone) {
  // Loud footage inside the token band breaks decoding for every draw.
  const auto& a = adversarial();
  auto cfg = short_search(5);
  cfg.bank.tones_hz = {500.0, 900.0};
  cfg.amplitude = 0.9;
  cfg.k = 4;
  cfg.frame_len_ms = 100.0;
  cfg.bank.durations_ms = {800.0};
  cfg.init_attempts = 3;
  const auto r = search(a.delta, a.target, fixture_model(), cfg);
  ASSERT_FALSE(r.masked);
  EXPECT_EQ(r.mixture, a.delta);
  EXPECT_TRUE(r.placements.empty());
  EXPECT_DOUBLE_EQ(r.score, score(a.delta, a.delta));
}

}  // namespace
}  // namespace advmask
