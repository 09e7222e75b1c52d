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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "advmask/attack.hpp"
#include "advmask/corpus.hpp"
#include "advmask/defense.hpp"
#include "advmask/error.hpp"
#include "advmask/relay.hpp"
#include "fixture.hpp"

namespace advmask {
namespace {

using testing::fixture_model;

// Max-min characterization of the non-decreasing least-squares fit.
std::vector<double> isotonic_minmax(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> fit(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -1e300;
    for (std::size_t j = 0; j <= i; ++j) {
      double lowest = 1e300, sum = 0.0;
      for (std::size_t k = j; k < n; ++k) {
        sum += y[k];
        if (k >= i) lowest = std::min(lowest, sum / static_cast<double>(k - j + 1));
      }
      best = std::max(best, lowest);
    }
    fit[i] = best;
  }
  return fit;
}

std::vector<NoisePoint> curve(const std::vector<double>& values) {
  std::vector<NoisePoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({0.01 * static_cast<double>(i), values[i]});
  return out;
}

TEST(Isotonic, MatchesMinMaxFormula) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> y(1 + t % 12);
    for (double& v : y) v = u(rng);
    const auto up = isotonic_non_decreasing(y);
    const auto ref = isotonic_minmax(y);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(up[i], ref[i], 1e-12);
    std::vector<double> neg(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
    const auto down = isotonic_non_increasing(y);
    const auto ref_down = isotonic_minmax(neg);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(down[i], -ref_down[i], 1e-12);
  }
}

TEST(LinearSlope, ClosedForm) {
  EXPECT_NEAR(linear_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-12);
  EXPECT_NEAR(linear_slope({0, 1, 2}, {1, 0, 2}), 0.5, 1e-12);
  EXPECT_EQ(linear_slope({1, 1}, {0, 5}), 0.0);
}

TEST(Trend, DetectsDirection) {
  EXPECT_TRUE(trend_non_increasing(curve({1, 1, 0.9, 0.95, 0.4, 0.1, 0})));
  EXPECT_TRUE(trend_non_increasing(curve({1, 1, 1})));
  EXPECT_FALSE(trend_non_increasing(curve({0, 0.2, 0.5, 0.9})));
}

TEST(Dominance, CountsGridPoints) {
  EXPECT_DOUBLE_EQ(dominance_fraction(curve({1, 1, 0.5, 0.2}), curve({1, 0.5, 0.6, 0})), 0.75);
  EXPECT_THROW(dominance_fraction(curve({1, 1}), curve({1})), InvalidArgument);
}

// Refined adversarial perturbations and benign clips for the defense tests.
struct Sets {
  std::vector<LabeledSample> adversarial;
  std::vector<LabeledSample> benign;
};

const Sets& sets() {
  static const Sets s = [] {
    Sets out;
    for (std::uint64_t i = 0; i < 3; ++i) {
      const auto target = random_transcription(2 + i, fixture_model().vocab_size(), 7000 + i);
      AttackConfig cfg;
      cfg.seed = 30 + i;
      const auto r = generate(fixture_model(), target, cfg);
      EXPECT_TRUE(r.success);
      out.adversarial.push_back({"adv" + std::to_string(i), r.delta, target});
    }
    const auto corpus = synth_corpus(standard_vocab_spec(), 40, 4242);
    for (std::size_t i = 0; i < corpus.size(); ++i)
      out.benign.push_back({"ben" + std::to_string(i), corpus[i].audio, corpus[i].label});
    return out;
  }();
  return s;
}

TEST(DefenseDownsample, IdentityRatesChangeNothing) {
  const auto r = defense_downsample(sets().adversarial, fixture_model(), 16000, 16000);
  EXPECT_EQ(r.rate_before, r.rate_after);
  for (const auto& e : r.entries) EXPECT_EQ(e.before, e.after);
  EXPECT_EQ(downsample_restore(sets().adversarial[0].clip, 16000, 16000), sets().adversarial[0].clip);
}

TEST(DefenseDownsample, BenignDecodingSurvives) {
  const auto r = defense_downsample(sets().benign, fixture_model(), 10000, 16000);
  ASSERT_GT(r.rate_before, 0.0);
  EXPECT_LT((r.rate_before - r.rate_after) / r.rate_before, 0.1);
  EXPECT_GE(r.rate_after, 0.0);
  EXPECT_LE(r.rate_after, 1.0);
}

TEST(DefenseDownsample, ReproducibleAndOrderedAcrossJobs) {
  const auto a = defense_downsample(sets().benign, fixture_model(), 10000, 16000, 1);
  const auto b = defense_downsample(sets().benign, fixture_model(), 10000, 16000, 3);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].id, sets().benign[i].id);
    EXPECT_EQ(a.entries[i].id, b.entries[i].id);
    EXPECT_EQ(a.entries[i].after, b.entries[i].after);
  }
  EXPECT_EQ(a.rate_after, b.rate_after);
}

TEST(DefenseDownsample, RejectsBadRateOrdering) {
  EXPECT_THROW(defense_downsample(sets().benign, fixture_model(), 12000, 10000), InvalidArgument);
  EXPECT_THROW(defense_downsample(sets().benign, fixture_model(), 0, 16000), InvalidArgument);
  EXPECT_THROW(defense_downsample(sets().benign, fixture_model(), 10000, 22050), InvalidArgument);
}

TEST(NoiseProbe, ZeroSigmaAlwaysSucceeds) {
  const auto& a = sets().adversarial[0];
  const auto c = defense_noise_probe(a.clip, fixture_model(), a.target, {0.0}, 5, 1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].success, 1.0);
}

TEST(NoiseProbe, AdversarialCurveFallsAndBenignDominates) {
  const std::vector<double> grid{0.0, 0.01, 0.02, 0.03, 0.05, 0.08, 0.12};
  const auto& a = sets().adversarial[1];
  const auto& b = sets().benign[1];
  const auto adv = defense_noise_probe(a.clip, fixture_model(), a.target, grid, 50, 5, 2);
  const auto ben = defense_noise_probe(b.clip, fixture_model(), b.target, grid, 50, 6, 2);
  EXPECT_TRUE(trend_non_increasing(adv));
  EXPECT_GE(dominance_fraction(ben, adv), 0.8);
  EXPECT_EQ(adv, defense_noise_probe(a.clip, fixture_model(), a.target, grid, 50, 5, 1));
}

TEST(NoiseProbe, RejectsUnsortedGrid) {
  const auto& a = sets().adversarial[0];
  EXPECT_THROW(defense_noise_probe(a.clip, fixture_model(), a.target, {0.02, 0.01}, 5, 1), InvalidArgument);
}

TEST(Relay, IdentityParametersLeaveClipUnchanged) {
  const auto& clip = sets().benign[0].clip;
  EXPECT_EQ(relay_simulate(clip, 3, ChannelParams::identity()), clip);
}

TEST(Relay, DeterministicAndRejectsZeroHops) {
  const auto& clip = sets().benign[0].clip;
  EXPECT_EQ(relay_simulate(clip, 2, ChannelParams{}), relay_simulate(clip, 2, ChannelParams{}));
  ChannelParams other;
  other.seed = 2;
  EXPECT_NE(relay_simulate(clip, 2, ChannelParams{}), relay_simulate(clip, 2, other));
  EXPECT_THROW(relay_simulate(clip, 0, ChannelParams{}), InvalidArgument);
}

TEST(Relay, DistortionGrowsWithHops) {
  for (const auto& s : sets().adversarial) {
    double prev = std::numeric_limits<double>::infinity();
    for (int hops = 1; hops <= 4; ++hops) {
      const double d = si_sdr(s.clip, relay_simulate(s.clip, hops, ChannelParams{}));
      EXPECT_LT(d, prev) << s.id << " hops " << hops;
      prev = d;
    }
  }
}

TEST(Relay, SomeAttacksSurviveTwoHops) {
  int kept = 0;
  for (const auto& s : sets().adversarial) kept += transcribe(fixture_model(), relay_simulate(s.clip, 2, ChannelParams{})) == s.target;
  EXPECT_GE(kept, 1);
}

TEST(ReverbKernel, UnitDirectPathAndDecayingTail) {
  const ChannelParams p;
  const auto h = reverb_kernel(p, 16000);
  ASSERT_EQ(h.size(), 961u);
  EXPECT_EQ(h[0], 1.0);
  double tail = 0.0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    tail += h[i];
    if (i > 1) { EXPECT_LT(h[i], h[i - 1]); }
  }
  EXPECT_NEAR(tail, p.reverb_mix, 1e-12);
  // 30 ms (480 samples) is the -60 dB point of the tail.
  EXPECT_NEAR(h[481] / h[1], 1e-3, 1e-6);
}

TEST(SiSdr, KnownRatios) {
  const auto ref = sine(440.0, 0.5, 16000, 16000);
  EXPECT_GT(si_sdr(ref, scale(ref, 0.3)), 200.0);
  EXPECT_EQ(si_sdr(ref, ref), std::numeric_limits<double>::infinity());
  // An orthogonal tone at a quarter of the amplitude gives 20 log10(4).
  const auto est = add_unclipped(ref, sine(1000.0, 0.125, 16000, 16000));
  EXPECT_NEAR(si_sdr(ref, est), 20.0 * std::log10(4.0), 1e-3);
  EXPECT_THROW(si_sdr(AudioClip::silence(10, 16000), ref), InvalidArgument);
}

TEST(ChannelParams, ValidateRejectsBadValues) {
  ChannelParams p;
  p.noise_sigma = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.reverb_mix = -0.1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.low_rate = -5;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

}  // namespace
}  // namespace advmask
