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

#include "advmask/audio.hpp"
#include "advmask/error.hpp"
#include "advmask/psychoacoustics.hpp"
#include "oracles.hpp"

namespace advmask::psy {
namespace {

// Threshold of a masker set evaluated term by term with the high-precision
// closed forms, independent of the library's bin tables.
double theta_oracle(const std::vector<Masker>& maskers, double freq) {
  const double b = oracle::bark_high_precision(freq);
  double power = std::pow(10.0, oracle::ath_high_precision(freq) / 10.0);
  for (const auto& m : maskers) {
    const double db = b - m.bark;
    const double slope = db < 0.0 ? 27.0 : -27.0 + 0.37 * std::max(m.level - 40.0, 0.0);
    const double t = m.level - 6.025 - 0.275 * m.bark + slope * db;
    power += std::pow(10.0, t / 10.0);
  }
  return 10.0 * std::log10(power);
}

PsdFrame frame_of(const std::vector<double>& values) {
  PsdFrame p;
  p.values = values;
  return normalize_psd(p);
}

PsdFrame tone_frame(double freq, double amp = 0.5) {
  const auto s = stft(sine(freq, amp, 2048, 16000), 2048, 2048);
  std::vector<std::complex<double>> row(static_cast<std::size_t>(s.num_bins()));
  for (Eigen::Index k = 0; k < s.num_bins(); ++k) row[static_cast<std::size_t>(k)] = s.frames(0, k);
  return normalize_psd(psd(row, 2048));
}

TEST(Psd, ScalesByWindowLength) {
  const std::vector<std::complex<double>> row{{2048.0, 0.0}, {0.0, 204.8}, {0.0, 0.0}};
  const auto p = psd(row, 2048);
  EXPECT_NEAR(p.values[0], 0.0, 1e-12);
  EXPECT_NEAR(p.values[1], -20.0, 1e-12);
  EXPECT_EQ(p.values[2], kPsdFloorDb);
  EXPECT_FALSE(p.normalized);
}

TEST(NormalizePsd, ShiftsMaximumTo96) {
  auto p = frame_of({-100.0, 0.0, -3.0});
  EXPECT_DOUBLE_EQ(p.normalization_offset, 96.0);
  EXPECT_EQ(*std::max_element(p.values.begin(), p.values.end()), 96.0);
  p = frame_of({-30.0, -30.0, -30.0});
  for (double v : p.values) EXPECT_EQ(v, 96.0);
  p = frame_of({-10.0, -40.0});
  EXPECT_DOUBLE_EQ(p.values[0], 96.0);
  EXPECT_DOUBLE_EQ(p.values[1], 66.0);
  EXPECT_TRUE(p.normalized);
}

TEST(Ath, KnownValuesAndDomain) {
  EXPECT_NEAR(ath(1000.0), 3.369, 1e-3);
  EXPECT_NEAR(ath(3300.0), -4.98, 5e-3);
  EXPECT_THROW(ath(10.0), DomainError);
  EXPECT_THROW(ath(20001.0), DomainError);
}

TEST(Bark, KnownValues) {
  EXPECT_EQ(bark(0.0), 0.0);
  EXPECT_NEAR(bark(1000.0), 8.51, 0.01);
  EXPECT_NEAR(bark(16000.0), 23.84, 0.05);
}

TEST(ClosedForms, AgreeWithHighPrecisionOnRandomFrequencies) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(20.0, 20000.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = f(rng);
    EXPECT_LE(oracle::relative_error(ath(x), oracle::ath_high_precision(x)), 1e-9) << x;
    EXPECT_LE(oracle::relative_error(bark(x), oracle::bark_high_precision(x)), 1e-9) << x;
  }
}

TEST(BinToFreq, Examples) {
  EXPECT_EQ(bin_to_freq(0, 2048, 16000), 0.0);
  EXPECT_EQ(bin_to_freq(64, 2048, 16000), 500.0);
  EXPECT_EQ(bin_to_freq(1024, 2048, 16000), 8000.0);
}

TEST(Maskers, FlatFrameHasNone) {
  EXPECT_TRUE(find_maskers(frame_of(std::vector<double>(1025, kPsdFloorDb)), 2048, 16000).empty());
}

TEST(Maskers, SingleToneGivesOneMaskerNearItsBin) {
  const auto m = find_maskers(tone_frame(1000.0), 2048, 16000);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_NEAR(m[0].bin_index, 128, 1);
}

TEST(Maskers, SmoothedPlateauLevel) {
  EXPECT_NEAR(smooth_masker_level(60.0, 60.0, 60.0), 60.0 + 10.0 * std::log10(3.0), 1e-12);
  EXPECT_NEAR(smooth_masker_level(60.0, 60.0, 60.0), 64.77, 5e-3);
}

TEST(Maskers, BoundaryBinsNeverQualify) {
  std::vector<double> v(1025, 0.0);
  v[0] = 90.0;
  v[1024] = 90.0;
  v[1] = 10.0;
  v[1023] = 10.0;
  auto p = frame_of(v);
  for (const auto& m : find_maskers(p, 2048, 16000)) {
    EXPECT_NE(m.bin_index, 0);
    EXPECT_NE(m.bin_index, 1024);
  }
}

TEST(Maskers, PropertiesOnRandomFrames) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 15.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1025);
    for (double& x : v) x = n(rng);
    const auto p = frame_of(v);
    const auto maskers = find_maskers(p, 2048, 16000);
    for (std::size_t i = 0; i < maskers.size(); ++i) {
      const auto k = static_cast<std::size_t>(maskers[i].bin_index);
      const double f = bin_to_freq(maskers[i].bin_index, 2048, 16000);
      EXPECT_GE(p.values[k], p.values[k - 1]);
      EXPECT_GE(p.values[k], p.values[k + 1]);
      EXPECT_GE(maskers[i].level, ath(f));
      if (i > 0) { EXPECT_GT(maskers[i].bark - maskers[i - 1].bark, 0.5); }
    }
    EXPECT_EQ(maskers, find_maskers(p, 2048, 16000));
  }
}

TEST(Spreading, Examples) {
  EXPECT_EQ(spreading(5.0, 5.0, 80.0), 0.0);
  EXPECT_DOUBLE_EQ(spreading(5.0, 3.0, 60.0), -54.0);
  EXPECT_NEAR(spreading(5.0, 6.0, 60.0), -19.6, 1e-12);
}

TEST(Spreading, NonIncreasingAwayFromMasker) {
  for (double level : {20.0, 40.0, 60.0, 96.0}) {
    double prev_lo = 0.0, prev_hi = 0.0;
    for (double d = 0.1; d < 10.0; d += 0.1) {
      const double lo = spreading(10.0, 10.0 - d, level), hi = spreading(10.0, 10.0 + d, level);
      EXPECT_LE(lo, prev_lo);
      EXPECT_LE(hi, prev_hi);
      prev_lo = lo;
      prev_hi = hi;
    }
  }
}

TEST(IndividualThreshold, Examples) {
  EXPECT_NEAR(individual_threshold({128, 8.51, 64.77}, 8.51), 64.77 - 6.025 - 0.275 * 8.51, 1e-12);
  EXPECT_NEAR(individual_threshold({128, 8.51, 64.77}, 8.51), 56.40, 5e-3);
  EXPECT_NEAR(individual_threshold({1, 0.0, 40.0}, 0.0), 33.975, 1e-12);
  EXPECT_NEAR(individual_threshold({1, 10.0, 50.0}, 7.0), -39.775, 1e-12);
}

TEST(GlobalThreshold, EmptySetIsAth) {
  const auto theta = global_threshold({}, 2048, 16000);
  for (int k = 0; k <= 1024; ++k) {
    const double f = bin_to_freq(k, 2048, 16000);
    if (in_hearing_range(f)) { EXPECT_NEAR(theta[static_cast<std::size_t>(k)], ath(f), 1e-9); }
  }
}

TEST(GlobalThreshold, MatchesTermwiseOracle) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 15.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(1025);
    for (double& x : v) x = n(rng);
    const auto maskers = find_maskers(frame_of(v), 2048, 16000);
    const auto theta = global_threshold(maskers, 2048, 16000);
    for (int k = 3; k <= 1024; k += 7) {
      const double f = bin_to_freq(k, 2048, 16000);
      EXPECT_LE(oracle::relative_error(theta[static_cast<std::size_t>(k)], theta_oracle(maskers, f)), 1e-9) << k;
    }
  }
}

TEST(GlobalThreshold, OneMaskerIsBoundedByTwoTermLogSum) {
  const Masker m{128, bark(1000.0), 70.0};
  const auto theta = global_threshold(std::vector<Masker>{m}, 2048, 16000);
  for (int k = 3; k <= 1024; ++k) {
    const double f = bin_to_freq(k, 2048, 16000);
    const double hi = std::max(ath(f), individual_threshold(m, bark(f)));
    EXPECT_GE(theta[static_cast<std::size_t>(k)], hi - 1e-12);
    EXPECT_LE(theta[static_cast<std::size_t>(k)], hi + 3.0103);
  }
}

TEST(GlobalThreshold, ToneAt840MasksQuieterToneAt850) {
  const auto m = find_maskers(tone_frame(840.0), 2048, 16000);
  ASSERT_EQ(m.size(), 1u);
  Masker fixed = m[0];
  fixed.level = 50.0;
  EXPECT_GT(global_threshold_at(std::vector<Masker>{fixed}, 850.0), 32.0);
}

TEST(GlobalThreshold, AddingMaskerNeverLowers) {
  const std::vector<Masker> one{{100, bark(781.25), 60.0}};
  const std::vector<Masker> two{{100, bark(781.25), 60.0}, {400, bark(3125.0), 80.0}};
  const auto a = global_threshold(one, 2048, 16000), b = global_threshold(two, 2048, 16000);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_GE(b[k], a[k]);
}

TEST(MaskingThreshold, SilenceGivesAthEverywhere) {
  const auto t = masking_threshold(AudioClip::silence(8000, 16000));
  const auto base = bin_ath(2048, 16000);
  const auto in_range = hearing_range_mask(2048, 16000);
  for (Eigen::Index f = 0; f < t.num_frames(); ++f)
    for (Eigen::Index k = 0; k < t.num_bins(); ++k)
      if (in_range[static_cast<std::size_t>(k)]) { EXPECT_NEAR(t.theta(f, k), base[static_cast<std::size_t>(k)], 1e-9); }
}

TEST(MaskingThreshold, StationaryToneIsStableAcrossFrames) {
  const auto t = masking_threshold(sine(1000.0, 0.5, 16000, 16000));
  for (Eigen::Index f = 2; f + 2 < t.num_frames(); ++f)
    EXPECT_LT((t.theta.row(f) - t.theta.row(1)).cwiseAbs().maxCoeff(), 1.0) << f;
}

TEST(MaskingThreshold, BurstRaisesOnlyOverlappingFrames) {
  auto clip = AudioClip::silence(16000, 16000);
  const auto burst = sine(1000.0, 0.5, 1024, 16000);
  clip = mix(clip, burst, 8192);
  const auto t = masking_threshold(clip);
  const auto base = bin_ath(2048, 16000);
  for (Eigen::Index f = 0; f < t.num_frames(); ++f) {
    const std::size_t start = static_cast<std::size_t>(f) * 512;
    const bool overlaps = start < 8192 + 1024 && start + 2048 > 8192;
    const double rise = t.theta(f, 128) - base[128];
    if (overlaps)
      EXPECT_GT(rise, 10.0) << f;
    else
      EXPECT_NEAR(rise, 0.0, 1e-9) << f;
  }
}

TEST(MaskingThreshold, InvariantUnderGain) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.1);
  std::vector<double> x(6000);
  for (double& v : x) v = n(rng);
  const AudioClip clip(x, 16000);
  const auto a = masking_threshold(clip), b = masking_threshold(scale(clip, 0.25));
  EXPECT_LT((a.normalized_psd - b.normalized_psd).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((a.theta - b.theta).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(MaskingThreshold, FloorAndMatchesPerFramePipeline) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.1);
  std::vector<double> x(5000);
  for (double& v : x) v = n(rng) * std::sin(static_cast<double>(&v - x.data()) / 300.0);
  const AudioClip clip(x, 16000);
  const auto t = masking_threshold(clip);
  const auto s = stft(clip);
  const auto base = bin_ath(2048, 16000);
  const auto in_range = hearing_range_mask(2048, 16000);
  for (Eigen::Index f = 0; f < t.num_frames(); ++f) {
    std::vector<std::complex<double>> row(static_cast<std::size_t>(s.num_bins()));
    for (Eigen::Index k = 0; k < s.num_bins(); ++k) row[static_cast<std::size_t>(k)] = s.frames(f, k);
    const auto norm = normalize_psd(psd(row, 2048));
    const auto theta = global_threshold(find_maskers(norm, 2048, 16000), 2048, 16000);
    EXPECT_DOUBLE_EQ(t.offsets[static_cast<std::size_t>(f)], norm.normalization_offset);
    for (Eigen::Index k = 0; k < t.num_bins(); ++k) {
      EXPECT_NEAR(t.theta(f, k), theta[static_cast<std::size_t>(k)], 1e-9);
      if (in_range[static_cast<std::size_t>(k)]) { EXPECT_GE(t.theta(f, k), base[static_cast<std::size_t>(k)] - 1e-12); }
    }
  }
}

TEST(MaskingThreshold, HighRateBinsAbove20kCopyTheBoundary) {
  const auto t = masking_threshold(sine(1000.0, 0.5, 4096, 48000));
  const auto in_range = hearing_range_mask(2048, 48000);
  Eigen::Index last = 0;
  for (Eigen::Index k = 0; k < t.num_bins(); ++k)
    if (in_range[static_cast<std::size_t>(k)]) last = k;
  for (Eigen::Index k = last + 1; k < t.num_bins(); ++k) EXPECT_EQ(t.theta(0, k), t.theta(0, last));
}

}  // namespace
}  // namespace advmask::psy
