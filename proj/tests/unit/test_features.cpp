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
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "advmask/error.hpp"
#include "advmask/features.hpp"
#include "oracles.hpp"

namespace advmask {
namespace {

AudioClip noise_clip(std::size_t n, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return AudioClip(x, 16000);
}

TEST(MelScale, RoundTrips) {
  for (double hz : {0.0, 100.0, 1000.0, 7999.0}) EXPECT_NEAR(mel_to_hz(hz_to_mel(hz)), hz, 1e-9);
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-12);
}

TEST(MelFilterbank, PartitionOfUnityWithTriangularRows) {
  const auto fb = mel_filterbank(32, 512, 16000);
  ASSERT_EQ(fb.rows(), 32);
  ASSERT_EQ(fb.cols(), 257);
  EXPECT_GE(fb.minCoeff(), 0.0);
  for (Eigen::Index k = 0; k < fb.cols(); ++k) EXPECT_NEAR(fb.col(k).sum(), 1.0, 1e-12);
  // Each row rises to its peak and then falls.
  for (Eigen::Index m = 0; m < fb.rows(); ++m) {
    Eigen::Index peak = 0;
    fb.row(m).maxCoeff(&peak);
    for (Eigen::Index k = 1; k <= peak; ++k) EXPECT_GE(fb(m, k), fb(m, k - 1) - 1e-15);
    for (Eigen::Index k = peak + 1; k < fb.cols(); ++k) EXPECT_LE(fb(m, k), fb(m, k - 1) + 1e-15);
  }
}

TEST(DctMatrix, IsOrthonormal) {
  const auto d = dct_matrix(16);
  EXPECT_LT((d * d.transpose() - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Features, SilenceIsLogFloor) {
  const FeatureChain chain;
  const auto f = features(AudioClip::silence(4000, 16000), chain);
  EXPECT_EQ(f.cols(), 32);
  EXPECT_LT((f.array() - std::log(chain.log_floor())).abs().maxCoeff(), 1e-12);
}

TEST(Features, SilenceWithDctIsTransformedFloor) {
  FeatureChain chain;
  chain.include_dct = true;
  const auto f = features(AudioClip::silence(4000, 16000), chain);
  const Eigen::VectorXd expected = dct_matrix(32) * Eigen::VectorXd::Constant(32, std::log(chain.log_floor()));
  for (Eigen::Index r = 0; r < f.rows(); ++r) EXPECT_LT((f.row(r).transpose() - expected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Features, DoublingAmplitudeAddsLogFour) {
  const FeatureChain chain;
  const auto x = noise_clip(4000, 1, 0.1);
  const auto a = features(x, chain), b = features(scale(x, 2.0), chain);
  EXPECT_LT(((b - a).array() - std::log(4.0)).abs().maxCoeff(), 1e-9);
}

TEST(Features, ToneLightsNearestMelBand) {
  const FeatureChain chain;
  const auto f = features(sine(1000.0, 0.5, 4000, 16000), chain);
  const auto centers = mel_centers(chain.mel_filter_count, 16000);
  std::size_t nearest = 0;
  for (std::size_t m = 1; m < centers.size(); ++m)
    if (std::abs(centers[m] - 1000.0) < std::abs(centers[nearest] - 1000.0)) nearest = m;
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    Eigen::Index arg = 0;
    f.row(r).maxCoeff(&arg);
    EXPECT_EQ(static_cast<std::size_t>(arg), nearest) << r;
  }
}

TEST(Features, MatchesDirectEvaluation) {
  const FeatureChain chain;
  const auto x = noise_clip(1500, 2, 0.2);
  const auto f = features(x, chain);
  const auto w = hann(512);
  const auto fb = mel_filterbank(32, 512, 16000);
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    Eigen::VectorXd power(257);
    for (int k = 0; k < 257; ++k) {
      std::complex<double> acc = 0.0;
      for (int n = 0; n < 512; ++n) {
        const std::size_t idx = static_cast<std::size_t>(r) * 256 + static_cast<std::size_t>(n);
        const double v = idx < x.size() ? x.samples[idx] : 0.0;
        acc += w[static_cast<std::size_t>(n)] * v * std::polar(1.0, -2.0 * std::numbers::pi * k * n / 512.0);
      }
      power(k) = std::norm(acc);
    }
    const Eigen::VectorXd mel = fb * power;
    for (int m = 0; m < 32; ++m) EXPECT_NEAR(f(r, m), std::log(std::max(mel(m), chain.log_floor())), 1e-9);
  }
}

TEST(Features, BackwardMatchesFiniteDifferences) {
  for (bool dct : {false, true}) {
    FeatureChain chain;
    chain.include_dct = dct;
    const FeatureExtractor ex(chain);
    const auto x = noise_clip(2000, 3, 0.2);
    const auto tape = ex.compute_with_tape(x);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd g(tape.features.rows(), tape.features.cols());
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
    const auto grad = ex.backward(tape, g);
    ASSERT_EQ(grad.size(), x.size());
    const auto objective = [&](const AudioClip& c) { return (ex.compute(c).array() * g.array()).sum(); };
    const auto central = [&](std::size_t i, double h) {
      AudioClip p = x, m = x;
      p.samples[i] += h;
      m.samples[i] -= h;
      return (objective(p) - objective(m)) / (2.0 * h);
    };
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    for (int t = 0; t < 50; ++t) {
      const auto i = pick(rng);
      const double fd = (4.0 * central(i, 5e-7) - central(i, 1e-6)) / 3.0;
      EXPECT_LT(oracle::relative_error(grad[i], fd), 1e-3) << i;
    }
  }
}

TEST(Features, RejectsShortClipAndWrongRate) {
  const FeatureChain chain;
  EXPECT_THROW(features(AudioClip::silence(511, 16000), chain), InvalidArgument);
  EXPECT_THROW(features(AudioClip::silence(4000, 8000), chain), InvalidArgument);
}

TEST(FeatureChain, ValidateRejectsBadValues) {
  FeatureChain c;
  c.window = 500;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.hop = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.mel_filter_count = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

}  // namespace
}  // namespace advmask
