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

#include <gtest/gtest.h>

#include "advmask/error.hpp"
#include "advmask/footage.hpp"

namespace advmask {
namespace {

double band_level_db(const AudioClip& c, double freq) {
  const auto s = stft(c, 2048, 1024);
  const auto k = static_cast<Eigen::Index>(std::lround(freq * 2048.0 / c.sample_rate));
  double best = 0.0;
  for (Eigen::Index f = 0; f < s.num_frames(); ++f)
    for (Eigen::Index j = std::max<Eigen::Index>(0, k - 2); j <= std::min(s.num_bins() - 1, k + 2); ++j)
      best = std::max(best, std::abs(s.frames(f, j)));
  return 20.0 * std::log10(best + 1e-300);
}

TEST(SynthFootage, LengthFollowsDuration) {
  EXPECT_EQ(synth_footage(440.0, "piano", 200.0, 0.5, 16000).rendered.size(), 3200u);
  EXPECT_EQ(synth_footage(440.0, "sine", 400.0, 0.5, 16000).rendered.size(), 6400u);
}

TEST(SynthFootage, ZeroAmplitudeIsSilence) {
  const auto f = synth_footage(440.0, "organ", 200.0, 0.0, 16000);
  EXPECT_EQ(f.rendered.size(), 3200u);
  EXPECT_EQ(peak(f.rendered.samples), 0.0);
}

TEST(SynthFootage, PeakEqualsAmplitudeAndFadesAtEdges) {
  for (const auto& p : timbre_profiles()) {
    const auto f = synth_footage(523.25, p.name, 400.0, 0.7, 16000);
    EXPECT_NEAR(peak(f.rendered.samples), 0.7, 1e-12) << p.name;
    EXPECT_EQ(f.rendered.samples.front(), 0.0);
    EXPECT_LT(std::abs(f.rendered.samples.back()), 1e-3);
    EXPECT_EQ(f.timbre, p.name);
  }
}

TEST(SynthFootage, SineHasNoHarmonics) {
  const auto f = synth_footage(440.0, "sine", 400.0, 0.5, 16000);
  const auto s = stft(f.rendered, 2048, 1024);
  Eigen::Index arg = 0;
  s.frames.row(1).cwiseAbs().maxCoeff(&arg);
  EXPECT_EQ(arg, std::lround(440.0 * 2048.0 / 16000.0));
  const double fundamental = band_level_db(f.rendered, 440.0);
  for (int h = 2; h <= 5; ++h) EXPECT_LT(band_level_db(f.rendered, 440.0 * h) - fundamental, -40.0) << h;
}

TEST(SynthFootage, OrganHasOnlyOddHarmonics) {
  const auto f = synth_footage(440.0, "organ", 400.0, 0.5, 16000);
  const double fundamental = band_level_db(f.rendered, 440.0);
  EXPECT_GT(band_level_db(f.rendered, 1320.0) - fundamental, -20.0);
  EXPECT_LT(band_level_db(f.rendered, 880.0) - fundamental, -40.0);
}

TEST(SynthFootage, PianoDecays) {
  const auto f = synth_footage(440.0, "piano", 400.0, 0.5, 16000);
  const std::span<const double> all(f.rendered.samples);
  EXPECT_GT(rms(all.subspan(400, 1600)), 1.5 * rms(all.subspan(4400, 1600)));
}

TEST(SynthFootage, DropsHarmonicsAboveNyquist) {
  const auto f = synth_footage(3000.0, "piano", 200.0, 0.5, 16000);
  for (double v : f.rendered.samples) EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(peak(f.rendered.samples), 0.5, 1e-12);
}

TEST(SynthFootage, Deterministic) {
  EXPECT_EQ(synth_footage(660.0, "strings", 300.0, 0.4, 16000).rendered,
            synth_footage(660.0, "strings", 300.0, 0.4, 16000).rendered);
}

TEST(SynthFootage, RejectsInvalidInput) {
  EXPECT_THROW(synth_footage(8000.0, "sine", 200.0, 0.5, 16000), InvalidArgument);
  EXPECT_THROW(synth_footage(9000.0, "sine", 200.0, 0.5, 16000), InvalidArgument);
  EXPECT_THROW(synth_footage(440.0, "sine", 0.0, 0.5, 16000), InvalidArgument);
  EXPECT_THROW(synth_footage(440.0, "kazoo", 200.0, 0.5, 16000), InvalidArgument);
}

}  // namespace
}  // namespace advmask
