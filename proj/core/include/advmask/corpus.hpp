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
#include <span>
#include <string>
#include <vector>

#include "advmask/audio.hpp"
#include "advmask/tokens.hpp"

namespace advmask {

/// Sound of one synthetic token: a set of steady partials.
struct TokenRecipe {
  std::vector<double> partials_hz;
  std::vector<double> gains;
};

/// Recipes for tokens 1..V-1 (index 0 is unused and left empty).
using VocabSpec = std::vector<TokenRecipe>;

/// Twelve two-partial recipes on a 4 x 3 grid of low and high partials,
/// all below 2.8 kHz.
VocabSpec standard_vocab_spec();

struct CorpusConfig {
  int sample_rate = 16000;
  int min_tokens = 2;
  int max_tokens = 4;
  double token_ms_min = 100.0;
  double token_ms_max = 300.0;
  double gap_ms_min = 50.0;
  double gap_ms_max = 200.0;
  double edge_ms_min = 50.0;
  double edge_ms_max = 150.0;
  double gain_min = 0.1;  ///< peak amplitude of the utterance
  double gain_max = 0.5;
  double noise_min = 0.0005;
  double noise_max = 0.02;
  double clean_fraction = 0.25;  ///< share of utterances without added noise
  double detune = 0.02;          ///< relative jitter of partial frequencies
  double bandlimit_fraction = 0.1;  ///< share of utterances passed through a lower sample rate
  int bandlimit_rate_min = 6000;
  int bandlimit_rate_max = 14000;
};

struct Segment {
  std::size_t start = 0;  ///< first sample
  std::size_t end = 0;    ///< one past the last sample
  int token = kBlank;
};

struct LabeledClip {
  AudioClip audio;
  Transcription label;
  std::vector<Segment> segments;
};

/// Renders one token instance of `duration` samples, with 15 ms attack and
/// 20 ms release ramps. `detune` scales every partial frequency.
std::vector<double> render_token(const TokenRecipe& recipe, std::size_t duration, int sample_rate, double detune,
                                 std::span<const double> phases);

/// Random 2-4 token utterances with gaps, gain and light noise. Requires at
/// least two non-blank recipes. Deterministic per seed.
std::vector<LabeledClip> synth_corpus(const VocabSpec& recipes, std::size_t count, std::uint64_t seed,
                                      const CorpusConfig& config = {});

/// Random label with no adjacent repeats.
Transcription random_transcription(std::size_t length, int vocab_size, std::uint64_t seed);

/// Per-frame labels: the token whose segment contains the frame centre, else blank.
std::vector<int> frame_labels(const LabeledClip& clip, int window, int hop);

struct ManifestEntry {
  std::filesystem::path wav;
  std::string labels;  ///< whitespace-separated token names
};

/// Writes utt_NNNN.wav files and manifest.csv (header: wav,labels) into `dir`.
void write_corpus(const std::vector<LabeledClip>& corpus, const TokenMapper& mapper, const std::filesystem::path& dir);

/// Reads a manifest; relative wav paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

}  // namespace advmask
