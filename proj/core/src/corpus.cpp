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

#include "advmask/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "advmask/csv.hpp"
#include "advmask/error.hpp"
#include "advmask/wav.hpp"

namespace advmask {

VocabSpec standard_vocab_spec() {
  const double low[] = {350.0, 500.0, 700.0, 950.0};
  const double high[] = {1300.0, 1900.0, 2700.0};
  VocabSpec recipes(1);
  for (double h : high)
    for (double l : low) recipes.push_back({{l, h}, {1.0, 0.6}});
  return recipes;
}

namespace {

std::size_t ms_to_samples(double ms, int rate) {
  return static_cast<std::size_t>(std::llround(ms * 1e-3 * rate));
}

double ramp(std::size_t i, std::size_t len) {
  if (len == 0 || i >= len) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(len)));
}

}  // namespace

std::vector<double> render_token(const TokenRecipe& recipe, std::size_t duration, int sample_rate, double detune,
                                 std::span<const double> phases) {
  if (recipe.partials_hz.size() != recipe.gains.size()) throw InvalidArgument("token recipe gain/partial mismatch");
  std::vector<double> out(duration, 0.0);
  const std::size_t attack = std::min(duration / 2, ms_to_samples(15.0, sample_rate));
  const std::size_t release = std::min(duration / 2, ms_to_samples(20.0, sample_rate));
  for (std::size_t p = 0; p < recipe.partials_hz.size(); ++p) {
    const double w = 2.0 * std::numbers::pi * recipe.partials_hz[p] * detune / sample_rate;
    const double phase = p < phases.size() ? phases[p] : 0.0;
    for (std::size_t i = 0; i < duration; ++i) out[i] += recipe.gains[p] * std::sin(w * static_cast<double>(i) + phase);
  }
  for (std::size_t i = 0; i < duration; ++i) out[i] *= ramp(i, attack) * ramp(duration - 1 - i, release);
  return out;
}

Transcription random_transcription(std::size_t length, int vocab_size, std::uint64_t seed) {
  if (vocab_size < 3 && length > 1) throw InvalidArgument("need at least two non-blank tokens");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, vocab_size - 1);
  Transcription t;
  while (t.tokens.size() < length) {
    const int tok = pick(rng);
    if (!t.tokens.empty() && t.tokens.back() == tok) continue;
    t.tokens.push_back(tok);
  }
  return t;
}

std::vector<LabeledClip> synth_corpus(const VocabSpec& recipes, std::size_t count, std::uint64_t seed,
                                      const CorpusConfig& cfg) {
  const int vocab = static_cast<int>(recipes.size());
  if (vocab < 3) throw InvalidArgument("synth_corpus: need at least two non-blank tokens");
  if (cfg.min_tokens < 1 || cfg.max_tokens < cfg.min_tokens) throw InvalidArgument("synth_corpus: bad token counts");
  if (cfg.bandlimit_rate_min < 1000 || cfg.bandlimit_rate_max < cfg.bandlimit_rate_min)
    throw InvalidArgument("synth_corpus: bad band-limit rate range");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::uniform_int_distribution<int> n_tokens(cfg.min_tokens, cfg.max_tokens);
  const int rate = cfg.sample_rate;

  std::vector<LabeledClip> corpus;
  corpus.reserve(count);
  for (std::size_t u = 0; u < count; ++u) {
    LabeledClip clip;
    clip.label = random_transcription(static_cast<std::size_t>(n_tokens(rng)), vocab, rng());
    std::vector<double> samples(ms_to_samples(uniform(cfg.edge_ms_min, cfg.edge_ms_max), rate), 0.0);
    for (std::size_t t = 0; t < clip.label.size(); ++t) {
      if (t > 0) samples.resize(samples.size() + ms_to_samples(uniform(cfg.gap_ms_min, cfg.gap_ms_max), rate), 0.0);
      const int tok = clip.label.tokens[t];
      const auto& recipe = recipes[static_cast<std::size_t>(tok)];
      const std::size_t len = ms_to_samples(uniform(cfg.token_ms_min, cfg.token_ms_max), rate);
      const double detune = 1.0 + cfg.detune * (2.0 * unit(rng) - 1.0);
      std::vector<double> phases(recipe.partials_hz.size());
      for (double& p : phases) p = 2.0 * std::numbers::pi * unit(rng);
      TokenRecipe jittered = recipe;
      for (double& g : jittered.gains) g *= std::pow(10.0, uniform(-3.0, 3.0) / 20.0);
      const auto sound = render_token(jittered, len, rate, detune, phases);
      clip.segments.push_back({samples.size(), samples.size() + len, tok});
      samples.insert(samples.end(), sound.begin(), sound.end());
    }
    samples.resize(samples.size() + ms_to_samples(uniform(cfg.edge_ms_min, cfg.edge_ms_max), rate), 0.0);

    const double pk = peak(samples);
    const double gain = uniform(cfg.gain_min, cfg.gain_max);
    if (pk > 0.0)
      for (double& s : samples) s *= gain / pk;

    clip.audio = AudioClip(std::move(samples), rate);
    const bool clean = unit(rng) < cfg.clean_fraction;
    const double sigma = uniform(cfg.noise_min, cfg.noise_max);
    const std::uint64_t noise_seed = rng();
    if (!clean) clip.audio = add_white_noise(clip.audio, sigma, noise_seed);
    const bool limited = unit(rng) < cfg.bandlimit_fraction;
    const int low = std::uniform_int_distribution<int>(cfg.bandlimit_rate_min / 1000, cfg.bandlimit_rate_max / 1000)(rng) * 1000;
    if (limited && low < rate) clip.audio = pad_to(resample(resample(clip.audio, low), rate), clip.audio.size());
    corpus.push_back(std::move(clip));
  }
  return corpus;
}

std::vector<int> frame_labels(const LabeledClip& clip, int window, int hop) {
  const std::size_t frames =
      frame_count(std::max(clip.audio.size(), static_cast<std::size_t>(window)), static_cast<std::size_t>(window),
                  static_cast<std::size_t>(hop));
  std::vector<int> labels(frames, kBlank);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t centre = f * static_cast<std::size_t>(hop) + static_cast<std::size_t>(window) / 2;
    for (const auto& s : clip.segments)
      if (centre >= s.start && centre < s.end) labels[f] = s.token;
  }
  return labels;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << "wav,labels\n";
  for (const auto& e : entries) out << csv_row({e.wav.generic_string(), e.labels}) << '\n';
}

void write_corpus(const std::vector<LabeledClip>& corpus, const TokenMapper& mapper, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::ostringstream name;
    name << "utt_" << std::setfill('0') << std::setw(4) << i << ".wav";
    write_wav(corpus[i].audio, dir / name.str());
    entries.push_back({name.str(), mapper.format(corpus[i].label)});
  }
  write_manifest(entries, dir / "manifest.csv");
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = parse_csv_line(line);
    if (header) {
      header = false;
      if (fields.size() >= 2 && fields[0] == "wav") continue;
    }
    if (fields.size() != 2) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 2 fields");
    std::filesystem::path wav = fields[0];
    if (wav.is_relative()) wav = path.parent_path() / wav;
    out.push_back({wav, fields[1]});
  }
  return out;
}

}  // namespace advmask
