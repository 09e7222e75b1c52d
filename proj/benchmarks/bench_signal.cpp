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

#include <random>

#include <benchmark/benchmark.h>

#include "advmask/audio.hpp"
#include "advmask/masking_search.hpp"
#include "advmask/psychoacoustics.hpp"

namespace {

advmask::AudioClip noise(std::size_t n, double sigma) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return advmask::AudioClip(std::move(x), 16000);
}

void BM_Stft(benchmark::State& state) {
  const auto clip = noise(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(advmask::stft(clip));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(16000)->Arg(64000);

void BM_MaskingThreshold(benchmark::State& state) {
  const auto clip = noise(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(advmask::psy::masking_threshold(clip));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MaskingThreshold)->Arg(16000)->Unit(benchmark::kMillisecond);

// One search step minus decoding: render and score a two-piece mixture.
void BM_ScoreMixture(benchmark::State& state) {
  const auto delta = noise(16000, 0.01);
  const advmask::MaskingScorer scorer(delta);
  std::vector<advmask::MusicFootage> pieces{advmask::synth_footage(3520.0, "piano", 400.0, 0.05, 16000),
                                            advmask::synth_footage(4186.0, "organ", 200.0, 0.05, 16000)};
  pieces[1].position = 6400;
  for (auto _ : state) {
    const auto mixture = advmask::render_mixture(delta, pieces, 0.01);
    benchmark::DoNotOptimize(scorer.evaluate(mixture));
  }
}
BENCHMARK(BM_ScoreMixture)->Unit(benchmark::kMillisecond);

void BM_Resample(benchmark::State& state) {
  const auto clip = noise(16000, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(advmask::resample(clip, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Resample)->Arg(10000)->Arg(12000);

}  // namespace

BENCHMARK_MAIN();
