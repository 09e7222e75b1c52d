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

#include "advmask/acoustic_model.hpp"
#include "advmask/corpus.hpp"

namespace {

// Default-sized network with random weights; timing does not depend on training.
const advmask::AcousticModel& model() {
  static const auto m =
      advmask::AcousticModel::initialize(advmask::FeatureChain{}, advmask::TokenMapper::standard(), {128, 128}, 3, 1);
  return m;
}

advmask::AudioClip clip() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 0.05);
  std::vector<double> x(16000);
  for (double& v : x) v = d(rng);
  return advmask::AudioClip(std::move(x), 16000);
}

void BM_Features(benchmark::State& state) {
  const auto c = clip();
  for (auto _ : state) benchmark::DoNotOptimize(advmask::features(c, model().chain()));
}
BENCHMARK(BM_Features)->Unit(benchmark::kMicrosecond);

void BM_Transcribe(benchmark::State& state) {
  const auto c = clip();
  for (auto _ : state) benchmark::DoNotOptimize(advmask::transcribe(model(), c));
}
BENCHMARK(BM_Transcribe)->Unit(benchmark::kMicrosecond);

// Loss plus exact input gradient, the inner step of both attack stages.
void BM_GradInput(benchmark::State& state) {
  const auto c = clip();
  const auto target = model().tokens().parse("hui che");
  for (auto _ : state) benchmark::DoNotOptimize(advmask::loss_and_grad(model(), c, target));
}
BENCHMARK(BM_GradInput)->Unit(benchmark::kMillisecond);

}  // namespace
