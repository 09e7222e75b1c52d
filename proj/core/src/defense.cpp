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

#include "advmask/defense.hpp"

#include <cmath>
#include <numeric>

#include "advmask/error.hpp"
#include "advmask/parallel.hpp"

namespace advmask {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double rate(const std::vector<DefenseEntry>& entries, bool after) {
  if (entries.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& e : entries) hits += (after ? e.success_after : e.success_before) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(entries.size());
}

}  // namespace

AudioClip downsample_restore(const AudioClip& clip, int low, int restore) {
  AudioClip out = resample(resample(clip, low), restore);
  if (restore != clip.sample_rate) out = resample(out, clip.sample_rate);
  return pad_to(out, clip.size());
}

DefenseReport defense_downsample(const std::vector<LabeledSample>& samples, const AcousticModel& model, int low,
                                 int restore, unsigned jobs) {
  DefenseReport report;
  report.low_rate = low;
  report.restore_rate = restore;
  report.entries.resize(samples.size());
  for (const auto& s : samples)
    if (!(low > 0 && low <= restore && restore <= s.clip.sample_rate))
      throw InvalidArgument("defense: need 0 < low <= restore <= sample rate, got low=" + std::to_string(low) +
                            " restore=" + std::to_string(restore) + " rate=" + std::to_string(s.clip.sample_rate));
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    const auto& s = samples[i];
    DefenseEntry& e = report.entries[i];
    e.id = s.id;
    e.target = s.target;
    e.before = transcribe(model, s.clip);
    e.after = transcribe(model, downsample_restore(s.clip, low, restore));
    e.success_before = e.before == s.target;
    e.success_after = e.after == s.target;
  });
  report.rate_before = rate(report.entries, false);
  report.rate_after = rate(report.entries, true);
  return report;
}

std::vector<NoisePoint> defense_noise_probe(const AudioClip& sample, const AcousticModel& model,
                                            const Transcription& target, const std::vector<double>& sigma_grid,
                                            int trials, std::uint64_t seed, unsigned jobs) {
  if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()))
    throw InvalidArgument("noise probe: sigma grid must be ascending");
  if (trials < 1) throw InvalidArgument("noise probe: trials must be >= 1");
  for (double s : sigma_grid)
    if (!(s >= 0.0)) throw InvalidArgument("noise probe: sigma must be >= 0");

  const auto n_trials = static_cast<std::size_t>(trials);
  std::vector<char> hit(sigma_grid.size() * n_trials, 0);
  parallel_for(hit.size(), jobs, [&](std::size_t idx) {
    const std::size_t g = idx / n_trials, t = idx % n_trials;
    const std::uint64_t s = splitmix64(splitmix64(seed ^ splitmix64(g)) + t);
    hit[idx] = transcribe(model, add_white_noise(sample, sigma_grid[g], s)) == target ? 1 : 0;
  });
  std::vector<NoisePoint> curve;
  for (std::size_t g = 0; g < sigma_grid.size(); ++g) {
    const auto begin = hit.begin() + static_cast<std::ptrdiff_t>(g * n_trials);
    const auto count = std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(n_trials), 0);
    curve.push_back({sigma_grid[g], static_cast<double>(count) / static_cast<double>(trials)});
  }
  return curve;
}

std::vector<double> isotonic_non_decreasing(const std::vector<double>& y) {
  // Blocks of (mean, weight); merge while the order is violated.
  std::vector<double> mean;
  std::vector<std::size_t> weight;
  for (double v : y) {
    mean.push_back(v);
    weight.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t w = weight[weight.size() - 2] + weight.back();
      const double m = (mean[mean.size() - 2] * static_cast<double>(weight[weight.size() - 2]) +
                        mean.back() * static_cast<double>(weight.back())) /
                       static_cast<double>(w);
      mean.pop_back();
      weight.pop_back();
      mean.back() = m;
      weight.back() = w;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), weight[b], mean[b]);
  return out;
}

std::vector<double> isotonic_non_increasing(const std::vector<double>& y) {
  std::vector<double> neg(y.size());
  std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
  auto fit = isotonic_non_decreasing(neg);
  for (double& v : fit) v = -v;
  return fit;
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear_slope: need two or more paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

bool trend_non_increasing(const std::vector<NoisePoint>& curve) {
  if (curve.size() < 2) return true;
  std::vector<double> x, y;
  for (const auto& p : curve) {
    x.push_back(p.sigma);
    y.push_back(p.success);
  }
  const auto sse = [&](const std::vector<double>& fit) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - fit[i]) * (y[i] - fit[i]);
    return s;
  };
  return sse(isotonic_non_increasing(y)) <= sse(isotonic_non_decreasing(y)) && linear_slope(x, y) <= 0.0;
}

double dominance_fraction(const std::vector<NoisePoint>& upper, const std::vector<NoisePoint>& lower) {
  if (upper.size() != lower.size() || upper.empty())
    throw InvalidArgument("dominance_fraction: curves must share a non-empty grid");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (upper[i].sigma != lower[i].sigma) throw InvalidArgument("dominance_fraction: grids differ");
    hits += upper[i].success >= lower[i].success ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(upper.size());
}

}  // namespace advmask
