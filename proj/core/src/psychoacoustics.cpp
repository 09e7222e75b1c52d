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

#include "advmask/psychoacoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "advmask/error.hpp"

namespace advmask::psy {

namespace {

constexpr double kDbToNat = std::numbers::ln10 / 10.0;

double db_to_power(double db) { return std::exp(db * kDbToNat); }
double power_to_db(double p) { return 10.0 * std::log10(p); }

// Index range [lo, hi] of bins inside the hearing range; lo > hi if none.
std::pair<int, int> hearing_bins(int window_size, int sample_rate) {
  const int half = window_size / 2;
  int lo = half + 1;
  int hi = -1;
  for (int k = 0; k <= half; ++k) {
    if (in_hearing_range(bin_to_freq(k, window_size, sample_rate))) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  return {lo, hi};
}

void extend_out_of_range(std::vector<double>& v, int lo, int hi) {
  if (lo > hi) return;
  for (int k = 0; k < lo; ++k) v[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(lo)];
  for (std::size_t k = static_cast<std::size_t>(hi) + 1; k < v.size(); ++k) v[k] = v[static_cast<std::size_t>(hi)];
}

}  // namespace

bool in_hearing_range(double freq_hz) noexcept { return freq_hz >= kHearingLowHz && freq_hz <= kHearingHighHz; }

PsdFrame psd(std::span<const std::complex<double>> frame, int window_size) {
  if (window_size <= 0) throw InvalidArgument("psd: window_size must be positive");
  PsdFrame out;
  out.values.resize(frame.size());
  const double inv_n = 1.0 / static_cast<double>(window_size);
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const double p = std::norm(frame[k] * inv_n);
    out.values[k] = p > 0.0 ? std::max(power_to_db(p), kPsdFloorDb) : kPsdFloorDb;
  }
  return out;
}

PsdFrame normalize_psd(const PsdFrame& p) {
  if (p.normalized) throw InvalidArgument("normalize_psd: frame is already normalized");
  PsdFrame out = p;
  out.normalized = true;
  if (p.values.empty()) return out;
  const double mx = *std::max_element(p.values.begin(), p.values.end());
  out.normalization_offset = kNormalizedPeakDb - mx;
  for (double& v : out.values) v += out.normalization_offset;
  return out;
}

double ath(double freq_hz) {
  if (!(freq_hz >= kHearingLowHz && freq_hz <= kHearingHighHz))
    throw DomainError("ath: frequency " + std::to_string(freq_hz) + " Hz outside [20, 20000]");
  const double f = freq_hz / 1000.0;
  return 3.64 * std::pow(f, -0.8) - 6.5 * std::exp(-0.6 * (f - 3.3) * (f - 3.3)) + 1e-3 * f * f * f * f;
}

double bark(double freq_hz) {
  if (!(freq_hz >= 0.0)) throw DomainError("bark: negative frequency");
  const double a = std::atan(freq_hz / 7500.0);
  return 13.0 * std::atan(0.76 * freq_hz / 1000.0) + 3.5 * a * a;
}

double bin_to_freq(int k, int window_size, int sample_rate) {
  if (window_size <= 0) throw InvalidArgument("bin_to_freq: window_size must be positive");
  if (k < 0 || k > window_size / 2)
    throw InvalidArgument("bin_to_freq: bin " + std::to_string(k) + " outside [0, " + std::to_string(window_size / 2) + "]");
  return static_cast<double>(k) * static_cast<double>(sample_rate) / static_cast<double>(window_size);
}

double smooth_masker_level(double left_db, double center_db, double right_db) {
  return power_to_db(db_to_power(left_db) + db_to_power(center_db) + db_to_power(right_db));
}

std::vector<Masker> find_maskers(const PsdFrame& normalized, int window_size, int sample_rate) {
  if (!normalized.normalized) throw InvalidArgument("find_maskers: frame must be normalized");
  const auto& p = normalized.values;
  const int half = window_size / 2;
  if (static_cast<int>(p.size()) != half + 1) throw InvalidArgument("find_maskers: frame has wrong bin count");

  struct Candidate {
    int bin;
    double raw;
    double bark;
  };
  std::vector<Candidate> candidates;
  for (int k = 1; k < half; ++k) {
    const double l = p[static_cast<std::size_t>(k - 1)];
    const double c = p[static_cast<std::size_t>(k)];
    const double r = p[static_cast<std::size_t>(k + 1)];
    if (!(l <= c && c >= r && (l < c || r < c))) continue;
    const double f = bin_to_freq(k, window_size, sample_rate);
    if (!in_hearing_range(f) || c < ath(f)) continue;
    candidates.push_back({k, c, bark(f)});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.raw > b.raw; });

  std::vector<Candidate> kept;
  for (const auto& cand : candidates) {
    const bool shadowed = std::any_of(kept.begin(), kept.end(),
                                      [&](const Candidate& k) { return std::abs(k.bark - cand.bark) <= 0.5; });
    if (!shadowed) kept.push_back(cand);
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.bin < b.bin; });

  std::vector<Masker> maskers;
  maskers.reserve(kept.size());
  for (const auto& c : kept) {
    const auto k = static_cast<std::size_t>(c.bin);
    maskers.push_back({c.bin, c.bark, smooth_masker_level(p[k - 1], p[k], p[k + 1])});
  }
  return maskers;
}

double spreading(double bark_masker, double bark_maskee, double masker_level) {
  const double db = bark_maskee - bark_masker;
  if (db < 0.0) return 27.0 * db;
  const double g = -27.0 + 0.37 * std::max(masker_level - 40.0, 0.0);
  return g * db;
}

double masking_index(double bark_masker) { return -6.025 - 0.275 * bark_masker; }

double individual_threshold(const Masker& masker, double bark_maskee) {
  return masker.level + masking_index(masker.bark) + spreading(masker.bark, bark_maskee, masker.level);
}

std::vector<double> bin_barks(int window_size, int sample_rate) {
  std::vector<double> b(static_cast<std::size_t>(window_size / 2 + 1));
  for (int k = 0; k <= window_size / 2; ++k) b[static_cast<std::size_t>(k)] = bark(bin_to_freq(k, window_size, sample_rate));
  return b;
}

std::vector<double> bin_ath(int window_size, int sample_rate) {
  std::vector<double> a(static_cast<std::size_t>(window_size / 2 + 1), 0.0);
  const auto [lo, hi] = hearing_bins(window_size, sample_rate);
  for (int k = lo; k <= hi; ++k) a[static_cast<std::size_t>(k)] = ath(bin_to_freq(k, window_size, sample_rate));
  extend_out_of_range(a, lo, hi);
  return a;
}

std::vector<bool> hearing_range_mask(int window_size, int sample_rate) {
  std::vector<bool> m(static_cast<std::size_t>(window_size / 2 + 1));
  for (int k = 0; k <= window_size / 2; ++k)
    m[static_cast<std::size_t>(k)] = in_hearing_range(bin_to_freq(k, window_size, sample_rate));
  return m;
}

namespace {

std::vector<double> global_threshold_with(std::span<const Masker> maskers, std::span<const double> barks,
                                          std::span<const double> ath_db, int lo, int hi) {
  std::vector<double> theta(barks.size(), 0.0);
  for (int k = lo; k <= hi; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double sum = db_to_power(ath_db[i]);
    for (const auto& m : maskers) sum += db_to_power(individual_threshold(m, barks[i]));
    theta[i] = power_to_db(sum);
  }
  extend_out_of_range(theta, lo, hi);
  return theta;
}

}  // namespace

std::vector<double> global_threshold(std::span<const Masker> maskers, int window_size, int sample_rate) {
  const auto barks = bin_barks(window_size, sample_rate);
  const auto ath_db = bin_ath(window_size, sample_rate);
  const auto [lo, hi] = hearing_bins(window_size, sample_rate);
  return global_threshold_with(maskers, barks, ath_db, lo, hi);
}

double global_threshold_at(std::span<const Masker> maskers, double freq_hz) {
  const double b = bark(freq_hz);
  double sum = db_to_power(ath(freq_hz));
  for (const auto& m : maskers) sum += db_to_power(individual_threshold(m, b));
  return power_to_db(sum);
}

Eigen::MatrixXd psd_matrix(const AudioClip& clip, int window_size, int hop) {
  const auto sg = stft(clip, window_size, hop);
  Eigen::MatrixXd out(sg.num_frames(), sg.num_bins());
  std::vector<std::complex<double>> row(static_cast<std::size_t>(sg.num_bins()));
  for (Eigen::Index f = 0; f < sg.num_frames(); ++f) {
    for (Eigen::Index k = 0; k < sg.num_bins(); ++k) row[static_cast<std::size_t>(k)] = sg.frames(f, k);
    const auto p = psd(row, window_size);
    for (Eigen::Index k = 0; k < sg.num_bins(); ++k) out(f, k) = p.values[static_cast<std::size_t>(k)];
  }
  return out;
}

MaskingThreshold masking_threshold(const AudioClip& clip, int window_size, int hop) {
  if (clip.empty()) throw InvalidArgument("masking_threshold: clip is empty");
  const auto sg = stft(clip, window_size, hop);
  const int fs = clip.sample_rate;
  const auto barks = bin_barks(window_size, fs);
  const auto ath_db = bin_ath(window_size, fs);
  const auto [lo, hi] = hearing_bins(window_size, fs);

  MaskingThreshold out;
  out.window_size = window_size;
  out.hop = hop;
  out.sample_rate = fs;
  out.theta.resize(sg.num_frames(), sg.num_bins());
  out.normalized_psd.resize(sg.num_frames(), sg.num_bins());
  out.offsets.resize(static_cast<std::size_t>(sg.num_frames()));

  std::vector<std::complex<double>> row(static_cast<std::size_t>(sg.num_bins()));
  for (Eigen::Index f = 0; f < sg.num_frames(); ++f) {
    for (Eigen::Index k = 0; k < sg.num_bins(); ++k) row[static_cast<std::size_t>(k)] = sg.frames(f, k);
    const auto normalized = normalize_psd(psd(row, window_size));
    const auto maskers = find_maskers(normalized, window_size, fs);
    const auto theta = global_threshold_with(maskers, barks, ath_db, lo, hi);
    out.offsets[static_cast<std::size_t>(f)] = normalized.normalization_offset;
    for (Eigen::Index k = 0; k < sg.num_bins(); ++k) {
      out.theta(f, k) = theta[static_cast<std::size_t>(k)];
      out.normalized_psd(f, k) = normalized.values[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace advmask::psy
