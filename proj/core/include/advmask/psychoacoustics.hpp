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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "advmask/audio.hpp"

/// Frequency-domain masking model: per-frame PSD, masker identification,
/// two-slope spreading on the Bark scale and the global masking threshold.
namespace advmask::psy {

/// PSD values assigned to zero-magnitude bins.
inline constexpr double kPsdFloorDb = -200.0;
/// Level the loudest bin of a normalized frame is pinned to.
inline constexpr double kNormalizedPeakDb = 96.0;
inline constexpr double kHearingLowHz = 20.0;
inline constexpr double kHearingHighHz = 20000.0;

struct PsdFrame {
  std::vector<double> values;
  bool normalized = false;
  /// 96 - max_k p(k); only meaningful once normalized.
  double normalization_offset = 0.0;
};

struct Masker {
  int bin_index = 0;
  double bark = 0.0;
  /// Smoothed normalized level in dB.
  double level = 0.0;

  friend bool operator==(const Masker&, const Masker&) = default;
};

/// Global masking threshold for a whole clip, one row per STFT frame.
struct MaskingThreshold {
  Eigen::MatrixXd theta;           ///< frames x bins, dB
  Eigen::MatrixXd normalized_psd;  ///< frames x bins, dB
  std::vector<double> offsets;     ///< per-frame normalization offset
  int window_size = 2048;
  int hop = 512;
  int sample_rate = 16000;

  Eigen::Index num_frames() const noexcept { return theta.rows(); }
  Eigen::Index num_bins() const noexcept { return theta.cols(); }
};

/// 10 log10 |s(k) / N|^2 with zero bins floored at kPsdFloorDb.
PsdFrame psd(std::span<const std::complex<double>> frame, int window_size);

/// Shifts the frame so its maximum is 96 dB. Throws InvalidArgument if the
/// frame is already normalized.
PsdFrame normalize_psd(const PsdFrame& p);

/// Absolute threshold of hearing in dB SPL. Throws DomainError outside
/// [20 Hz, 20 kHz].
double ath(double freq_hz);

/// Bark scale: 13 atan(0.76 f / 1000) + 3.5 (atan(f / 7500))^2.
double bark(double freq_hz);

/// Throws InvalidArgument unless 0 <= k <= N/2.
double bin_to_freq(int k, int window_size, int sample_rate);

bool in_hearing_range(double freq_hz) noexcept;

/// Log-domain sum of a peak and its two neighbours.
double smooth_masker_level(double left_db, double center_db, double right_db);

/// Masker identification on a normalized frame.
///
/// A bin qualifies when it is a local maximum (p(k-1) <= p(k) >= p(k+1) with
/// at least one strict inequality), lies in the hearing range with
/// p(k) >= ATH, and is not within 0.5 Bark of a stronger accepted masker.
/// Candidates are accepted greedily by descending level, ties by lower bin.
/// Bins 0 and N/2 are never maskers.
std::vector<Masker> find_maskers(const PsdFrame& normalized, int window_size, int sample_rate);

/// Two-slope spreading function in dB: 27 db below the masker, G(level) db above,
/// with db = b_maskee - b_masker and G = -27 + 0.37 max(level - 40, 0).
double spreading(double bark_masker, double bark_maskee, double masker_level);

/// Offset of a masker's individual threshold below its level: -6.025 - 0.275 b.
double masking_index(double bark_masker);

/// T = level + masking_index(bark) + spreading.
double individual_threshold(const Masker& masker, double bark_maskee);

/// Bark value of every bin 0..N/2.
std::vector<double> bin_barks(int window_size, int sample_rate);

/// ATH of every bin, with out-of-range bins copied from the nearest in-range bin.
std::vector<double> bin_ath(int window_size, int sample_rate);

/// Global threshold over bins 0..N/2. In-range bins get the log-sum of ATH and
/// all individual thresholds; bins below 20 Hz or above 20 kHz copy the value
/// of the nearest in-range bin.
std::vector<double> global_threshold(std::span<const Masker> maskers, int window_size, int sample_rate);

/// Threshold at an arbitrary frequency in the hearing range.
double global_threshold_at(std::span<const Masker> maskers, double freq_hz);

/// stft -> psd -> normalize -> find_maskers -> global_threshold, per frame.
/// Throws InvalidArgument for an empty clip.
MaskingThreshold masking_threshold(const AudioClip& clip, int window_size = 2048, int hop = 512);

/// Per-frame unnormalized PSD (frames x bins) of a clip.
Eigen::MatrixXd psd_matrix(const AudioClip& clip, int window_size = 2048, int hop = 512);

/// Mask of bins whose centre frequency is in the hearing range.
std::vector<bool> hearing_range_mask(int window_size, int sample_rate);

}  // namespace advmask::psy
