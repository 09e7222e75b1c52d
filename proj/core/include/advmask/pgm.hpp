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

#include <filesystem>

#include <Eigen/Core>

namespace advmask {

/// Writes a binary (P5) 8-bit PGM, one image row per matrix row. Values are
/// mapped linearly from [lo, hi] to [0, 255] and clamped.
void write_pgm(const Eigen::MatrixXd& values, double lo, double hi, const std::filesystem::path& path);

/// Same, with lo/hi taken from the finite min/max of `values`.
void write_pgm(const Eigen::MatrixXd& values, const std::filesystem::path& path);

/// Magnitude of a spectrogram in dB, 20 log10(|X| / N), floored at -200 dB.
Eigen::MatrixXd magnitude_db(const Eigen::MatrixXcd& frames, int window_size);

}  // namespace advmask
