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

#include "advmask/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "advmask/error.hpp"

namespace advmask {

void write_pgm(const Eigen::MatrixXd& values, double lo, double hi, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write PGM file: " + path.string());
  f << "P5\n" << values.cols() << ' ' << values.rows() << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  std::string row(static_cast<std::size_t>(values.cols()), '\0');
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double v = values(r, c);
      const double t = std::isfinite(v) ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
      row[static_cast<std::size_t>(c)] = static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0)));
    }
    f.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!f) throw IoError("short write: " + path.string());
}

void write_pgm(const Eigen::MatrixXd& values, const std::filesystem::path& path) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values.data()[i];
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  write_pgm(values, lo, hi, path);
}

Eigen::MatrixXd magnitude_db(const Eigen::MatrixXcd& frames, int window_size) {
  Eigen::MatrixXd out(frames.rows(), frames.cols());
  const double n = static_cast<double>(window_size);
  for (Eigen::Index r = 0; r < frames.rows(); ++r)
    for (Eigen::Index c = 0; c < frames.cols(); ++c) {
      const double p = std::norm(frames(r, c) / n);
      out(r, c) = p > 0.0 ? std::max(10.0 * std::log10(p), -200.0) : -200.0;
    }
  return out;
}

}  // namespace advmask
