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

#include <fstream>

#include <nlohmann/json.hpp>

#include "advmask/error.hpp"
#include "advmask/train.hpp"

namespace advmask {

namespace {

constexpr const char* kFormat = "advmask-acoustic-model";
constexpr int kVersion = 1;

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data(static_cast<std::size_t>(m.size()));
  // Row-major on disk.
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
    throw FormatError("model file: " + what + " has " + std::to_string(data.size()) + " values for shape " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

}  // namespace

void save_model(const AcousticModel& model, const std::filesystem::path& path) {
  const auto& ch = model.chain();
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["seed"] = model.seed();
  j["feature_chain"] = {{"window", ch.window},
                        {"hop", ch.hop},
                        {"mel_filter_count", ch.mel_filter_count},
                        {"log_floor_db", ch.log_floor_db},
                        {"include_dct", ch.include_dct},
                        {"sample_rate", ch.sample_rate}};
  j["context"] = model.context();
  j["vocabulary"] = model.tokens().names();
  json subs = json::array();
  for (int i = 0; i < model.vocab_size(); ++i) subs.push_back(model.tokens().sub_units(i));
  j["sub_units"] = subs;
  j["feature_mean"] = vector_to_json(model.feature_mean());
  j["feature_scale"] = vector_to_json(model.feature_scale());
  json layers = json::array();
  for (const auto& l : model.layers()) layers.push_back({{"weight", matrix_to_json(l.weight)}, {"bias", vector_to_json(l.bias)}});
  j["layers"] = layers;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("short write: " + path.string());
}

AcousticModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("model file " + path.string() + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) throw FormatError("model file: unexpected format tag");
    const int version = j.at("version").get<int>();
    if (version != kVersion) throw FormatError("model file: unsupported version " + std::to_string(version));
    const auto& fc = j.at("feature_chain");
    FeatureChain chain;
    chain.window = fc.at("window").get<int>();
    chain.hop = fc.at("hop").get<int>();
    chain.mel_filter_count = fc.at("mel_filter_count").get<int>();
    chain.log_floor_db = fc.at("log_floor_db").get<double>();
    chain.include_dct = fc.at("include_dct").get<bool>();
    chain.sample_rate = fc.at("sample_rate").get<int>();
    TokenMapper tokens(j.at("vocabulary").get<std::vector<std::string>>(),
                       j.at("sub_units").get<std::vector<std::vector<std::string>>>());
    std::vector<DenseLayer> layers;
    for (const auto& l : j.at("layers")) {
      DenseLayer d{matrix_from_json(l.at("weight"), "layer weight"), vector_from_json(l.at("bias"))};
      layers.push_back(std::move(d));
    }
    return AcousticModel(chain, std::move(tokens), j.at("context").get<int>(), std::move(layers),
                         vector_from_json(j.at("feature_mean")), vector_from_json(j.at("feature_scale")),
                         j.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw FormatError("model file " + path.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError("model file " + path.string() + ": " + e.what());
  }
}

}  // namespace advmask
