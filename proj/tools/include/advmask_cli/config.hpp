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
#include <map>
#include <string>
#include <vector>

#include "advmask/error.hpp"

namespace advmask::cli {

/// Bad config syntax, unknown keys, or values that do not parse.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Sectioned key-value settings with a fixed schema per command.
///
/// Values are resolved in order: schema defaults, config file, bank file,
/// then `--set section.key=value` overrides. Keys outside the command's
/// schema are rejected.
class ExperimentConfig {
 public:
  /// Throws ConfigError for an unknown command name.
  explicit ExperimentConfig(const std::string& command);

  const std::string& command() const noexcept { return command_; }

  /// Merges an INI file. Throws ConfigError naming the offending key.
  void load_file(const std::filesystem::path& path);
  /// Merges only the [bank] section of an INI file.
  void load_bank_file(const std::filesystem::path& path);
  /// `assignment` is "section.key=value".
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has_section(const std::string& section) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const { return get(section, key); }
  int get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

  /// Every resolved value, in schema order.
  std::string to_ini() const;
  void write(const std::filesystem::path& path) const;

  static const std::vector<std::string>& commands();

 private:
  std::string command_;
  std::vector<std::string> sections_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> values_;

  std::string* find(const std::string& section, const std::string& key);
};

/// Deterministic per-stream seed derived from the run seed.
std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& stream);

}  // namespace advmask::cli
