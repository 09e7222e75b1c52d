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

#include "advmask_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace advmask::cli {
namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

const std::map<std::string, Entries>& schema() {
  static const std::map<std::string, Entries> s{
      {"run", {{"seed", "1"}, {"jobs", "1"}}},
      {"paths",
       {{"out_dir", "advmask-out"},
        {"model", ""},
        {"input", ""},
        {"bank", ""},
        {"adversarial", ""},
        {"benign", ""}}},
      {"corpus",
       {{"count", "600"},
        {"min_tokens", "2"},
        {"max_tokens", "4"},
        {"noise_min", "0.0005"},
        {"noise_max", "0.02"},
        {"clean_fraction", "0.25"},
        {"bandlimit_fraction", "0.1"},
        {"export_count", "20"}}},
      {"features",
       {{"window", "512"}, {"hop", "256"}, {"mel_filters", "32"}, {"log_floor_db", "-80"}, {"dct", "false"}}},
      {"train",
       {{"epochs", "12"},
        {"batch_size", "128"},
        {"learning_rate", "0.001"},
        {"hidden", "128,128"},
        {"context", "3"},
        {"heldout_fraction", "0.2"},
        {"min_accuracy", "0.95"}}},
      {"attack",
       {{"target", "hui che"},
        {"epsilon", "0.15"},
        {"lr", "0.005"},
        {"sigma", "0.01"},
        {"max_iters", "3000"},
        {"refine_iters", "1000"},
        {"alpha_value", "1000"},
        {"alpha_init", "0.001"},
        {"duration", "16000"},
        {"check_interval", "10"},
        {"robustness_trials", "50"}}},
      {"search",
       {{"target", "hui che"},
        {"k", "2"},
        {"frame_len_ms", "200"},
        {"max_iters", "500"},
        {"amplitude", "0.05"},
        {"hinge", "false"},
        {"max_saturation", "0.01"},
        {"init_attempts", "20"},
        {"window", "2048"},
        {"hop", "512"}}},
      {"bank",
       {{"tones", "3136,3520,3951,4186,4699"}, {"timbres", "sine,piano,organ"}, {"durations_ms", "200,400"}}},
      {"threshold", {{"window", "2048"}, {"hop", "512"}}},
      {"evaluate", {{"conditions", "clean,relay1,relay2"}}},
      {"relay",
       {{"low_rate", "12000"},
        {"gain_jitter_db", "1"},
        {"noise_sigma", "0.002"},
        {"reverb_decay_ms", "30"},
        {"reverb_length_ms", "60"},
        {"reverb_mix", "0.2"}}},
      {"defense",
       {{"low_rate", "10000"},
        {"restore_rate", "16000"},
        {"sigma_grid", "0,0.005,0.01,0.02,0.03,0.05,0.08,0.12,0.2,0.3"},
        {"trials", "50"}}},
      {"footage",
       {{"tone_hz", "440"},
        {"timbre", "piano"},
        {"duration_ms", "400"},
        {"amplitude", "0.5"},
        {"sample_rate", "16000"}}},
  };
  return s;
}

const std::map<std::string, std::vector<std::string>>& command_sections() {
  static const std::map<std::string, std::vector<std::string>> c{
      {"train-asr", {"run", "paths", "corpus", "features", "train"}},
      {"attack", {"run", "paths", "attack"}},
      {"search-mask", {"run", "paths", "search", "bank"}},
      {"threshold-dump", {"run", "paths", "threshold"}},
      {"evaluate", {"run", "paths", "evaluate", "relay"}},
      {"defense", {"run", "paths", "defense"}},
      {"synth-footage", {"run", "paths", "footage"}},
  };
  return c;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const std::string t = trim(text);
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc() || ptr != end)
    throw ConfigError(where + ": cannot parse '" + text + "' as a number");
  return value;
}

void merge_tree(ExperimentConfig& cfg, const boost::property_tree::ptree& tree, const std::string& origin,
                const std::string* only_section) {
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(origin + ": key '" + section + "' outside any section");
    if (!cfg.has_section(section))
      throw ConfigError(origin + ": unknown section [" + section + "] for command " + cfg.command());
    if (only_section && section != *only_section)
      throw ConfigError(origin + ": unexpected section [" + section + "]");
    for (const auto& [key, value] : body) cfg.set(section, key, value.data());
  }
}

}  // namespace

ExperimentConfig::ExperimentConfig(const std::string& command) : command_(command) {
  const auto it = command_sections().find(command);
  if (it == command_sections().end()) throw ConfigError("unknown command '" + command + "'");
  sections_ = it->second;
  for (const auto& s : sections_) values_[s] = schema().at(s);
}

const std::vector<std::string>& ExperimentConfig::commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : command_sections()) n.push_back(k);
    return n;
  }();
  return names;
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  merge_tree(*this, tree, path.string(), nullptr);
}

void ExperimentConfig::load_bank_file(const std::filesystem::path& path) {
  if (!has_section("bank")) throw ConfigError("bank file given to a command without a [bank] section");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("bank file: ") + e.what());
  }
  const std::string bank = "bank";
  merge_tree(*this, tree, path.string(), &bank);
}

std::string* ExperimentConfig::find(const std::string& section, const std::string& key) {
  const auto it = values_.find(section);
  if (it == values_.end()) return nullptr;
  for (auto& [k, v] : it->second)
    if (k == key) return &v;
  return nullptr;
}

void ExperimentConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!values_.count(section))
    throw ConfigError("unknown section [" + section + "] for command " + command_ + " (key " + section + "." + key +
                      ")");
  std::string* slot = find(section, key);
  if (!slot) throw ConfigError("unknown config key " + section + "." + key);
  *slot = trim(value);
}

void ExperimentConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)), assignment.substr(eq + 1));
}

bool ExperimentConfig::has_section(const std::string& section) const { return values_.count(section) > 0; }

const std::string& ExperimentConfig::get(const std::string& section, const std::string& key) const {
  std::string* slot = const_cast<ExperimentConfig*>(this)->find(section, key);
  if (!slot) throw ConfigError("internal: no key " + section + "." + key + " for command " + command_);
  return *slot;
}

int ExperimentConfig::get_int(const std::string& section, const std::string& key) const {
  return parse_number<int>(get(section, key), section + "." + key);
}

std::uint64_t ExperimentConfig::get_u64(const std::string& section, const std::string& key) const {
  return parse_number<std::uint64_t>(get(section, key), section + "." + key);
}

double ExperimentConfig::get_double(const std::string& section, const std::string& key) const {
  return parse_number<double>(get(section, key), section + "." + key);
}

bool ExperimentConfig::get_bool(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(section + "." + key + ": cannot parse '" + v + "' as a boolean");
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get(section, key)))
    out.push_back(parse_number<double>(item, section + "." + key));
  return out;
}

std::vector<int> ExperimentConfig::get_ints(const std::string& section, const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(get(section, key))) out.push_back(parse_number<int>(item, section + "." + key));
  return out;
}

std::vector<std::string> ExperimentConfig::get_strings(const std::string& section, const std::string& key) const {
  return split_list(get(section, key));
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream out;
  out << "# resolved configuration for advmask " << command_ << "\n";
  for (const auto& s : sections_) {
    out << "\n[" << s << "]\n";
    for (const auto& [k, v] : values_.at(s)) out << k << " = " << v << "\n";
  }
  return out.str();
}

void ExperimentConfig::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_ini();
}

std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& stream) {
  // FNV-1a over the stream name, then a splitmix64 finalizer.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : stream) h = (h ^ c) * 0x100000001B3ULL;
  std::uint64_t x = run_seed ^ h;
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace advmask::cli
