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

#include "advmask/tokens.hpp"

#include <set>
#include <sstream>

#include "advmask/error.hpp"

namespace advmask {

void validate_transcription(const Transcription& t, int vocab_size) {
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    const int tok = t.tokens[i];
    if (tok == kBlank) throw InvalidArgument("transcription contains the blank token");
    if (tok < 0 || tok >= vocab_size) throw InvalidArgument("unknown token id " + std::to_string(tok));
    if (i > 0 && t.tokens[i - 1] == tok) throw InvalidArgument("transcription repeats token " + std::to_string(tok));
  }
}

namespace {
std::vector<std::vector<std::string>> letters_of(const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    std::vector<std::string> units;
    for (char c : n) units.emplace_back(1, c);
    out.push_back(std::move(units));
  }
  return out;
}
}  // namespace

TokenMapper::TokenMapper(std::vector<std::string> names) : TokenMapper(names, letters_of(names)) {}

TokenMapper::TokenMapper(std::vector<std::string> names, std::vector<std::vector<std::string>> sub_units)
    : names_(std::move(names)), sub_units_(std::move(sub_units)) {
  if (names_.size() < 2) throw InvalidArgument("vocabulary needs a blank and at least one token");
  if (sub_units_.size() != names_.size()) throw InvalidArgument("sub-unit table size mismatch");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || n.find_first_of(" \t\r\n,") != std::string::npos)
      throw InvalidArgument("token names must be non-empty and free of whitespace and commas");
    if (!seen.insert(n).second) throw InvalidArgument("duplicate token name '" + n + "'");
  }
}

TokenMapper TokenMapper::standard() {
  return TokenMapper({"<b>", "hui", "che", "huo", "kai", "deng", "guan", "da", "bo", "fang", "yin", "le", "ting"});
}

const std::string& TokenMapper::name(int id) const {
  if (id < 0 || id >= vocab_size()) throw InvalidArgument("unknown token id " + std::to_string(id));
  return names_[static_cast<std::size_t>(id)];
}

int TokenMapper::id(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw InvalidArgument("unknown token '" + std::string(name) + "'");
}

Transcription TokenMapper::parse(std::string_view text) const {
  Transcription t;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) t.tokens.push_back(id(word));
  validate_transcription(t, vocab_size());
  return t;
}

std::string TokenMapper::format(const Transcription& t) const {
  std::string out;
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    if (i) out += ' ';
    out += name(t.tokens[i]);
  }
  return out;
}

const std::vector<std::string>& TokenMapper::sub_units(int id) const {
  if (id < 0 || id >= vocab_size()) throw InvalidArgument("unknown token id " + std::to_string(id));
  return sub_units_[static_cast<std::size_t>(id)];
}

std::vector<std::string> TokenMapper::expand(const Transcription& t) const {
  std::vector<std::string> out;
  for (int tok : t.tokens) {
    const auto& u = sub_units(tok);
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

}  // namespace advmask
