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

#include <string>
#include <string_view>
#include <vector>

namespace advmask {

/// Index 0 of every vocabulary is the blank token.
inline constexpr int kBlank = 0;

/// Blank-free token sequence without adjacent repeats.
struct Transcription {
  std::vector<int> tokens;

  bool empty() const noexcept { return tokens.empty(); }
  std::size_t size() const noexcept { return tokens.size(); }
  friend bool operator==(const Transcription&, const Transcription&) = default;
};

/// Throws InvalidArgument if `t` contains a blank, an id >= vocab_size, or two
/// equal adjacent tokens.
void validate_transcription(const Transcription& t, int vocab_size);

/// Maps between target text, token ids and fine-grained sub-units.
///
/// Target text is whitespace-separated token names. Each token owns a list
/// of sub-units (letters of its name by default), mirroring a
/// character/pinyin split.
class TokenMapper {
 public:
  /// names[0] must be the blank symbol.
  explicit TokenMapper(std::vector<std::string> names);
  TokenMapper(std::vector<std::string> names, std::vector<std::vector<std::string>> sub_units);

  /// Twelve syllable tokens plus blank.
  static TokenMapper standard();

  int vocab_size() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(int id) const;
  int id(std::string_view name) const;

  /// Throws InvalidArgument for unknown tokens or an invalid sequence.
  Transcription parse(std::string_view text) const;
  std::string format(const Transcription& t) const;

  const std::vector<std::string>& sub_units(int id) const;
  std::vector<std::string> expand(const Transcription& t) const;

  friend bool operator==(const TokenMapper&, const TokenMapper&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> sub_units_;
};

}  // namespace advmask
