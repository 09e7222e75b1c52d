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
#include <vector>

#include "advmask/tokens.hpp"

namespace advmask {

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

/// Optimal alignment of a hypothesis against a reference. Among all
/// minimum-distance alignments the one with the most matches is kept.
struct Alignment {
  std::vector<EditOp> ops;  ///< in reference order
  std::size_t matches = 0;
  std::size_t distance = 0;
};

Alignment align(const std::vector<int>& reference, const std::vector<int>& hypothesis);
Alignment align(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

enum class Granularity { kCoarse, kFine };

/// Matched units divided by the reference length. Fine granularity expands
/// both sequences into sub-units first. Throws InvalidArgument for an empty
/// reference.
double sroa(const Transcription& reference, const Transcription& hypothesis, Granularity g,
            const TokenMapper& mapper);

}  // namespace advmask
