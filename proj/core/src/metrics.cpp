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

#include "advmask/metrics.hpp"

#include <algorithm>
#include <utility>

#include "advmask/error.hpp"

namespace advmask {
namespace {

// Cost ordering: fewer edits first, then more matches.
struct Cell {
  std::size_t distance = 0;
  std::size_t matches = 0;
  bool better_than(const Cell& o) const {
    return distance != o.distance ? distance < o.distance : matches > o.matches;
  }
};

template <typename T>
Alignment align_impl(const std::vector<T>& ref, const std::vector<T>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<Cell> dp((n + 1) * (m + 1));
  std::vector<EditOp> back((n + 1) * (m + 1), EditOp::kMatch);
  const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = 1; i <= n; ++i) {
    dp[at(i, 0)] = {i, 0};
    back[at(i, 0)] = EditOp::kDelete;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    dp[at(0, j)] = {j, 0};
    back[at(0, j)] = EditOp::kInsert;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const bool eq = ref[i - 1] == hyp[j - 1];
      const Cell& d = dp[at(i - 1, j - 1)];
      Cell best{d.distance + (eq ? 0 : 1), d.matches + (eq ? 1 : 0)};
      EditOp op = eq ? EditOp::kMatch : EditOp::kSubstitute;
      const Cell del{dp[at(i - 1, j)].distance + 1, dp[at(i - 1, j)].matches};
      if (del.better_than(best)) best = del, op = EditOp::kDelete;
      const Cell ins{dp[at(i, j - 1)].distance + 1, dp[at(i, j - 1)].matches};
      if (ins.better_than(best)) best = ins, op = EditOp::kInsert;
      dp[at(i, j)] = best;
      back[at(i, j)] = op;
    }
  }
  Alignment out;
  out.distance = dp[at(n, m)].distance;
  out.matches = dp[at(n, m)].matches;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const EditOp op = back[at(i, j)];
    out.ops.push_back(op);
    if (op == EditOp::kMatch || op == EditOp::kSubstitute) {
      --i;
      --j;
    } else if (op == EditOp::kDelete) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

}  // namespace

Alignment align(const std::vector<int>& reference, const std::vector<int>& hypothesis) {
  return align_impl(reference, hypothesis);
}

Alignment align(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  return align_impl(reference, hypothesis);
}

double sroa(const Transcription& reference, const Transcription& hypothesis, Granularity g,
            const TokenMapper& mapper) {
  if (reference.empty()) throw InvalidArgument("sroa: empty reference");
  if (g == Granularity::kCoarse)
    return static_cast<double>(align(reference.tokens, hypothesis.tokens).matches) /
           static_cast<double>(reference.size());
  const auto ref = mapper.expand(reference);
  const auto hyp = mapper.expand(hypothesis);
  if (ref.empty()) throw InvalidArgument("sroa: reference has no sub-units");
  return static_cast<double>(align(ref, hyp).matches) / static_cast<double>(ref.size());
}

}  // namespace advmask
