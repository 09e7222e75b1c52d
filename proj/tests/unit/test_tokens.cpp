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

#include <set>

#include <gtest/gtest.h>

#include "advmask/error.hpp"
#include "advmask/tokens.hpp"

namespace advmask {
namespace {

TEST(TokenMapper, StandardVocabularyHasBlankPlusTwelve) {
  const auto m = TokenMapper::standard();
  EXPECT_EQ(m.vocab_size(), 13);
  EXPECT_EQ(m.id(m.name(kBlank)), kBlank);
}

TEST(TokenMapper, ParseFormatRoundTrip) {
  const auto m = TokenMapper::standard();
  const auto t = m.parse("hui che");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(m.format(t), "hui che");
  EXPECT_EQ(m.parse("  kai\tdeng  "), m.parse("kai deng"));
  EXPECT_TRUE(m.parse("").empty());
}

TEST(TokenMapper, InjectiveOverTwoTokenTargets) {
  const auto m = TokenMapper::standard();
  std::set<std::vector<int>> seen;
  for (int a = 1; a < m.vocab_size(); ++a)
    for (int b = 1; b < m.vocab_size(); ++b) {
      if (a == b) continue;
      const auto text = m.name(a) + " " + m.name(b);
      EXPECT_TRUE(seen.insert(m.parse(text).tokens).second) << text;
      EXPECT_EQ(m.format(m.parse(text)), text);
    }
}

TEST(TokenMapper, RejectsUnknownBlankAndRepeats) {
  const auto m = TokenMapper::standard();
  EXPECT_THROW(m.parse("hui xyz"), InvalidArgument);
  EXPECT_THROW(m.parse("<b> hui"), InvalidArgument);
  EXPECT_THROW(m.parse("hui hui"), InvalidArgument);
  EXPECT_THROW(m.name(13), InvalidArgument);
  EXPECT_THROW(m.name(-1), InvalidArgument);
}

TEST(TokenMapper, ExpandsToSubUnits) {
  const auto m = TokenMapper::standard();
  const std::vector<std::string> expected{"h", "u", "i", "c", "h", "e"};
  EXPECT_EQ(m.expand(m.parse("hui che")), expected);
}

TEST(TokenMapper, ConstructorValidatesNames) {
  EXPECT_THROW(TokenMapper({"<b>"}), InvalidArgument);
  EXPECT_THROW(TokenMapper({"<b>", "a", "a"}), InvalidArgument);
  EXPECT_THROW(TokenMapper({"<b>", "a b"}), InvalidArgument);
  EXPECT_THROW(TokenMapper({"<b>", "a"}, {{}}), InvalidArgument);
}

TEST(ValidateTranscription, AcceptsNonAdjacentRepeats) {
  EXPECT_NO_THROW(validate_transcription({{1, 2, 1}}, 3));
  EXPECT_THROW(validate_transcription({{1, 3}}, 3), InvalidArgument);
}

}  // namespace
}  // namespace advmask
