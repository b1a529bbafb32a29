// Copyright 2026 The cmlyrics Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmlyrics/textproc.h"

#include <gtest/gtest.h>

#include "cmlyrics/error.h"
#include "cmlyrics/rng.h"

namespace cmlyrics {
namespace {

Token W(const char* s) { return {s, TokenKind::kWord}; }
Token P(const char* s) { return {s, TokenKind::kPunct}; }
Token N(const char* s) { return {s, TokenKind::kNumber}; }

TEST(SplitSentences, Newline) {
  EXPECT_EQ(SplitSentences("hello world\nbye"),
            (std::vector<std::string>{"hello world", "bye"}));
}

TEST(SplitSentences, FinalPunctuation) {
  EXPECT_EQ(SplitSentences("I love you! chali chali ga"),
            (std::vector<std::string>{"I love you!", "chali chali ga"}));
}

TEST(SplitSentences, Empty) { EXPECT_TRUE(SplitSentences("").empty()); }

TEST(SplitSentences, DropsBlankSegments) {
  EXPECT_EQ(SplitSentences("a\n\n \n!!\nb?!"),
            (std::vector<std::string>{"a", "!!", "b?!"}));
}

TEST(SplitSentences, EllipsisAndDanda) {
  EXPECT_EQ(SplitSentences("wait… ok । done"),
            (std::vector<std::string>{"wait…", "ok ।", "done"}));
}

TEST(SplitSentences, DecimalPointIsNotBoundary) {
  EXPECT_EQ(SplitSentences("rating 4.5 stars. next"),
            (std::vector<std::string>{"rating 4.5 stars.", "next"}));
}

TEST(SplitSentences, NeverEmptyOnRandomText) {
  Rng rng(3);
  const std::string alphabet = "ab .!?\n\t";
  for (int trial = 0; trial < 300; ++trial) {
    std::string s;
    const size_t len = rng.Below(30);
    for (size_t i = 0; i < len; ++i) s += alphabet[rng.Below(alphabet.size())];
    for (const auto& sent : SplitSentences(s)) {
      EXPECT_FALSE(sent.empty());
      EXPECT_NE(sent.find_first_not_of(" \t\n"), std::string::npos);
    }
  }
}

TEST(Tokenize, PunctuationSplit) {
  EXPECT_EQ(Tokenize("nuvvu super, ga!"),
            (Sentence{W("nuvvu"), W("super"), P(","), W("ga"), P("!")}));
}

TEST(Tokenize, Number) {
  EXPECT_EQ(Tokenize("100 crores"), (Sentence{N("100"), W("crores")}));
}

TEST(Tokenize, InternalMarksKept) {
  EXPECT_EQ(Tokenize("o'range-u"), (Sentence{W("o'range-u")}));
}

TEST(Tokenize, QuotesAndRuns) {
  EXPECT_EQ(Tokenize("\"hey\"... (ok)"),
            (Sentence{P("\""), W("hey"), P("\""), P("."), P("."), P("."), P("("),
                      W("ok"), P(")")}));
}

TEST(Tokenize, AllWhitespaceThrows) {
  EXPECT_THROW(Tokenize("   \t "), Error);
  EXPECT_THROW(Tokenize(""), Error);
}

TEST(Tokenize, KindInvariants) {
  for (const auto& t : Tokenize("abc 12 3rd ?! x-1 -- 7.5 ప్రేమ")) {
    ASSERT_FALSE(t.surface.empty());
    bool letter = false, digit = false;
    for (char32_t c : DecodeUtf8(t.surface)) {
      letter |= (c < 128 && std::isalpha(static_cast<int>(c))) || c >= 128;
      digit |= c < 128 && std::isdigit(static_cast<int>(c));
    }
    if (t.kind == TokenKind::kWord) {
      EXPECT_TRUE(letter) << t.surface;
    }
    if (t.kind == TokenKind::kPunct) {
      EXPECT_FALSE(letter || digit) << t.surface;
    }
  }
}

TEST(Tokenize, StableUnderRejoin) {
  Rng rng(11);
  const std::string alphabet = "abc'-,.!?\"() 19";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s = "x";
    const size_t len = rng.Below(25);
    for (size_t i = 0; i < len; ++i) s += alphabet[rng.Below(alphabet.size())];
    const Sentence first = Tokenize(s);
    std::string joined;
    for (const auto& t : first) joined += (joined.empty() ? "" : " ") + t.surface;
    EXPECT_EQ(Tokenize(joined), first) << s;
  }
}

TEST(LowercaseWords, WordsOnly) {
  EXPECT_EQ(LowercaseWords("Hey PILLA, 100 times!\nNee Smile"),
            (std::vector<std::string>{"hey", "pilla", "times", "nee", "smile"}));
}

TEST(Utf8, RoundTripAndLength) {
  const std::string s = "naa ప్రేమ…";
  EXPECT_EQ(EncodeUtf8(DecodeUtf8(s)), s);
  EXPECT_EQ(Utf8Length(s), DecodeUtf8(s).size());
  EXPECT_EQ(Utf8Length("abc"), 3u);
}

}  // namespace
}  // namespace cmlyrics
