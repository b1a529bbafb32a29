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

// Sentence segmentation and tokenization for romanized code-mixed lyrics.
//
// A lyric line is always a sentence boundary; so are the sentence-final marks
// . ! ? U+2026 (ellipsis) and U+0964 / U+0965 (danda). Tokens are
// whitespace-separated chunks with leading and trailing punctuation peeled off
// into their own tokens. Apostrophes and hyphens inside a word stay attached.

#ifndef CMLYRICS_TEXTPROC_H_
#define CMLYRICS_TEXTPROC_H_

#include <string>
#include <string_view>
#include <vector>

namespace cmlyrics {

enum class TokenKind { kWord, kPunct, kNumber };

const char* TokenKindName(TokenKind kind);

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kWord;

  bool operator==(const Token&) const = default;
};

using Sentence = std::vector<Token>;

// Classifies a non-empty surface: any letter makes it a Word, otherwise any
// digit makes it a Number, otherwise Punct. Non-ASCII code points other than
// the punctuation marks listed above count as letters.
TokenKind ClassifySurface(std::string_view surface);

std::vector<std::string> SplitSentences(std::string_view text);

// Throws Error(kData) when the input holds no token.
Sentence Tokenize(std::string_view sentence);

// Lowercased surfaces of the Word tokens of a cleaned text, in order.
std::vector<std::string> LowercaseWords(std::string_view text);

// Lowercases ASCII letters; other bytes pass through.
std::string AsciiLower(std::string_view s);

// UTF-8 helpers. Invalid sequences decode byte-wise as U+FFFD.
std::u32string DecodeUtf8(std::string_view s);
std::string EncodeUtf8(std::u32string_view s);
size_t Utf8Length(std::string_view s);

}  // namespace cmlyrics

#endif  // CMLYRICS_TEXTPROC_H_
