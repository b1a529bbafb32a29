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

#include <algorithm>

#include "cmlyrics/error.h"

namespace cmlyrics {
namespace {

bool IsSpace(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == U'\n' || c == 0xA0;
}

bool IsSentenceFinal(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x2026 || c == 0x0964 ||
         c == 0x0965;
}

// Punctuation beyond ASCII that shows up in scraped lyrics.
bool IsUnicodePunct(char32_t c) {
  return (c >= 0x2010 && c <= 0x205E) || c == 0x0964 || c == 0x0965 ||
         c == 0x00AB || c == 0x00BB || c == 0x00BF || c == 0x00A1 ||
         c == 0x3001 || c == 0x3002;
}

bool IsLetter(char32_t c) {
  if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  return !IsUnicodePunct(c) && !IsSpace(c);
}

bool IsDigit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool IsPunct(char32_t c) { return !IsLetter(c) && !IsDigit(c) && !IsSpace(c); }

std::u32string_view Trim(std::u32string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord:
      return "word";
    case TokenKind::kPunct:
      return "punct";
    case TokenKind::kNumber:
      return "number";
  }
  return "word";
}

std::u32string DecodeUtf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

size_t Utf8Length(std::string_view s) {
  size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

TokenKind ClassifySurface(std::string_view surface) {
  bool digit = false;
  for (char32_t c : DecodeUtf8(surface)) {
    if (IsLetter(c)) return TokenKind::kWord;
    if (IsDigit(c)) digit = true;
  }
  return digit ? TokenKind::kNumber : TokenKind::kPunct;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  const std::u32string chars = DecodeUtf8(text);
  std::vector<std::string> out;
  auto flush = [&](size_t begin, size_t end) {
    std::u32string_view piece =
        Trim(std::u32string_view(chars).substr(begin, end - begin));
    if (!piece.empty()) out.push_back(EncodeUtf8(piece));
  };
  size_t start = 0;
  size_t i = 0;
  while (i < chars.size()) {
    const char32_t c = chars[i];
    if (c == U'\n') {
      flush(start, i);
      start = ++i;
      continue;
    }
    if (IsSentenceFinal(c)) {
      // Keep runs like "?!" or "..." attached to the sentence they close.
      size_t j = i + 1;
      while (j < chars.size() && IsSentenceFinal(chars[j])) ++j;
      // A period inside a token (e.g. "3.5", "a.m") is not a boundary.
      const bool boundary = j >= chars.size() || IsSpace(chars[j]) ||
                            c != U'.' || j - i > 1;
      if (boundary) {
        flush(start, j);
        start = i = j;
        continue;
      }
      i = j;
      continue;
    }
    ++i;
  }
  flush(start, chars.size());
  return out;
}

Sentence Tokenize(std::string_view sentence) {
  const std::u32string chars = DecodeUtf8(sentence);
  Sentence tokens;
  size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && IsSpace(chars[i])) ++i;
    size_t end = i;
    while (end < chars.size() && !IsSpace(chars[end])) ++end;
    if (end == i) break;
    std::u32string_view chunk(chars.data() + i, end - i);
    // Peel leading punctuation, one character per token.
    size_t b = 0;
    size_t e = chunk.size();
    while (b < e && IsPunct(chunk[b])) ++b;
    while (e > b && IsPunct(chunk[e - 1])) --e;
    for (size_t k = 0; k < b; ++k) {
      tokens.push_back({EncodeUtf8(chunk.substr(k, 1)), TokenKind::kPunct});
    }
    if (e > b) {
      std::string core = EncodeUtf8(chunk.substr(b, e - b));
      TokenKind kind = ClassifySurface(core);
      tokens.push_back({std::move(core), kind});
    }
    for (size_t k = std::max(b, e); k < chunk.size(); ++k) {
      tokens.push_back({EncodeUtf8(chunk.substr(k, 1)), TokenKind::kPunct});
    }
    i = end;
  }
  if (tokens.empty()) ThrowData("cannot tokenize an empty sentence");
  return tokens;
}

std::vector<std::string> LowercaseWords(std::string_view text) {
  std::vector<std::string> words;
  for (const auto& sentence : SplitSentences(text)) {
    for (auto& token : Tokenize(sentence)) {
      if (token.kind == TokenKind::kWord) words.push_back(AsciiLower(token.surface));
    }
  }
  return words;
}

}  // namespace cmlyrics
