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

#include "cmlyrics/cmfeatures.h"

#include <cmath>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"

namespace cmlyrics {

CodeMixFeatures ExtractCodeMixedFeatures(
    std::span<const TaggedSentence> tagged) {
  size_t en_words = 0;
  size_t en_chars = 0;
  size_t en_sentences = 0;
  size_t en_sentence_words = 0;
  for (const auto& sentence : tagged) {
    size_t words = 0;
    size_t en = 0;
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (sentence.tokens[i].kind != TokenKind::kWord) continue;
      ++words;
      if (sentence.tags[i] == LangTag::kEn) {
        ++en;
        en_chars += Utf8Length(sentence.tokens[i].surface);
      }
    }
    en_words += en;
    if (words > 0 && 2 * en > words) {
      ++en_sentences;
      en_sentence_words += words;
    }
  }
  CodeMixFeatures f;
  f.s1 = static_cast<double>(en_words);
  f.s2 = en_words ? static_cast<double>(en_chars) / static_cast<double>(en_words) : 0.0;
  f.s3 = static_cast<double>(en_sentences);
  f.s4 = en_sentences ? static_cast<double>(en_sentence_words) /
                            static_cast<double>(en_sentences)
                      : 0.0;
  return f;
}

std::array<double, 4> FeatureScaler::Scale(const CodeMixFeatures& f) const {
  const auto v = f.AsArray();
  std::array<double, 4> out{};
  for (size_t i = 0; i < 4; ++i) out[i] = (v[i] - mean[i]) / stdev[i];
  return out;
}

FeatureScaler FitScaler(std::span<const CodeMixFeatures> features) {
  if (features.empty()) ThrowData("cannot fit a feature scaler on no songs");
  const double n = static_cast<double>(features.size());
  FeatureScaler scaler;
  for (size_t c = 0; c < 4; ++c) {
    double sum = 0.0;
    for (const auto& f : features) sum += f.AsArray()[c];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& f : features) {
      const double d = f.AsArray()[c] - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / n);
    scaler.mean[c] = mean;
    scaler.stdev[c] = sd < 1e-12 ? 1.0 : sd;
  }
  return scaler;
}

std::string FormatFeatureLine(std::string_view id, const CodeMixFeatures& f) {
  std::string out(id);
  for (double v : f.AsArray()) {
    out += '\t';
    out += FormatDouble(v);
  }
  return out;
}

}  // namespace cmlyrics
