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

#include "cmlyrics/synthetic.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <span>
#include <string_view>

#include "cmlyrics/rng.h"

namespace cmlyrics {
namespace {

template <size_t N>
std::string_view Pick(Rng& rng, const std::array<std::string_view, N>& options) {
  return options[rng.Below(N)];
}

constexpr std::array<std::string_view, 14> kEnOnsets = {
    "st", "tr", "bl", "gr", "th", "sh", "pl", "cr", "br", "fl", "sw", "dr", "sp", "cl"};
constexpr std::array<std::string_view, 10> kEnSingle = {
    "b", "d", "f", "h", "l", "m", "p", "r", "w", "v"};
constexpr std::array<std::string_view, 6> kEnVowels = {"a", "e", "i", "o", "u", "ea"};
constexpr std::array<std::string_view, 10> kEnCodas = {
    "ck", "st", "nd", "rt", "ng", "sh", "ll", "x", "mp", "ft"};
constexpr std::array<std::string_view, 7> kEnEndings = {
    "", "", "ing", "er", "ed", "ly", "s"};

constexpr std::array<std::string_view, 16> kTeConsonants = {
    "k", "g", "ch", "j", "t", "d", "n", "p", "b", "m", "y", "r", "l", "v", "s", "h"};
constexpr std::array<std::string_view, 7> kTeVowels = {
    "a", "i", "u", "e", "o", "aa", "ee"};
constexpr std::array<std::string_view, 6> kTeFinal = {"u", "a", "i", "am", "anu", "ni"};
constexpr std::array<std::string_view, 7> kPostpositions = {
    "lo", "ki", "ku", "tho", "nunchi", "kosam", "ne"};
constexpr std::array<std::string_view, 5> kPunct = {"!", ",", "?", ".", "..."};

std::string EnglishWord(Rng& rng) {
  std::string w;
  w += rng.Below(2) ? Pick(rng, kEnOnsets) : Pick(rng, kEnSingle);
  w += Pick(rng, kEnVowels);
  w += Pick(rng, kEnCodas);
  w += Pick(rng, kEnEndings);
  return w;
}

std::string TeluguWord(Rng& rng) {
  std::string w;
  const size_t syllables = 1 + rng.Below(3);
  for (size_t i = 0; i < syllables; ++i) {
    w += Pick(rng, kTeConsonants);
    w += Pick(rng, kTeVowels);
  }
  w += Pick(rng, kTeConsonants);
  w += Pick(rng, kTeFinal);
  if (rng.Below(5) == 0) w += Pick(rng, kPostpositions);
  return w;
}

}  // namespace

SyntheticLexicons MakeSyntheticLexicons(size_t n_english, size_t n_telugu,
                                        uint64_t seed) {
  Rng rng(seed);
  SyntheticLexicons lex;
  std::set<std::string> seen;
  while (lex.english.size() < n_english) {
    std::string w = EnglishWord(rng);
    if (seen.insert(w).second) lex.english.push_back(w);
  }
  while (lex.telugu.size() < n_telugu) {
    std::string w = TeluguWord(rng);
    if (seen.insert(w).second) lex.telugu.push_back(w);
  }
  lex.resources.english_lexicon.insert(lex.english.begin(), lex.english.end());
  for (auto p : kPostpositions) lex.resources.telugu_postpositions.emplace(p);
  return lex;
}

std::vector<TaggedSentence> MakeSyntheticTaggedSentences(
    const SyntheticLexicons& lex, size_t n_sentences, double english_rate,
    uint64_t seed) {
  Rng rng(seed);
  std::vector<TaggedSentence> out;
  out.reserve(n_sentences);
  for (size_t s = 0; s < n_sentences; ++s) {
    TaggedSentence ts;
    const size_t len = 3 + rng.Below(8);
    for (size_t i = 0; i < len; ++i) {
      const bool en = rng.Uniform() < english_rate;
      const auto& pool = en ? lex.english : lex.telugu;
      ts.tokens.push_back({pool[rng.Below(pool.size())], TokenKind::kWord});
      ts.tags.push_back(en ? LangTag::kEn : LangTag::kTe);
    }
    if (rng.Below(3) == 0) {
      ts.tokens.push_back({std::string(Pick(rng, kPunct)), TokenKind::kPunct});
      ts.tags.push_back(LangTag::kOther);
    }
    out.push_back(std::move(ts));
  }
  return out;
}

Corpus MakeSyntheticSongCorpus(const SyntheticLexicons& lex,
                               const SyntheticSongConfig& config) {
  Rng rng(config.seed);
  Corpus corpus;
  const size_t per_line = std::max<size_t>(config.words_per_line, 1);
  for (size_t n = 0; n < config.n_songs; ++n) {
    const size_t en =
        config.english_min + rng.Below(config.english_max - config.english_min + 1);
    const size_t te =
        config.telugu_min + rng.Below(config.telugu_max - config.telugu_min + 1);
    // Units: single Telugu words and English runs, shuffled, then flattened.
    std::vector<size_t> units(te, 0);
    const size_t run_max = std::max<size_t>(config.english_run_max, 1);
    for (size_t left = en; left > 0;) {
      const size_t run = std::min(left, 1 + static_cast<size_t>(rng.Below(run_max)));
      units.push_back(run);
      left -= run;
    }
    rng.Shuffle(std::span<size_t>(units));
    std::vector<bool> is_en;
    for (size_t u : units) {
      if (u == 0) is_en.push_back(false);
      else is_en.insert(is_en.end(), u, true);
    }
    std::string text;
    for (size_t i = 0; i < is_en.size(); ++i) {
      const auto& pool = is_en[i] ? lex.english : lex.telugu;
      if (i > 0) text += (i % per_line == 0) ? "\n" : " ";
      text += pool[rng.Below(pool.size())];
    }
    Song song;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%04zu", n);
    song.id = id;
    song.raw_text = text;
    song.text = CleanText(text);
    song.label = en > config.threshold ? Label::kExciting : Label::kNonExciting;
    corpus.songs.push_back(std::move(song));
  }
  return corpus;
}

}  // namespace cmlyrics
