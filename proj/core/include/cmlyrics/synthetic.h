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

// Seeded generators for synthetic code-mixed data: made-up English-like and
// Telugu-like lexicons, tagged sentences for the language identifier and song
// corpora whose arousal label is a function of the English-token count.

#ifndef CMLYRICS_SYNTHETIC_H_
#define CMLYRICS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cmlyrics/corpus.h"
#include "cmlyrics/langid.h"

namespace cmlyrics {

struct SyntheticLexicons {
  std::vector<std::string> english;  // all present in resources.english_lexicon
  std::vector<std::string> telugu;   // none in the lexicon
  LangResources resources;
};

// Disjoint word lists. English-like words mix consonant clusters and common
// English endings; Telugu-like words are consonant-vowel syllable chains, some
// carrying a postposition suffix.
SyntheticLexicons MakeSyntheticLexicons(size_t n_english, size_t n_telugu,
                                        uint64_t seed);

// Sentences of 3-10 words; each word is English with probability
// english_rate. Tag is En iff the word is English; a trailing punctuation
// token (tagged Other) is added to about a third of the sentences.
std::vector<TaggedSentence> MakeSyntheticTaggedSentences(
    const SyntheticLexicons& lex, size_t n_sentences, double english_rate,
    uint64_t seed);

struct SyntheticSongConfig {
  size_t n_songs = 1000;
  size_t english_min = 0;   // English tokens per song, uniform in [min, max]
  size_t english_max = 16;
  size_t telugu_min = 12;   // Telugu tokens per song, uniform in [min, max]
  size_t telugu_max = 48;
  size_t english_run_max = 4;  // English tokens come in runs of 1..max
  size_t threshold = 8;     // Exciting iff English count > threshold
  size_t words_per_line = 6;
  uint64_t seed = 7;
};

// Songs "syn-0000", ... with lines of words_per_line words; English tokens
// appear in short runs placed at random among the Telugu words.
Corpus MakeSyntheticSongCorpus(const SyntheticLexicons& lex,
                               const SyntheticSongConfig& config);

}  // namespace cmlyrics

#endif  // CMLYRICS_SYNTHETIC_H_
