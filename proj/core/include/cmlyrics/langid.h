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

// Token-level language identification: tags, lexical resources, the feature
// templates fed to the CRF, and the tagged-data file format.

#ifndef CMLYRICS_LANGID_H_
#define CMLYRICS_LANGID_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmlyrics/textproc.h"

namespace cmlyrics {

enum class LangTag { kTe = 0, kEn = 1, kOther = 2 };

inline constexpr int kNumLangTags = 3;

// "te", "en", "other".
const char* LangTagName(LangTag tag);
std::optional<LangTag> ParseLangTag(std::string_view name);

struct LangResources {
  std::set<std::string, std::less<>> english_lexicon;       // lowercase
  std::set<std::string, std::less<>> telugu_postpositions;  // lowercase

  // Both lookups lowercase their argument first.
  bool InLexicon(std::string_view word) const;
  bool HasPostpositionSuffix(std::string_view word) const;
};

// Plain-text word list, one entry per line; entries are trimmed and
// lowercased, blank lines and lines starting with '#' are skipped.
std::set<std::string, std::less<>> LoadWordList(
    const std::filesystem::path& path);

// Throws Error(kData) if either list is empty.
LangResources LoadLangResources(const std::filesystem::path& lexicon,
                                const std::filesystem::path& postpositions);

// Sorted, duplicate-free "name=value" strings.
using TokenFeatures = std::vector<std::string>;

// Feature templates for token i (all surfaces lowercased):
//   w=<word>, p1..p4= / s1..s4= prefixes and suffixes up to the word length,
//   inf=<s> for every substring of 2 or 3 characters,
//   postpos=1|0, dict=1|0, len=<code points>, kind=word|punct|number,
//   prev=/next= neighbouring words, prevp1..2= prevs1..2= nextp1..2=
//   nexts1..2= neighbouring affixes. BOS/EOS stand in for missing neighbours.
// Throws Error(kData) when i is out of range.
TokenFeatures ExtractTokenFeatures(const Sentence& sentence, size_t i,
                                   const LangResources& resources);

struct TaggedSentence {
  Sentence tokens;
  std::vector<LangTag> tags;

  bool operator==(const TaggedSentence&) const = default;
};

// Tagged-data file: "surface<TAB>tag" per line, tag in {te,en,other}, a blank
// line between sentences. Token kinds are re-derived from the surface.
std::vector<TaggedSentence> ParseTaggedData(std::string_view content);
std::vector<TaggedSentence> LoadTaggedData(const std::filesystem::path& path);
std::string SerializeTaggedData(const std::vector<TaggedSentence>& data);

// Tagged corpus: each song starts with a "# id=<id>" line followed by its
// sentences in the tagged-data format.
struct TaggedSong {
  std::string id;
  std::vector<TaggedSentence> sentences;

  bool operator==(const TaggedSong&) const = default;
};

std::string SerializeTaggedCorpus(const std::vector<TaggedSong>& songs);
std::vector<TaggedSong> ParseTaggedCorpus(std::string_view content);

}  // namespace cmlyrics

#endif  // CMLYRICS_LANGID_H_
