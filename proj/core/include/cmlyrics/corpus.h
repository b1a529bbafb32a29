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

#ifndef CMLYRICS_CORPUS_H_
#define CMLYRICS_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmlyrics {

enum class Label { kExciting = 0, kNonExciting = 1 };

// "exciting" / "non-exciting".
const char* LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);

struct Song {
  std::string id;
  std::string title;
  std::string raw_text;
  std::string text;  // CleanText(raw_text)
  std::optional<Label> label;

  bool operator==(const Song&) const = default;
};

struct Corpus {
  std::vector<Song> songs;

  size_t size() const { return songs.size(); }
  size_t CountLabel(Label label) const;
  const Song* Find(std::string_view id) const;

  bool operator==(const Corpus&) const = default;
};

// Strips HTML tags (br, p and div become line breaks; script, style and
// comments are removed with their content), decodes &amp; &lt; &gt; &quot;
// &apos; &nbsp; and numeric entities, collapses blanks, trims every line and
// keeps at most one blank line between stanzas. Tag stripping and entity
// decoding repeat until nothing changes, so the result never contains a tag
// and CleanText is idempotent.
std::string CleanText(std::string_view raw);

// Song-record file: one JSON object per line,
//   {"id": "...", "title": "...", "lyrics": "...", "label": "exciting"}
// "title" and "label" may be omitted; "label" may be null. Blank lines are
// ignored. Throws Error(kData) naming the line on a malformed record and
// naming the id on a duplicate.
Corpus LoadCorpus(const std::filesystem::path& path);
Corpus ParseCorpus(std::string_view content);

// Serializes one record per line. With kRaw the lyrics field holds raw_text
// (exact round trip); with kCleaned it holds the cleaned text.
enum class LyricsField { kRaw, kCleaned };
std::string SerializeCorpus(const Corpus& corpus,
                            LyricsField field = LyricsField::kRaw);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                LyricsField field = LyricsField::kRaw);

// Reads every regular file of a directory as one unlabeled song, id = file
// stem, in lexicographic path order.
Corpus LoadRawDirectory(const std::filesystem::path& dir);

struct FoldSplit {
  int fold_index = 0;
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

// k-fold partition with a train/dev split of each remainder.
//
// Ids are shuffled once with Rng(seed). Fold f takes the f-th contiguous block
// as test; blocks have floor(n/k) or ceil(n/k) ids, the larger ones first. The
// remainder, read cyclically from the end of the test block, gives
// floor(0.2 * |remainder|) dev ids followed by the train ids.
std::vector<FoldSplit> MakeFolds(const Corpus& corpus, int k, uint64_t seed);

// Cohen's kappa between two annotators over the same items. Returns 1.0 when
// the expected agreement is 1 (both annotators used one identical label).
double CohenKappa(std::span<const std::string> a, std::span<const std::string> b);
double CohenKappa(std::span<const Label> a, std::span<const Label> b);

// Annotation file for the kappa tool: one label per line, blank lines skipped,
// surrounding whitespace trimmed.
std::vector<std::string> LoadAnnotations(const std::filesystem::path& path);

}  // namespace cmlyrics

#endif  // CMLYRICS_CORPUS_H_
