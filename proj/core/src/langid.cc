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

#include "cmlyrics/langid.h"

#include <algorithm>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"

namespace cmlyrics {
namespace {

void AddAffixes(std::vector<std::string>& out, const std::string& prefix_name,
                const std::string& suffix_name, const std::u32string& word,
                size_t max_len) {
  for (size_t n = 1; n <= std::min(max_len, word.size()); ++n) {
    out.push_back(prefix_name + std::to_string(n) + "=" +
                  EncodeUtf8(word.substr(0, n)));
    out.push_back(suffix_name + std::to_string(n) + "=" +
                  EncodeUtf8(word.substr(word.size() - n)));
  }
}

void AddNeighbor(std::vector<std::string>& out, const std::string& side,
                 const std::u32string* word, const char* marker) {
  if (word == nullptr) {
    out.push_back(side + "=" + marker);
    for (int n = 1; n <= 2; ++n) {
      out.push_back(side + "p" + std::to_string(n) + "=" + marker);
      out.push_back(side + "s" + std::to_string(n) + "=" + marker);
    }
    return;
  }
  out.push_back(side + "=" + EncodeUtf8(*word));
  AddAffixes(out, side + "p", side + "s", *word, 2);
}

}  // namespace

const char* LangTagName(LangTag tag) {
  switch (tag) {
    case LangTag::kTe:
      return "te";
    case LangTag::kEn:
      return "en";
    case LangTag::kOther:
      return "other";
  }
  return "other";
}

std::optional<LangTag> ParseLangTag(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "te") return LangTag::kTe;
  if (lower == "en") return LangTag::kEn;
  if (lower == "other") return LangTag::kOther;
  return std::nullopt;
}

bool LangResources::InLexicon(std::string_view word) const {
  return english_lexicon.contains(AsciiLower(word));
}

bool LangResources::HasPostpositionSuffix(std::string_view word) const {
  const std::string lower = AsciiLower(word);
  for (const auto& p : telugu_postpositions) {
    if (p.size() <= lower.size() &&
        lower.compare(lower.size() - p.size(), p.size(), p) == 0)
      return true;
  }
  return false;
}

std::set<std::string, std::less<>> LoadWordList(
    const std::filesystem::path& path) {
  const std::string content = ReadFile(path);
  std::set<std::string, std::less<>> words;
  size_t pos = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos || line[b] == '#') continue;
    size_t e = line.find_last_not_of(" \t\r");
    words.insert(AsciiLower(line.substr(b, e - b + 1)));
  }
  return words;
}

LangResources LoadLangResources(const std::filesystem::path& lexicon,
                                const std::filesystem::path& postpositions) {
  LangResources res;
  res.english_lexicon = LoadWordList(lexicon);
  res.telugu_postpositions = LoadWordList(postpositions);
  if (res.english_lexicon.empty())
    ThrowData("English lexicon " + lexicon.string() + " is empty");
  if (res.telugu_postpositions.empty())
    ThrowData("postposition list " + postpositions.string() + " is empty");
  return res;
}

TokenFeatures ExtractTokenFeatures(const Sentence& sentence, size_t i,
                                   const LangResources& resources) {
  if (i >= sentence.size())
    ThrowData("token index " + std::to_string(i) + " out of range for sentence of " +
              std::to_string(sentence.size()));
  const std::string lower = AsciiLower(sentence[i].surface);
  const std::u32string word = DecodeUtf8(lower);
  TokenFeatures f;
  f.reserve(48);
  f.push_back("w=" + lower);
  AddAffixes(f, "p", "s", word, 4);
  for (size_t n = 2; n <= 3; ++n) {
    for (size_t b = 0; b + n <= word.size(); ++b) {
      f.push_back("inf=" + EncodeUtf8(word.substr(b, n)));
    }
  }
  f.push_back(resources.HasPostpositionSuffix(lower) ? "postpos=1" : "postpos=0");
  f.push_back("len=" + std::to_string(word.size()));
  f.push_back(resources.InLexicon(lower) ? "dict=1" : "dict=0");
  f.push_back(std::string("kind=") + TokenKindName(sentence[i].kind));

  std::u32string prev;
  std::u32string next;
  if (i > 0) prev = DecodeUtf8(AsciiLower(sentence[i - 1].surface));
  if (i + 1 < sentence.size())
    next = DecodeUtf8(AsciiLower(sentence[i + 1].surface));
  AddNeighbor(f, "prev", i > 0 ? &prev : nullptr, "BOS");
  AddNeighbor(f, "next", i + 1 < sentence.size() ? &next : nullptr, "EOS");

  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::vector<TaggedSentence> ParseTaggedData(std::string_view content) {
  std::vector<TaggedSentence> data;
  TaggedSentence current;
  auto flush = [&] {
    if (!current.tokens.empty()) data.push_back(std::move(current));
    current = TaggedSentence{};
  };
  size_t pos = 0;
  size_t line_no = 0;
  while (pos <= content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0)
      ThrowData("tagged data line " + std::to_string(line_no) +
                ": expected \"surface<TAB>tag\"");
    std::string_view surface = line.substr(0, tab);
    std::string_view tag_name = line.substr(tab + 1);
    while (!tag_name.empty() && (tag_name.back() == ' ' || tag_name.back() == '\t'))
      tag_name.remove_suffix(1);
    auto tag = ParseLangTag(tag_name);
    if (!tag)
      ThrowData("tagged data line " + std::to_string(line_no) + ": unknown tag \"" +
                std::string(tag_name) + "\"");
    current.tokens.push_back({std::string(surface), ClassifySurface(surface)});
    current.tags.push_back(*tag);
  }
  flush();
  return data;
}

std::vector<TaggedSentence> LoadTaggedData(const std::filesystem::path& path) {
  return ParseTaggedData(ReadFile(path));
}

std::string SerializeTaggedData(const std::vector<TaggedSentence>& data) {
  std::string out;
  for (size_t s = 0; s < data.size(); ++s) {
    if (s > 0) out += '\n';
    for (size_t i = 0; i < data[s].tokens.size(); ++i) {
      out += data[s].tokens[i].surface;
      out += '\t';
      out += LangTagName(data[s].tags[i]);
      out += '\n';
    }
  }
  return out;
}

std::string SerializeTaggedCorpus(const std::vector<TaggedSong>& songs) {
  std::string out;
  for (const auto& song : songs) {
    out += "# id=" + song.id + "\n";
    out += SerializeTaggedData(song.sentences);
    out += '\n';
  }
  return out;
}

std::vector<TaggedSong> ParseTaggedCorpus(std::string_view content) {
  constexpr std::string_view kHeader = "# id=";
  std::vector<TaggedSong> songs;
  size_t pos = 0;
  size_t body_start = std::string_view::npos;
  auto close = [&](size_t end) {
    if (songs.empty()) return;
    try {
      songs.back().sentences = ParseTaggedData(content.substr(body_start, end - body_start));
    } catch (const Error& e) {
      ThrowData("song \"" + songs.back().id + "\": " + e.what());
    }
  };
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    if (line.substr(0, kHeader.size()) == kHeader) {
      close(pos);
      std::string_view id = line.substr(kHeader.size());
      while (!id.empty() && (id.back() == '\r' || id.back() == ' ')) id.remove_suffix(1);
      if (id.empty()) ThrowData("tagged corpus: empty song id");
      songs.push_back({std::string(id), {}});
      body_start = std::min(nl + 1, content.size());
    } else if (songs.empty() && line.find_first_not_of(" \t\r") != std::string_view::npos) {
      ThrowData("tagged corpus must start with a \"# id=\" line");
    }
    pos = nl + 1;
  }
  close(content.size());
  return songs;
}

}  // namespace cmlyrics
