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

#include "cmlyrics/corpus.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"
#include "cmlyrics/rng.h"
#include "cmlyrics/textproc.h"
#include "json.hpp"

namespace cmlyrics {
namespace {

using json = nlohmann::json;

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool StartsWithCI(std::string_view s, size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (AsciiLower(s.substr(pos + i, 1))[0] != prefix[i]) return false;
  }
  return true;
}

// Lowercased tag name of "<...>" starting at pos (which points at '<').
std::string TagName(std::string_view s, size_t pos, size_t end) {
  size_t i = pos + 1;
  if (i < end && s[i] == '/') ++i;
  size_t b = i;
  while (i < end && (IsAsciiAlpha(s[i]) || (s[i] >= '0' && s[i] <= '9'))) ++i;
  return AsciiLower(s.substr(b, i - b));
}

// One pass of tag removal. Tags are "<" followed by a letter, '/' or '!' and
// running to the next '>'.
std::string StripTags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size() &&
        (IsAsciiAlpha(s[i + 1]) || s[i + 1] == '/' || s[i + 1] == '!')) {
      if (s.compare(i, 4, "<!--") == 0) {
        size_t close = s.find("-->", i + 4);
        if (close != std::string_view::npos) {
          i = close + 3;
          continue;
        }
      }
      size_t close = s.find('>', i + 1);
      if (close == std::string_view::npos) {
        out.push_back(s[i++]);
        continue;
      }
      const std::string name = TagName(s, i, close);
      const bool closing = s[i + 1] == '/';
      if (!closing && (name == "script" || name == "style")) {
        const std::string end_tag = "</" + name;
        size_t j = close + 1;
        while (j < s.size() && !StartsWithCI(s, j, end_tag)) ++j;
        size_t end_close = s.find('>', j);
        i = end_close == std::string_view::npos ? s.size() : end_close + 1;
        continue;
      }
      if (name == "br" || name == "p" || name == "div") out.push_back('\n');
      i = close + 1;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string DecodeEntities(std::string_view s) {
  static const std::map<std::string, std::string, std::less<>> kNamed = {
      {"amp", "&"}, {"lt", "<"},   {"gt", ">"},
      {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      size_t semi = s.find(';', i + 1);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string_view body = s.substr(i + 1, semi - i - 1);
        if (!body.empty() && body[0] == '#') {
          char32_t cp = 0;
          bool ok = body.size() > 1;
          const bool hex = ok && (body[1] == 'x' || body[1] == 'X');
          std::string_view digits = body.substr(hex ? 2 : 1);
          ok = ok && !digits.empty();
          for (char c : digits) {
            int v;
            if (c >= '0' && c <= '9') {
              v = c - '0';
            } else if (hex && c >= 'a' && c <= 'f') {
              v = c - 'a' + 10;
            } else if (hex && c >= 'A' && c <= 'F') {
              v = c - 'A' + 10;
            } else {
              ok = false;
              break;
            }
            cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
            if (cp > 0x10FFFF) {
              ok = false;
              break;
            }
          }
          if (ok && cp != 0 && !(cp >= 0xD800 && cp <= 0xDFFF)) {
            out += cp == 0xA0 ? std::string(" ")
                              : EncodeUtf8(std::u32string(1, cp));
            i = semi + 1;
            continue;
          }
        } else if (auto it = kNamed.find(body); it != kNamed.end()) {
          out += it->second;
          i = semi + 1;
          continue;
        }
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string NormalizeWhitespace(std::string_view s) {
  std::vector<std::string> lines;
  std::string line;
  bool pending_space = false;
  auto end_line = [&] {
    lines.push_back(line);
    line.clear();
    pending_space = false;
  };
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\r') {
      if (i + 1 < s.size() && s[i + 1] == '\n') continue;
      c = '\n';
    }
    if (c == '\n') {
      end_line();
    } else if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
      pending_space = !line.empty();
    } else if (c == '\xC2' && i + 1 < s.size() && s[i + 1] == '\xA0') {
      pending_space = !line.empty();
      ++i;
    } else {
      if (pending_space) line.push_back(' ');
      pending_space = false;
      line.push_back(c);
    }
  }
  end_line();
  std::string out;
  bool blank_run = true;  // suppresses leading blank lines
  bool need_blank = false;
  for (const auto& l : lines) {
    if (l.empty()) {
      if (!blank_run) need_blank = true;
      blank_run = true;
      continue;
    }
    if (!out.empty()) out += need_blank ? "\n\n" : "\n";
    out += l;
    blank_run = false;
    need_blank = false;
  }
  return out;
}

Song ParseRecord(std::string_view line, size_t line_no) {
  auto fail = [&](const std::string& why) -> Song {
    ThrowData("line " + std::to_string(line_no) + ": " + why);
  };
  json record;
  try {
    record = json::parse(line);
  } catch (const json::exception& e) {
    return fail(std::string("malformed record: ") + e.what());
  }
  if (!record.is_object()) return fail("record is not an object");
  Song song;
  auto id = record.find("id");
  if (id == record.end() || !id->is_string() || id->get<std::string>().empty())
    return fail("missing or empty \"id\"");
  song.id = id->get<std::string>();
  if (auto t = record.find("title"); t != record.end() && !t->is_null()) {
    if (!t->is_string()) return fail("\"title\" must be a string");
    song.title = t->get<std::string>();
  }
  auto lyrics = record.find("lyrics");
  if (lyrics == record.end() || !lyrics->is_string())
    return fail("missing \"lyrics\" string");
  song.raw_text = lyrics->get<std::string>();
  if (auto l = record.find("label"); l != record.end() && !l->is_null()) {
    if (!l->is_string()) return fail("\"label\" must be a string");
    auto parsed = ParseLabel(l->get<std::string>());
    if (!parsed) return fail("unknown label \"" + l->get<std::string>() + "\"");
    song.label = parsed;
  }
  song.text = CleanText(song.raw_text);
  return song;
}

template <typename T>
double KappaImpl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size())
    ThrowData("kappa: annotation lengths differ (" + std::to_string(a.size()) +
              " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) ThrowData("kappa: no annotations");
  std::map<T, std::pair<size_t, size_t>> marginals;
  size_t agree = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  const double p_o = static_cast<double>(agree) / n;
  double p_e = 0.0;
  for (const auto& [label, counts] : marginals) {
    p_e += (static_cast<double>(counts.first) / n) *
           (static_cast<double>(counts.second) / n);
  }
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace

const char* LabelName(Label label) {
  return label == Label::kExciting ? "exciting" : "non-exciting";
}

std::optional<Label> ParseLabel(std::string_view name) {
  if (name == "exciting") return Label::kExciting;
  if (name == "non-exciting") return Label::kNonExciting;
  return std::nullopt;
}

size_t Corpus::CountLabel(Label label) const {
  return static_cast<size_t>(std::count_if(
      songs.begin(), songs.end(),
      [label](const Song& s) { return s.label == label; }));
}

const Song* Corpus::Find(std::string_view id) const {
  for (const auto& s : songs) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::string CleanText(std::string_view raw) {
  std::string current(raw);
  for (;;) {
    std::string next = DecodeEntities(StripTags(current));
    if (next == current) break;
    current = std::move(next);
  }
  return NormalizeWhitespace(current);
}

Corpus ParseCorpus(std::string_view content) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    Song song = ParseRecord(line, line_no);
    if (!seen.insert(song.id).second)
      ThrowData("duplicate song id \"" + song.id + "\" at line " +
                std::to_string(line_no));
    corpus.songs.push_back(std::move(song));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFile(path));
}

std::string SerializeCorpus(const Corpus& corpus, LyricsField field) {
  std::string out;
  for (const auto& song : corpus.songs) {
    json record = json::object();
    record["id"] = song.id;
    record["title"] = song.title;
    record["lyrics"] = field == LyricsField::kRaw ? song.raw_text : song.text;
    if (song.label) record["label"] = LabelName(*song.label);
    out += record.dump();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                LyricsField field) {
  WriteFile(path, SerializeCorpus(corpus, field));
}

Corpus LoadRawDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    ThrowIo(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Corpus corpus;
  std::unordered_set<std::string> seen;
  for (const auto& f : files) {
    Song song;
    song.id = f.stem().string();
    if (!seen.insert(song.id).second)
      ThrowData("duplicate song id \"" + song.id + "\" in " + dir.string());
    song.raw_text = ReadFile(f);
    song.text = CleanText(song.raw_text);
    corpus.songs.push_back(std::move(song));
  }
  return corpus;
}

std::vector<FoldSplit> MakeFolds(const Corpus& corpus, int k, uint64_t seed) {
  if (k < 2) ThrowUsage("fold count must be at least 2, got " + std::to_string(k));
  const size_t n = corpus.size();
  if (n < static_cast<size_t>(k))
    ThrowData("corpus of " + std::to_string(n) + " songs is too small for " +
              std::to_string(k) + " folds");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& s : corpus.songs) ids.push_back(s.id);
  Rng rng(seed);
  rng.Shuffle(std::span<std::string>(ids));

  const size_t kk = static_cast<size_t>(k);
  const size_t base = n / kk;
  const size_t extra = n % kk;
  std::vector<FoldSplit> folds;
  size_t begin = 0;
  for (size_t f = 0; f < kk; ++f) {
    const size_t len = base + (f < extra ? 1 : 0);
    const size_t end = begin + len;
    FoldSplit split;
    split.fold_index = static_cast<int>(f);
    split.test.assign(ids.begin() + static_cast<ptrdiff_t>(begin),
                      ids.begin() + static_cast<ptrdiff_t>(end));
    std::vector<std::string> rest;
    rest.reserve(n - len);
    rest.insert(rest.end(), ids.begin() + static_cast<ptrdiff_t>(end), ids.end());
    rest.insert(rest.end(), ids.begin(),
                ids.begin() + static_cast<ptrdiff_t>(begin));
    const size_t dev_n = rest.size() / 5;
    split.dev.assign(rest.begin(), rest.begin() + static_cast<ptrdiff_t>(dev_n));
    split.train.assign(rest.begin() + static_cast<ptrdiff_t>(dev_n), rest.end());
    folds.push_back(std::move(split));
    begin = end;
  }
  return folds;
}

double CohenKappa(std::span<const std::string> a,
                  std::span<const std::string> b) {
  return KappaImpl(a, b);
}

double CohenKappa(std::span<const Label> a, std::span<const Label> b) {
  return KappaImpl(a, b);
}

std::vector<std::string> LoadAnnotations(const std::filesystem::path& path) {
  const std::string content = ReadFile(path);
  std::vector<std::string> labels;
  size_t pos = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    labels.emplace_back(line.substr(b, e - b + 1));
  }
  return labels;
}

}  // namespace cmlyrics
