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

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"
#include "cmlyrics/rng.h"
#include "test_util.h"

namespace cmlyrics {
namespace {

using cmlyrics::testing::ScratchDir;
using cmlyrics::testing::SourceDir;

Corpus NumberedCorpus(size_t n) {
  Corpus c;
  for (size_t i = 0; i < n; ++i) {
    Song s;
    s.id = "song" + std::to_string(i);
    s.raw_text = s.text = "la la";
    s.label = i % 2 ? Label::kExciting : Label::kNonExciting;
    c.songs.push_back(s);
  }
  return c;
}

TEST(CleanText, Examples) {
  EXPECT_EQ(CleanText("<b>naa</b> pranam"), "naa pranam");
  EXPECT_EQ(CleanText(""), "");
  EXPECT_EQ(CleanText("line1<br/>line2 &amp; line3"), "line1\nline2 & line3");
}

TEST(CleanText, EntitiesWhitespaceAndBlocks) {
  EXPECT_EQ(CleanText("a &lt;3 &quot;b&quot; &#65;&#x42;"), "a <3 \"b\" AB");
  EXPECT_EQ(CleanText("  x \t  y  \n\n\n\n z "), "x y\n\nz");
  EXPECT_EQ(CleanText("<script>var x=1;</script>hi<!-- c -->!"), "hi!");
  EXPECT_EQ(CleanText("<p>one</p><div>two</div>"), "one\n\ntwo");
}

TEST(CleanText, NoTagsAndIdempotent) {
  const std::regex tag("<[a-zA-Z/!][^>]*>");
  Rng rng(17);
  const std::vector<std::string> pieces = {"<b>", "</b>", "<br>", "&amp;", "&lt;", "b&gt;",
                                           "&lt;i", ">", "<", "x", " ", "\n", "\t",
                                           "&#60;", "p>", "<!--", "-->", "&quot;", "ok"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const size_t n = rng.Below(15);
    for (size_t i = 0; i < n; ++i) raw += pieces[rng.Below(pieces.size())];
    const std::string once = CleanText(raw);
    EXPECT_FALSE(std::regex_search(once, tag)) << raw << " -> " << once;
    EXPECT_EQ(CleanText(once), once) << raw;
  }
}

TEST(ParseCorpus, TwoRecords) {
  const Corpus c = ParseCorpus(
      "{\"id\":\"a\",\"title\":\"T\",\"lyrics\":\"<i>x</i>\",\"label\":\"exciting\"}\n"
      "\n"
      "{\"id\":\"b\",\"lyrics\":\"y\"}\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.songs[0].text, "x");
  EXPECT_EQ(c.songs[0].raw_text, "<i>x</i>");
  EXPECT_EQ(c.songs[0].label, Label::kExciting);
  EXPECT_FALSE(c.songs[1].label.has_value());
  EXPECT_EQ(c.CountLabel(Label::kExciting), 1u);
  ASSERT_NE(c.Find("b"), nullptr);
  EXPECT_EQ(c.Find("zz"), nullptr);
}

TEST(ParseCorpus, DuplicateIdNamesId) {
  try {
    ParseCorpus("{\"id\":\"s1\",\"lyrics\":\"a\"}\n{\"id\":\"s1\",\"lyrics\":\"b\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kData);
    EXPECT_NE(std::string(e.what()).find("s1"), std::string::npos);
  }
}

TEST(ParseCorpus, MalformedNamesLine) {
  for (const char* bad : {"{\"id\":\"a\"", "{\"lyrics\":\"x\"}", "[1]",
                          "{\"id\":\"a\",\"lyrics\":\"x\",\"label\":\"happy\"}"}) {
    try {
      ParseCorpus(std::string("{\"id\":\"ok\",\"lyrics\":\"x\"}\n") + bad + "\n");
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
}

TEST(Corpus, SampleRoundTrip) {
  const Corpus c = LoadCorpus(SourceDir() / "data/sample_songs.jsonl");
  EXPECT_EQ(c.size(), 20u);
  EXPECT_EQ(c.CountLabel(Label::kExciting), 10u);
  EXPECT_EQ(c.CountLabel(Label::kNonExciting), 10u);
  const auto dir = ScratchDir("corpus_rt");
  SaveCorpus(c, dir / "c.jsonl");
  EXPECT_EQ(LoadCorpus(dir / "c.jsonl"), c);
  // Cleaned output reloads to the same cleaned text.
  const Corpus cleaned = ParseCorpus(SerializeCorpus(c, LyricsField::kCleaned));
  for (size_t i = 0; i < c.size(); ++i) EXPECT_EQ(cleaned.songs[i].text, c.songs[i].text);
}

TEST(Corpus, RawDirectory) {
  const auto dir = ScratchDir("rawdir");
  WriteFile(dir / "b.txt", "two<br>lines");
  WriteFile(dir / "a.txt", "one");
  const Corpus c = LoadRawDirectory(dir);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.songs[0].id, "a");
  EXPECT_EQ(c.songs[1].text, "two\nlines");
  EXPECT_FALSE(c.songs[0].label.has_value());
}

void CheckFolds(const Corpus& c, int k, uint64_t seed) {
  const auto folds = MakeFolds(c, k, seed);
  ASSERT_EQ(folds.size(), static_cast<size_t>(k));
  std::set<std::string> all;
  for (const auto& s : c.songs) all.insert(s.id);
  std::multiset<std::string> tests;
  for (const auto& f : folds) {
    std::set<std::string> seen;
    for (const auto* part : {&f.train, &f.dev, &f.test})
      for (const auto& id : *part) EXPECT_TRUE(seen.insert(id).second) << id;
    EXPECT_EQ(seen, all);
    const size_t rest = c.size() - f.test.size();
    EXPECT_EQ(f.dev.size(), rest / 5);
    tests.insert(f.test.begin(), f.test.end());
  }
  EXPECT_EQ(std::set<std::string>(tests.begin(), tests.end()), all);
  EXPECT_EQ(tests.size(), all.size());
}

TEST(MakeFolds, HundredSongs) {
  const Corpus c = NumberedCorpus(100);
  const auto folds = MakeFolds(c, 5, 7);
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size(), 20u);
    EXPECT_EQ(f.dev.size(), 16u);
    EXPECT_EQ(f.train.size(), 64u);
  }
  CheckFolds(c, 5, 7);
}

TEST(MakeFolds, Deterministic) {
  const Corpus c = NumberedCorpus(37);
  const auto a = MakeFolds(c, 4, 99);
  const auto b = MakeFolds(c, 4, 99);
  for (size_t f = 0; f < a.size(); ++f) {
    EXPECT_EQ(a[f].train, b[f].train);
    EXPECT_EQ(a[f].dev, b[f].dev);
    EXPECT_EQ(a[f].test, b[f].test);
  }
  EXPECT_NE(MakeFolds(c, 4, 100)[0].test, a[0].test);
}

TEST(MakeFolds, SeventeenFortyFourSongs) {
  const Corpus c = NumberedCorpus(1744);
  const auto folds = MakeFolds(c, 5, 42);
  std::vector<size_t> sizes;
  for (const auto& f : folds) sizes.push_back(f.test.size());
  EXPECT_EQ(sizes, (std::vector<size_t>{349, 349, 349, 349, 348}));
  CheckFolds(c, 5, 42);
}

TEST(MakeFolds, PartitionProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng.Below(8));
    const size_t n = static_cast<size_t>(k) + rng.Below(60);
    CheckFolds(NumberedCorpus(n), k, rng.NextU64());
  }
}

TEST(MakeFolds, Errors) {
  EXPECT_THROW(MakeFolds(NumberedCorpus(10), 1, 0), Error);
  EXPECT_THROW(MakeFolds(NumberedCorpus(3), 5, 0), Error);
}

TEST(CohenKappa, Examples) {
  using L = Label;
  const L E = L::kExciting, N = L::kNonExciting;
  const std::vector<L> a1{E, N, E, N};
  EXPECT_DOUBLE_EQ(CohenKappa(a1, a1), 1.0);
  const std::vector<L> a2{E, E, N, N}, b2{E, N, E, N};
  EXPECT_NEAR(CohenKappa(a2, b2), 0.0, 1e-12);
  const std::vector<L> a3{E, E, E, N}, b3{E, E, N, N};
  EXPECT_NEAR(CohenKappa(a3, b3), 0.5, 1e-12);
  const std::vector<L> same{E, E, E};
  EXPECT_DOUBLE_EQ(CohenKappa(same, same), 1.0);
}

TEST(CohenKappa, SymmetricAndBounded) {
  Rng rng(8);
  const std::vector<std::string> labels = {"x", "y", "z"};
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.Below(20);
    std::vector<std::string> a, b;
    for (size_t i = 0; i < n; ++i) {
      a.push_back(labels[rng.Below(3)]);
      b.push_back(labels[rng.Below(3)]);
    }
    const double k = CohenKappa(a, b);
    EXPECT_NEAR(k, CohenKappa(b, a), 1e-12);
    EXPECT_GE(k, -1.0 - 1e-12);
    EXPECT_LE(k, 1.0 + 1e-12);
  }
}

TEST(CohenKappa, Errors) {
  const std::vector<std::string> a{"x", "y"}, b{"x"}, none;
  EXPECT_THROW(CohenKappa(a, b), Error);
  EXPECT_THROW(CohenKappa(none, none), Error);
}

TEST(LoadAnnotations, TrimsAndSkipsBlanks) {
  const auto dir = ScratchDir("annot");
  WriteFile(dir / "a.txt", " exciting\n\nnon-exciting \r\n");
  EXPECT_EQ(LoadAnnotations(dir / "a.txt"),
            (std::vector<std::string>{"exciting", "non-exciting"}));
}

}  // namespace
}  // namespace cmlyrics
