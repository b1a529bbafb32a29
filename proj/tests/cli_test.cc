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

// Runs the cmlyrics binary and checks exit codes, output and that each
// subcommand agrees with the library call it wraps.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmlyrics/cmfeatures.h"
#include "cmlyrics/corpus.h"
#include "cmlyrics/experiment.h"
#include "cmlyrics/io.h"
#include "cmlyrics/langid.h"
#include "test_util.h"

namespace cmlyrics {
namespace {

using namespace cmlyrics::testing;

struct RunResult {
  int status = -1;
  std::string out;
};

// Runs the CLI from the source directory; stderr is merged into out.
RunResult Cli(const std::string& args) {
  const std::string cmd = "cd '" + SourceDir().string() + "' && '" CMLYRICS_CLI_PATH "' " +
                          args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Write(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

TEST(Cli, KappaIdenticalFiles) {
  const auto dir = ScratchDir("cli_kappa");
  Write(dir / "a.txt", "exciting\nnon-exciting\nexciting\n");
  Write(dir / "c.txt", "exciting\nexciting\nexciting\n");
  const auto r = Cli("kappa " + Q(dir / "a.txt") + " " + Q(dir / "a.txt"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "1.0000\n");
  const auto r2 = Cli("kappa " + Q(dir / "a.txt") + " " + Q(dir / "c.txt"));
  EXPECT_EQ(r2.status, 0);
  EXPECT_EQ(r2.out, "0.0000\n");
}

TEST(Cli, UsageErrorsExitOne) {
  const auto r = Cli("kappa --bogus a b");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
  EXPECT_EQ(Cli("").status, 1);
  EXPECT_EQ(Cli("no-such-command").status, 1);
  EXPECT_EQ(Cli("evaluate --config data/exp.cfg --models bogus").status, 1);
  EXPECT_EQ(Cli("--help").status, 0);
}

TEST(Cli, DataErrorsExitTwo) {
  const auto dir = ScratchDir("cli_data");
  const auto r = Cli("clean " + Q(dir / "missing.jsonl"));
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out.rfind("error: ", 0), 0u);
  Write(dir / "bad.jsonl", "{not json\n");
  const auto r2 = Cli("clean " + Q(dir / "bad.jsonl"));
  EXPECT_EQ(r2.status, 2);
  EXPECT_NE(r2.out.find("error: data: "), std::string::npos);
}

TEST(Cli, CleanMatchesLibrary) {
  const auto dir = ScratchDir("cli_clean");
  ASSERT_EQ(Cli("clean data/sample_songs.jsonl -o " + Q(dir / "c.jsonl")).status, 0);
  const Corpus corpus = LoadCorpus(SourceDir() / "data/sample_songs.jsonl");
  EXPECT_EQ(Slurp(dir / "c.jsonl"), SerializeCorpus(corpus, LyricsField::kCleaned));
}

TEST(Cli, TaggingPipelineMatchesLibrary) {
  const auto dir = ScratchDir("cli_tag");
  const auto tt = Cli("tag-train --data data/langid_sample.tsv -o " + Q(dir / "crf.json"));
  ASSERT_EQ(tt.status, 0) << tt.out;
  EXPECT_NE(tt.out.find("held-out token accuracy: "), std::string::npos);

  ASSERT_EQ(Cli("tag --corpus data/sample_songs.jsonl --model " + Q(dir / "crf.json") +
                " -o " + Q(dir / "tagged.txt"))
                .status,
            0);
  const CrfModel crf = LoadCrfModel(dir / "crf.json");
  const LangResources res =
      LoadLangResources(SourceDir() / "resources/english_lexicon.txt",
                        SourceDir() / "resources/telugu_postpositions.txt");
  const Corpus corpus = LoadCorpus(SourceDir() / "data/sample_songs.jsonl");
  std::vector<TaggedSong> tagged;
  for (const Song& s : corpus.songs) tagged.push_back({s.id, TagSong(crf, s, res)});
  EXPECT_EQ(Slurp(dir / "tagged.txt"), SerializeTaggedCorpus(tagged));

  ASSERT_EQ(Cli("cm-features --tagged " + Q(dir / "tagged.txt") + " -o " + Q(dir / "f1.tsv"))
                .status,
            0);
  ASSERT_EQ(Cli("cm-features --corpus data/sample_songs.jsonl --model " + Q(dir / "crf.json") +
                " -o " + Q(dir / "f2.tsv"))
                .status,
            0);
  std::string expected;
  for (const auto& t : tagged)
    expected += FormatFeatureLine(t.id, ExtractCodeMixedFeatures(t.sentences)) + "\n";
  EXPECT_EQ(Slurp(dir / "f1.tsv"), expected);
  EXPECT_EQ(Slurp(dir / "f2.tsv"), expected);
}

TEST(Cli, EvaluateFiltersModelsAndIsReproducible) {
  const auto dir = ScratchDir("cli_eval");
  const std::string cmd = "evaluate --config data/exp.cfg --models nb,svm --format csv -o ";
  ASSERT_EQ(Cli(cmd + Q(dir / "a.csv")).status, 0);
  ASSERT_EQ(Cli(cmd + Q(dir / "b.csv") + " --jobs 2").status, 0);
  const std::string a = Slurp(dir / "a.csv");
  EXPECT_EQ(a, Slurp(dir / "b.csv"));
  const auto rows = ParseReportCsv(a);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].model_id, 1);
  EXPECT_EQ(rows[1].model_id, 3);

  ExperimentConfig cfg;
  ApplyConfigText(Slurp(SourceDir() / "data/exp.cfg"), cfg);
  for (std::string* p : {&cfg.corpus_path, &cfg.langid_train_path})
    *p = (SourceDir() / *p).string();
  cfg.lexicon_path = (SourceDir() / "resources/english_lexicon.txt").string();
  cfg.postpositions_path = (SourceDir() / "resources/telugu_postpositions.txt").string();
  cfg.models = {1, 3};
  const auto lib = RunExperiment(cfg);
  EXPECT_EQ(a, RenderReport(lib, ReportFormat::kCsv));

  const auto table = Cli("report " + Q(dir / "a.csv") + " --format table");
  EXPECT_EQ(table.status, 0);
  EXPECT_EQ(table.out, RenderReport(rows, ReportFormat::kTable));
}

TEST(Cli, SetOverridesConfigAndFlagsOverrideSet) {
  const auto dir = ScratchDir("cli_set");
  ASSERT_EQ(Cli("evaluate --config data/exp.cfg --set models=nb --set k=3 --format csv -o " +
                Q(dir / "a.csv"))
                .status,
            0);
  const auto rows = ParseReportCsv(Slurp(dir / "a.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fold_accuracy.size(), 3u);
  ASSERT_EQ(Cli("evaluate --config data/exp.cfg --set models=nb --set k=3 --k 4 --format csv -o " +
                Q(dir / "b.csv"))
                .status,
            0);
  EXPECT_EQ(ParseReportCsv(Slurp(dir / "b.csv"))[0].fold_accuracy.size(), 4u);
  EXPECT_EQ(Cli("evaluate --config data/exp.cfg --set nope=1").status, 1);
}

TEST(Cli, TrainWritesReproducibleBundle) {
  const auto dir = ScratchDir("cli_train");
  const std::string cmd = "train --config data/exp.cfg --model svm-cm --fold 2 -o ";
  ASSERT_EQ(Cli(cmd + Q(dir / "a.json")).status, 0);
  ASSERT_EQ(Cli(cmd + Q(dir / "b.json")).status, 0);
  const std::string a = Slurp(dir / "a.json");
  EXPECT_EQ(a, Slurp(dir / "b.json"));
  const ModelBundle b = ParseModelBundle(a);
  EXPECT_EQ(b.model_id, 4);
  EXPECT_EQ(b.fold_index, 2);
  EXPECT_EQ(SerializeModelBundle(b), a);
  EXPECT_EQ(Cli(cmd + Q(dir / "c.json") + " --fold 9").status, 1);
}

TEST(Cli, EmbedTrainMatchesLibrary) {
  const auto dir = ScratchDir("cli_embed");
  ASSERT_EQ(Cli("embed-train --corpus data/sample_songs.jsonl --dim 8 --min-count 1 -o " +
                Q(dir / "e.txt"))
                .status,
            0);
  EmbeddingConfig cfg;
  cfg.dim = 8;
  cfg.min_count = 1;
  const Corpus corpus = LoadCorpus(SourceDir() / "data/sample_songs.jsonl");
  EXPECT_EQ(Slurp(dir / "e.txt"), SerializeEmbeddings(TrainEmbeddings(corpus.songs, cfg)));
}

}  // namespace
}  // namespace cmlyrics
