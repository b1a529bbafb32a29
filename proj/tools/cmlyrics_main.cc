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

// cmlyrics: command-line entry point for the lyric arousal pipeline.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmlyrics/classic.h"
#include "cmlyrics/cmfeatures.h"
#include "cmlyrics/corpus.h"
#include "cmlyrics/crf.h"
#include "cmlyrics/embeddings.h"
#include "cmlyrics/error.h"
#include "cmlyrics/experiment.h"
#include "cmlyrics/io.h"
#include "cmlyrics/langid.h"

namespace fs = std::filesystem;
using namespace cmlyrics;

namespace {

#ifndef CMLYRICS_RESOURCE_DIR
#define CMLYRICS_RESOURCE_DIR "resources"
#endif

// The source tree's resources/, or share/cmlyrics next to an installed binary.
std::string DefaultResource(const char* name) {
  const fs::path built = fs::path(CMLYRICS_RESOURCE_DIR) / name;
  if (fs::exists(built)) return built.string();
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const fs::path installed = exe.parent_path().parent_path() / "share/cmlyrics" / name;
    if (fs::exists(installed)) return installed.string();
  }
  return built.string();
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  } else {
    WriteFile(out_path, content);
  }
}

struct ResourceFlags {
  std::string lexicon = DefaultResource("english_lexicon.txt");
  std::string postpositions = DefaultResource("telugu_postpositions.txt");

  void Add(CLI::App* cmd) {
    cmd->add_option("--lexicon", lexicon, "English lexicon, one word per line")
        ->capture_default_str();
    cmd->add_option("--postpositions", postpositions,
                    "Telugu postposition list, one per line")
        ->capture_default_str();
  }
  LangResources Load() const { return LoadLangResources(lexicon, postpositions); }
};

// Flags shared by train and evaluate; applied over the config file.
struct ExperimentFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> corpus, langid_model, langid_train, lexicon, postpositions;
  std::optional<uint64_t> seed;
  std::optional<int> jobs, k;

  void Add(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value experiment config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", sets, "Override one config key (KEY=VALUE), repeatable");
    cmd->add_option("--corpus", corpus, "Labeled song-record file");
    cmd->add_option("--langid-model", langid_model, "Trained CRF model file");
    cmd->add_option("--langid-train", langid_train, "Tagged data to train the CRF on");
    cmd->add_option("--lexicon", lexicon, "English lexicon file");
    cmd->add_option("--postpositions", postpositions, "Telugu postposition file");
    cmd->add_option("--seed", seed, "Seed for folds and all model training");
    cmd->add_option("--jobs", jobs, "Worker threads (default 1)");
    cmd->add_option("--k", k, "Number of folds (default 5)");
  }

  ExperimentConfig Build() const {
    ExperimentConfig cfg;
    cfg.lexicon_path = DefaultResource("english_lexicon.txt");
    cfg.postpositions_path = DefaultResource("telugu_postpositions.txt");
    if (!config_path.empty()) ApplyConfigText(ReadFile(config_path), cfg);
    for (const auto& kv : sets) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) ThrowUsage("--set expects KEY=VALUE, got \"" + kv + "\"");
      ApplyConfigValue(kv.substr(0, eq), kv.substr(eq + 1), cfg);
    }
    if (corpus) cfg.corpus_path = *corpus;
    if (langid_model) cfg.langid_model_path = *langid_model;
    if (langid_train) cfg.langid_train_path = *langid_train;
    if (lexicon) cfg.lexicon_path = *lexicon;
    if (postpositions) cfg.postpositions_path = *postpositions;
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    if (k) cfg.k = *k;
    return cfg;
  }
};

ReportFormat ParseFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "table") return ReportFormat::kTable;
  ThrowUsage("format must be csv or table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-mixed Telugu-English lyric arousal classification toolkit", "cmlyrics"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::function<void()> run;

  // clean
  std::string clean_in, clean_out;
  auto* clean = app.add_subcommand(
      "clean", "Clean a song-record file or a directory of raw lyric files");
  clean->add_option("input", clean_in, "Song-record file or directory")->required();
  clean->add_option("-o,--out", clean_out, "Output song-record file (default stdout)");
  clean->callback([&] {
    run = [&] {
      const Corpus corpus =
          fs::is_directory(clean_in) ? LoadRawDirectory(clean_in) : LoadCorpus(clean_in);
      Emit(clean_out, SerializeCorpus(corpus, LyricsField::kCleaned));
    };
  });

  // tag-train
  std::string tt_data, tt_out;
  double tt_holdout = 0.2;
  CrfTrainConfig tt_cfg;
  ResourceFlags tt_res;
  auto* tag_train = app.add_subcommand(
      "tag-train", "Train the language-identification CRF and report held-out accuracy");
  tag_train->add_option("--data", tt_data, "Tagged data (surface<TAB>tag lines)")
      ->required();
  tag_train->add_option("-o,--out", tt_out, "Model output file")->required();
  tag_train->add_option("--holdout", tt_holdout, "Held-out sentence fraction")
      ->capture_default_str();
  tag_train->add_option("--epochs", tt_cfg.epochs, "Training epochs")->capture_default_str();
  tag_train->add_option("--l2", tt_cfg.l2, "L2 penalty")->capture_default_str();
  tag_train->add_option("--lr", tt_cfg.learning_rate, "Initial step size")
      ->capture_default_str();
  tag_train->add_option("--decay", tt_cfg.decay, "Step decay")->capture_default_str();
  tag_train->add_option("--batch", tt_cfg.batch_size, "Minibatch size")->capture_default_str();
  tag_train->add_option("--seed", tt_cfg.seed, "Seed for split and shuffling")
      ->capture_default_str();
  tt_res.Add(tag_train);
  tag_train->callback([&] {
    run = [&] {
      const LangResources res = tt_res.Load();
      auto [train, held] = SplitTaggedData(LoadTaggedData(tt_data), tt_holdout, tt_cfg.seed);
      const CrfModel model = TrainCrf(train, res, tt_cfg);
      SaveCrfModel(model, tt_out);
      const bool has_holdout = !held.empty();
      std::printf("%s token accuracy: %.4f\n", has_holdout ? "held-out" : "training",
                  TagAccuracy(model, has_holdout ? held : train, res));
    };
  });

  // tag
  std::string tag_corpus, tag_model, tag_out;
  ResourceFlags tag_res;
  auto* tag = app.add_subcommand("tag", "Tag every token of a corpus (CoNLL-style output)");
  tag->add_option("--corpus", tag_corpus, "Song-record file")->required();
  tag->add_option("--model", tag_model, "CRF model file")->required();
  tag->add_option("-o,--out", tag_out, "Output file (default stdout)");
  tag_res.Add(tag);
  tag->callback([&] {
    run = [&] {
      const LangResources res = tag_res.Load();
      const CrfModel model = LoadCrfModel(tag_model);
      std::vector<TaggedSong> out;
      for (const Song& s : LoadCorpus(tag_corpus).songs)
        out.push_back({s.id, TagSong(model, s, res)});
      Emit(tag_out, SerializeTaggedCorpus(out));
    };
  });

  // cm-features
  std::string cm_tagged, cm_corpus, cm_model, cm_out;
  ResourceFlags cm_res;
  auto* cm = app.add_subcommand(
      "cm-features", "Dump the four code-mixed features per song (id s1 s2 s3 s4)");
  auto* cm_tagged_opt = cm->add_option("--tagged", cm_tagged, "Tagged corpus from `tag`");
  auto* cm_corpus_opt = cm->add_option("--corpus", cm_corpus, "Song-record file to tag");
  auto* cm_model_opt = cm->add_option("--model", cm_model, "CRF model for --corpus");
  cm->add_option("-o,--out", cm_out, "Output file (default stdout)");
  cm_tagged_opt->excludes(cm_corpus_opt)->excludes(cm_model_opt);
  cm_corpus_opt->needs(cm_model_opt);
  cm_model_opt->needs(cm_corpus_opt);
  cm_res.Add(cm);
  cm->callback([&] {
    run = [&] {
      std::vector<TaggedSong> songs;
      if (!cm_tagged.empty()) {
        songs = ParseTaggedCorpus(ReadFile(cm_tagged));
      } else if (!cm_corpus.empty()) {
        const LangResources res = cm_res.Load();
        const CrfModel model = LoadCrfModel(cm_model);
        for (const Song& s : LoadCorpus(cm_corpus).songs)
          songs.push_back({s.id, TagSong(model, s, res)});
      } else {
        ThrowUsage("cm-features needs --tagged or --corpus with --model");
      }
      std::string out;
      for (const auto& s : songs)
        out += FormatFeatureLine(s.id, ExtractCodeMixedFeatures(s.sentences)) + "\n";
      Emit(cm_out, out);
    };
  });

  // embed-train
  std::string emb_corpus, emb_out;
  EmbeddingConfig emb_cfg;
  auto* embed = app.add_subcommand("embed-train", "Train skip-gram embeddings on a corpus");
  embed->add_option("--corpus", emb_corpus, "Song-record file")->required();
  embed->add_option("-o,--out", emb_out, "Embedding output file")->required();
  embed->add_option("--dim", emb_cfg.dim, "Vector size")->capture_default_str();
  embed->add_option("--window", emb_cfg.window, "Context window")->capture_default_str();
  embed->add_option("--negatives", emb_cfg.negatives, "Negatives per pair")
      ->capture_default_str();
  embed->add_option("--epochs", emb_cfg.epochs, "Passes over the corpus")
      ->capture_default_str();
  embed->add_option("--min-count", emb_cfg.min_count, "Minimum word count")
      ->capture_default_str();
  embed->add_option("--step", emb_cfg.step, "Initial step size")->capture_default_str();
  embed->add_option("--seed", emb_cfg.seed, "Seed")->capture_default_str();
  embed->callback([&] {
    run = [&] {
      const Corpus corpus = LoadCorpus(emb_corpus);
      SaveEmbeddings(TrainEmbeddings(corpus.songs, emb_cfg), emb_out);
    };
  });

  // train
  ExperimentFlags train_flags;
  std::string train_model, train_out;
  int train_fold = 0;
  auto* train = app.add_subcommand(
      "train", "Train one model on the train/dev part of one fold and save it");
  train_flags.Add(train);
  train->add_option("--model", train_model,
                    "nb, nb-cm, svm, svm-cm, cnn, cnn-cm, lstm, lstm-cm, cmnn, cmnn-cm")
      ->required();
  train->add_option("--fold", train_fold, "Fold index")->capture_default_str();
  train->add_option("-o,--out", train_out, "Model bundle output file")->required();
  train->callback([&] {
    run = [&] {
      const ExperimentConfig cfg = train_flags.Build();
      const int id = ModelSpecByName(train_model).id;
      WriteFile(train_out, SerializeModelBundle(TrainSingleModel(cfg, id, train_fold)));
    };
  });

  // evaluate
  ExperimentFlags eval_flags;
  std::string eval_models, eval_format = "table", eval_out;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Run the cross-validated experiment and print the results table");
  eval_flags.Add(evaluate);
  evaluate->add_option("--models", eval_models, "Comma-separated model names or ids");
  evaluate->add_option("--format", eval_format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  evaluate->add_option("-o,--out", eval_out, "Report output file (default stdout)");
  evaluate->callback([&] {
    run = [&] {
      ExperimentConfig cfg = eval_flags.Build();
      if (!eval_models.empty()) cfg.models = ParseModelList(eval_models);
      const auto rows = RunExperiment(cfg);
      Emit(eval_out, RenderReport(rows, ParseFormat(eval_format)));
    };
  });

  // report
  std::string report_in, report_format = "table", report_out;
  auto* report = app.add_subcommand("report", "Render a CSV report from `evaluate`");
  report->add_option("input", report_in, "CSV report")->required();
  report->add_option("--format", report_format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  report->add_option("-o,--out", report_out, "Output file (default stdout)");
  report->callback([&] {
    run = [&] {
      const auto rows = ParseReportCsv(ReadFile(report_in));
      Emit(report_out, RenderReport(rows, ParseFormat(report_format)));
    };
  });

  // kappa
  std::string kappa_a, kappa_b;
  auto* kappa = app.add_subcommand(
      "kappa", "Cohen's kappa between two annotation files (one label per line)");
  kappa->add_option("a", kappa_a, "First annotator")->required();
  kappa->add_option("b", kappa_b, "Second annotator")->required();
  kappa->callback([&] {
    run = [&] {
      const auto a = LoadAnnotations(kappa_a);
      const auto b = LoadAnnotations(kappa_b);
      std::printf("%.4f\n", CohenKappa(a, b));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    run();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", ErrorCategoryName(e.category()), e.what());
    return e.category() == ErrorCategory::kUsage ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 2;
  }
  return 0;
}
