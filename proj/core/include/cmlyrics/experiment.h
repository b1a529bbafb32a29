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

// Cross-validated evaluation of the ten arousal classifiers.
//
// Per fold: vocabulary, embeddings, feature scaler and every model are fitted
// on that fold's training songs only (neural models also use the dev songs to
// pick their epoch); accuracy is measured on the test songs. Songs are tagged
// once by the language identifier before folding.

#ifndef CMLYRICS_EXPERIMENT_H_
#define CMLYRICS_EXPERIMENT_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmlyrics/classic.h"
#include "cmlyrics/cmfeatures.h"
#include "cmlyrics/corpus.h"
#include "cmlyrics/crf.h"
#include "cmlyrics/embeddings.h"
#include "cmlyrics/neural.h"

namespace cmlyrics {

enum class ModelFamily { kNaiveBayes, kSvm, kNeural };

struct ModelSpec {
  int id;               // 1..10, the row order of the results table
  const char* key;      // CLI name, e.g. "svm-cm"
  const char* name;     // display name
  ModelFamily family;
  Arch arch;            // neural models only
  bool use_cm;
};

const std::vector<ModelSpec>& AllModelSpecs();
const ModelSpec& ModelSpecById(int id);
// Accepts a key ("cmnn-cm") or a numeric id ("10"). Throws Error(kUsage).
const ModelSpec& ModelSpecByName(std::string_view name);
// Comma-separated list of keys or ids, returned sorted by id and de-duplicated.
std::vector<int> ParseModelList(std::string_view list);

struct ExperimentConfig {
  std::string corpus_path;
  std::string langid_model_path;  // trained CRF model, or
  std::string langid_train_path;  // tagged data to train one from
  std::string lexicon_path = "resources/english_lexicon.txt";
  std::string postpositions_path = "resources/telugu_postpositions.txt";
  int k = 5;
  uint64_t seed = 42;
  std::vector<int> models = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int jobs = 1;

  int min_count = 2;       // tf-idf vocabulary
  double nb_alpha = 1.0;
  SvmTrainConfig svm;
  EmbeddingConfig embedding;
  ArchConfig arch;         // arch/use_cm fields are set per model
  TrainConfig train;
  size_t max_len = 0;      // 0: longest training song
  CrfTrainConfig crf;
};

// Flat "key = value" text; '#' starts a comment. Recognised keys:
//   corpus langid_model langid_train lexicon postpositions k seed models jobs
//   min_count nb_alpha svm_lambda svm_epochs
//   emb_dim emb_window emb_negatives emb_epochs emb_min_count emb_step
//   nn_filters nn_hidden nn_fusion nn_embed_rms nn_activation nn_epochs nn_batch nn_lr
//   nn_clip nn_max_len crf_epochs crf_l2 crf_lr crf_decay crf_batch
// Throws Error(kUsage) naming the line for unknown keys or bad values.
void ApplyConfigText(std::string_view text, ExperimentConfig& config);
void ApplyConfigValue(std::string_view key, std::string_view value,
                      ExperimentConfig& config);
void ValidateConfig(const ExperimentConfig& config);

// A song after language identification.
struct PreparedSong {
  std::string id;
  Label label = Label::kExciting;
  std::vector<std::string> words;  // lowercased Word tokens
  CodeMixFeatures cm;
};

struct PreparedCorpus {
  std::vector<PreparedSong> songs;
  std::map<std::string, size_t, std::less<>> by_id;

  const PreparedSong& Get(std::string_view id) const;
};

// Tags every song (identical texts are tagged once) and extracts words and
// code-mixed features. Throws Error(kData) for unlabeled songs or songs
// without a single word.
PreparedCorpus PrepareCorpus(const Corpus& corpus, const CrfModel& langid,
                             const LangResources& resources, int jobs = 1);

using TrainedModel = std::variant<NbModel, SvmModel, NeuralModel>;

struct FoldArtifacts {
  int fold_index = 0;
  Vocab vocab;
  FeatureScaler scaler;
  std::optional<EmbeddingTable> embeddings;  // only when a neural model runs
  size_t max_len = 0;
  std::map<int, TrainedModel> models;        // by model id
};

// Fits everything a fold needs for the selected models. Depends only on the
// train (and, for epoch selection, dev) songs of the split.
FoldArtifacts TrainFold(const PreparedCorpus& data, const FoldSplit& split,
                        const ExperimentConfig& config,
                        std::span<const int> model_ids);

// Accuracy of one trained model on a list of songs.
double EvaluateModel(const FoldArtifacts& fold, int model_id,
                     const PreparedCorpus& data, std::span<const std::string> ids);

// One trained model with everything needed to predict: the fold's tf-idf
// vocabulary (classic models), the code-mix scaler, and the parameters.
struct ModelBundle {
  int model_id = 0;
  int fold_index = 0;
  std::optional<Vocab> vocab;
  FeatureScaler scaler;
  TrainedModel model;
};

ModelBundle ExtractBundle(const FoldArtifacts& fold, int model_id);
std::string SerializeModelBundle(const ModelBundle& bundle);
ModelBundle ParseModelBundle(std::string_view content);
Label PredictWithBundle(const ModelBundle& bundle, const PreparedSong& song);

struct ResultRow {
  int model_id = 0;
  std::string model_name;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;

  bool operator==(const ResultRow&) const = default;
};

// Fraction of equal entries. Throws Error(kData) on mismatched or empty lists.
double Accuracy(std::span<const Label> predicted, std::span<const Label> gold);

// Full protocol over in-memory inputs; rows sorted by model id. Folds run on
// up to config.jobs threads; results do not depend on scheduling.
std::vector<ResultRow> RunExperiment(const Corpus& corpus, const CrfModel& langid,
                                     const LangResources& resources,
                                     const ExperimentConfig& config);

struct ExperimentInputs {
  Corpus corpus;
  LangResources resources;
  CrfModel langid;
};

// Loads the corpus, resources and language identifier named in the config,
// training the CRF from langid_train (with config.crf and config.seed) when no
// model path is given.
ExperimentInputs LoadExperimentInputs(const ExperimentConfig& config);

std::vector<ResultRow> RunExperiment(const ExperimentConfig& config);

// Trains one model on the train/dev part of one fold.
ModelBundle TrainSingleModel(const ExperimentConfig& config, int model_id,
                             int fold_index);

enum class ReportFormat { kCsv, kTable };

// csv: "id,model,fold_0,...,fold_{k-1},mean" with 4 decimals; table: ID,
// Model and mean Accuracy in percent, column-aligned.
std::string RenderReport(std::span<const ResultRow> rows, ReportFormat format);
std::vector<ResultRow> ParseReportCsv(std::string_view csv);

}  // namespace cmlyrics

#endif  // CMLYRICS_EXPERIMENT_H_
