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

#include "cmlyrics/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"
#include "cmlyrics/textproc.h"
#include "json.hpp"

namespace cmlyrics {
namespace {

using json = nlohmann::json;

std::string_view Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc() || r.ptr != value.data() + value.size())
    ThrowUsage("bad value \"" + std::string(value) + "\" for " + std::string(key));
  return out;
}

// Runs fn(i) for i in [0, n) on up to jobs threads; rethrows the first error.
template <typename Fn>
void ParallelFor(size_t n, int jobs, Fn fn) {
  const size_t workers = std::min(n, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

uint64_t ModelSeed(uint64_t fold_seed, int model_id) {
  return fold_seed * 1000003ULL + static_cast<uint64_t>(model_id);
}

struct FoldData {
  std::vector<const PreparedSong*> songs;

  std::vector<CodeMixFeatures> Cm() const {
    std::vector<CodeMixFeatures> out;
    for (auto* s : songs) out.push_back(s->cm);
    return out;
  }
  std::vector<Label> Labels() const {
    std::vector<Label> out;
    for (auto* s : songs) out.push_back(s->label);
    return out;
  }
};

FoldData Select(const PreparedCorpus& data, std::span<const std::string> ids) {
  FoldData fd;
  for (const auto& id : ids) fd.songs.push_back(&data.Get(id));
  return fd;
}

std::vector<NeuralExample> NeuralExamples(const FoldData& fd,
                                          const EmbeddingTable& table,
                                          size_t max_len, bool use_cm,
                                          const FeatureScaler& scaler) {
  std::vector<NeuralExample> out;
  out.reserve(fd.songs.size());
  for (auto* s : fd.songs) {
    NeuralExample ex;
    ex.seq = PadSequence(s->words, max_len, table);
    if (use_cm) ex.cm = scaler.Scale(s->cm);
    ex.label = s->label;
    out.push_back(std::move(ex));
  }
  return out;
}

std::string Fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

const std::vector<ModelSpec>& AllModelSpecs() {
  static const std::vector<ModelSpec> kSpecs = {
      {1, "nb", "Naive Bayes", ModelFamily::kNaiveBayes, Arch::kCnn, false},
      {2, "nb-cm", "Naive Bayes with code-mixed features", ModelFamily::kNaiveBayes,
       Arch::kCnn, true},
      {3, "svm", "SVM", ModelFamily::kSvm, Arch::kCnn, false},
      {4, "svm-cm", "SVM with code-mixed features", ModelFamily::kSvm, Arch::kCnn, true},
      {5, "cnn", "CNN", ModelFamily::kNeural, Arch::kCnn, false},
      {6, "cnn-cm", "CNN with code-mixed features", ModelFamily::kNeural, Arch::kCnn, true},
      {7, "lstm", "LSTM", ModelFamily::kNeural, Arch::kLstm, false},
      {8, "lstm-cm", "LSTM with code-mixed features", ModelFamily::kNeural, Arch::kLstm,
       true},
      {9, "cmnn", "CMNN model without code-mixed features", ModelFamily::kNeural,
       Arch::kCmnn, false},
      {10, "cmnn-cm", "CMNN model with code-mixed features", ModelFamily::kNeural,
       Arch::kCmnn, true},
  };
  return kSpecs;
}

const ModelSpec& ModelSpecById(int id) {
  for (const auto& s : AllModelSpecs()) {
    if (s.id == id) return s;
  }
  ThrowUsage("unknown model id " + std::to_string(id));
}

const ModelSpec& ModelSpecByName(std::string_view name) {
  for (const auto& s : AllModelSpecs()) {
    if (name == s.key || name == std::to_string(s.id)) return s;
  }
  ThrowUsage("unknown model \"" + std::string(name) +
             "\" (expected nb, nb-cm, svm, svm-cm, cnn, cnn-cm, lstm, lstm-cm, "
             "cmnn, cmnn-cm or 1-10)");
}

std::vector<int> ParseModelList(std::string_view list) {
  std::vector<int> ids;
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view item = Trim(list.substr(pos, comma - pos));
    if (!item.empty()) ids.push_back(ModelSpecByName(item).id);
    pos = comma + 1;
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) ThrowUsage("model list is empty");
  return ids;
}

void ApplyConfigValue(std::string_view key, std::string_view value,
                      ExperimentConfig& c) {
  auto i = [&] { return ParseNumber<int>(key, value); };
  auto u = [&] { return ParseNumber<uint64_t>(key, value); };
  auto z = [&] { return ParseNumber<size_t>(key, value); };
  auto d = [&] { return ParseNumber<double>(key, value); };
  const std::string v(value);
  if (key == "corpus") c.corpus_path = v;
  else if (key == "langid_model") c.langid_model_path = v;
  else if (key == "langid_train") c.langid_train_path = v;
  else if (key == "lexicon") c.lexicon_path = v;
  else if (key == "postpositions") c.postpositions_path = v;
  else if (key == "k") c.k = i();
  else if (key == "seed") c.seed = u();
  else if (key == "models") c.models = ParseModelList(value);
  else if (key == "jobs") c.jobs = i();
  else if (key == "min_count") c.min_count = i();
  else if (key == "nb_alpha") c.nb_alpha = d();
  else if (key == "svm_lambda") c.svm.lambda = d();
  else if (key == "svm_epochs") c.svm.epochs = i();
  else if (key == "emb_dim") c.embedding.dim = z();
  else if (key == "emb_window") c.embedding.window = i();
  else if (key == "emb_negatives") c.embedding.negatives = i();
  else if (key == "emb_epochs") c.embedding.epochs = i();
  else if (key == "emb_min_count") c.embedding.min_count = i();
  else if (key == "emb_step") c.embedding.step = d();
  else if (key == "nn_filters") c.arch.n_filters = z();
  else if (key == "nn_hidden") c.arch.lstm_hidden = z();
  else if (key == "nn_fusion") c.arch.fusion_hidden = z();
  else if (key == "nn_embed_rms") c.arch.embed_rms = d();
  else if (key == "nn_activation") {
    auto a = ParseActivation(value);
    if (!a) ThrowUsage("nn_activation must be relu or tanh");
    c.arch.activation = *a;
  } else if (key == "nn_epochs") c.train.epochs = i();
  else if (key == "nn_batch") c.train.batch_size = z();
  else if (key == "nn_lr") c.train.learning_rate = d();
  else if (key == "nn_clip") c.train.clip_norm = d();
  else if (key == "nn_max_len") c.max_len = z();
  else if (key == "crf_epochs") c.crf.epochs = i();
  else if (key == "crf_l2") c.crf.l2 = d();
  else if (key == "crf_lr") c.crf.learning_rate = d();
  else if (key == "crf_decay") c.crf.decay = d();
  else if (key == "crf_batch") c.crf.batch_size = z();
  else ThrowUsage("unknown config key \"" + std::string(key) + "\"");
}

void ApplyConfigText(std::string_view text, ExperimentConfig& config) {
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      ThrowUsage("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      ApplyConfigValue(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), config);
    } catch (const Error& e) {
      ThrowUsage("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ValidateConfig(const ExperimentConfig& c) {
  if (c.k < 2) ThrowUsage("k must be >= 2");
  if (c.models.empty()) ThrowUsage("no models selected");
  if (c.jobs < 1) ThrowUsage("jobs must be >= 1");
  if (c.min_count < 1) ThrowUsage("min_count must be >= 1");
}

const PreparedSong& PreparedCorpus::Get(std::string_view id) const {
  auto it = by_id.find(id);
  if (it == by_id.end()) ThrowData("unknown song id \"" + std::string(id) + "\"");
  return songs[it->second];
}

PreparedCorpus PrepareCorpus(const Corpus& corpus, const CrfModel& langid,
                             const LangResources& resources, int jobs) {
  for (const auto& s : corpus.songs) {
    if (!s.label) ThrowData("song \"" + s.id + "\" has no label");
  }
  // Identical lyrics share one tagging pass.
  std::unordered_map<uint64_t, size_t> first_with_hash;
  std::vector<size_t> source(corpus.size());
  std::vector<size_t> unique;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const uint64_t h = Fnv1a64(corpus.songs[i].text);
    auto [it, inserted] = first_with_hash.emplace(h, i);
    if (!inserted && corpus.songs[it->second].text != corpus.songs[i].text) {
      source[i] = i;
      unique.push_back(i);
      continue;
    }
    source[i] = it->second;
    if (inserted) unique.push_back(i);
  }
  std::vector<std::pair<std::vector<std::string>, CodeMixFeatures>> tagged(corpus.size());
  ParallelFor(unique.size(), jobs, [&](size_t u) {
    const size_t i = unique[u];
    const auto sentences = TagSong(langid, corpus.songs[i], resources);
    std::vector<std::string> words;
    for (const auto& ts : sentences) {
      for (const auto& tok : ts.tokens) {
        if (tok.kind == TokenKind::kWord) words.push_back(AsciiLower(tok.surface));
      }
    }
    tagged[i] = {std::move(words), ExtractCodeMixedFeatures(sentences)};
  });

  PreparedCorpus out;
  out.songs.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.songs[i];
    const auto& [words, cm] = tagged[source[i]];
    if (words.empty()) ThrowData("song \"" + s.id + "\" contains no words");
    out.by_id.emplace(s.id, out.songs.size());
    out.songs.push_back({s.id, *s.label, words, cm});
  }
  return out;
}

FoldArtifacts TrainFold(const PreparedCorpus& data, const FoldSplit& split,
                        const ExperimentConfig& config,
                        std::span<const int> model_ids) {
  const uint64_t fold_seed = config.seed + static_cast<uint64_t>(split.fold_index);
  const FoldData train = Select(data, split.train);
  const FoldData dev = Select(data, split.dev);
  if (train.songs.empty()) ThrowData("fold has no training songs");

  FoldArtifacts art;
  art.fold_index = split.fold_index;
  std::vector<std::vector<std::string>> docs;
  for (auto* s : train.songs) docs.push_back(s->words);
  art.vocab = BuildVocab(docs, config.min_count);
  const std::vector<CodeMixFeatures> train_cm = train.Cm();
  art.scaler = FitScaler(train_cm);
  const std::vector<Label> train_labels = train.Labels();

  bool needs_neural = false;
  bool needs_classic = false;
  for (int id : model_ids) {
    (ModelSpecById(id).family == ModelFamily::kNeural ? needs_neural : needs_classic) = true;
  }

  std::vector<SparseVec> vectors;
  std::vector<CmVector> scaled;
  if (needs_classic) {
    for (auto* s : train.songs) {
      vectors.push_back(Tfidf(art.vocab, s->words));
      scaled.push_back(art.scaler.Scale(s->cm));
    }
  }
  if (needs_neural) {
    EmbeddingConfig ec = config.embedding;
    ec.seed = ModelSeed(fold_seed, 0);
    art.embeddings = TrainEmbeddings(docs, ec);
    size_t longest = 0;
    for (const auto& d : docs) longest = std::max(longest, d.size());
    art.max_len = config.max_len > 0 ? std::min(config.max_len, longest) : longest;
    if (dev.songs.empty()) ThrowData("fold has no dev songs for neural epoch selection");
  }

  for (int id : model_ids) {
    const ModelSpec& spec = ModelSpecById(id);
    switch (spec.family) {
      case ModelFamily::kNaiveBayes:
        art.models.emplace(id, TrainNb(vectors, train_labels, art.vocab.size(),
                                       config.nb_alpha,
                                       spec.use_cm ? std::span<const CodeMixFeatures>(train_cm)
                                                   : std::span<const CodeMixFeatures>()));
        break;
      case ModelFamily::kSvm: {
        SvmTrainConfig sc = config.svm;
        sc.seed = ModelSeed(fold_seed, id);
        art.models.emplace(id, TrainSvm(vectors, train_labels, art.vocab.size(), sc,
                                        spec.use_cm ? std::span<const CmVector>(scaled)
                                                    : std::span<const CmVector>()));
        break;
      }
      case ModelFamily::kNeural: {
        ArchConfig ac = config.arch;
        ac.arch = spec.arch;
        ac.use_cm = spec.use_cm;
        TrainConfig tc = config.train;
        tc.seed = ModelSeed(fold_seed, id);
        const auto train_ex =
            NeuralExamples(train, *art.embeddings, art.max_len, spec.use_cm, art.scaler);
        const auto dev_ex =
            NeuralExamples(dev, *art.embeddings, art.max_len, spec.use_cm, art.scaler);
        art.models.emplace(id, TrainNeural(ac, train_ex, dev_ex, *art.embeddings,
                                           art.max_len, tc));
        break;
      }
    }
  }
  return art;
}

double EvaluateModel(const FoldArtifacts& fold, int model_id,
                     const PreparedCorpus& data, std::span<const std::string> ids) {
  auto it = fold.models.find(model_id);
  if (it == fold.models.end())
    ThrowModel("model " + std::to_string(model_id) + " was not trained in this fold");
  const ModelSpec& spec = ModelSpecById(model_id);
  std::vector<Label> pred;
  std::vector<Label> gold;
  for (const auto& id : ids) {
    const PreparedSong& s = data.Get(id);
    gold.push_back(s.label);
    Label p;
    if (const auto* nb = std::get_if<NbModel>(&it->second)) {
      std::optional<CodeMixFeatures> cm;
      if (spec.use_cm) cm = s.cm;
      p = PredictNb(*nb, Tfidf(fold.vocab, s.words), cm).label;
    } else if (const auto* svm = std::get_if<SvmModel>(&it->second)) {
      std::optional<CmVector> cm;
      if (spec.use_cm) cm = fold.scaler.Scale(s.cm);
      p = PredictSvm(*svm, Tfidf(fold.vocab, s.words), cm);
    } else {
      const auto& nn = std::get<NeuralModel>(it->second);
      std::optional<CmVector> cm;
      if (spec.use_cm) cm = fold.scaler.Scale(s.cm);
      p = NeuralPredict(nn, PadSequence(s.words, fold.max_len, *fold.embeddings), cm);
    }
    pred.push_back(p);
  }
  return Accuracy(pred, gold);
}

ModelBundle ExtractBundle(const FoldArtifacts& fold, int model_id) {
  auto it = fold.models.find(model_id);
  if (it == fold.models.end())
    ThrowModel("model " + std::to_string(model_id) + " was not trained in this fold");
  ModelBundle b;
  b.model_id = model_id;
  b.fold_index = fold.fold_index;
  if (ModelSpecById(model_id).family != ModelFamily::kNeural) b.vocab = fold.vocab;
  b.scaler = fold.scaler;
  b.model = it->second;
  return b;
}

std::string SerializeModelBundle(const ModelBundle& bundle) {
  json doc;
  doc["format"] = "cmlyrics-bundle";
  doc["version"] = 1;
  doc["model_id"] = bundle.model_id;
  doc["model"] = ModelSpecById(bundle.model_id).key;
  doc["fold_index"] = bundle.fold_index;
  doc["scaler"] = {{"mean", bundle.scaler.mean}, {"stdev", bundle.scaler.stdev}};
  doc["vocab"] = bundle.vocab ? json::parse(SerializeVocab(*bundle.vocab)) : json(nullptr);
  std::string params;
  if (const auto* nb = std::get_if<NbModel>(&bundle.model)) {
    params = SerializeNbModel(*nb);
  } else if (const auto* svm = std::get_if<SvmModel>(&bundle.model)) {
    params = SerializeSvmModel(*svm);
  } else {
    params = SerializeNeuralModel(std::get<NeuralModel>(bundle.model));
  }
  doc["params"] = json::parse(params);
  return doc.dump() + "\n";
}

ModelBundle ParseModelBundle(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed model bundle: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "cmlyrics-bundle")
    ThrowModel("not a model bundle document");
  if (doc.value("version", 0) != 1) ThrowModel("unsupported model bundle version");
  ModelBundle b;
  try {
    b.model_id = doc.at("model_id").get<int>();
    b.fold_index = doc.at("fold_index").get<int>();
    b.scaler.mean = doc.at("scaler").at("mean").get<std::array<double, 4>>();
    b.scaler.stdev = doc.at("scaler").at("stdev").get<std::array<double, 4>>();
    if (!doc.at("vocab").is_null()) b.vocab = ParseVocab(doc.at("vocab").dump());
    const std::string params = doc.at("params").dump();
    switch (ModelSpecById(b.model_id).family) {
      case ModelFamily::kNaiveBayes: b.model = ParseNbModel(params); break;
      case ModelFamily::kSvm: b.model = ParseSvmModel(params); break;
      case ModelFamily::kNeural: b.model = ParseNeuralModel(params); break;
    }
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed model bundle: ") + e.what());
  }
  if (ModelSpecById(b.model_id).family != ModelFamily::kNeural && !b.vocab)
    ThrowModel("model bundle lacks a vocabulary");
  return b;
}

Label PredictWithBundle(const ModelBundle& bundle, const PreparedSong& song) {
  const bool use_cm = ModelSpecById(bundle.model_id).use_cm;
  if (const auto* nb = std::get_if<NbModel>(&bundle.model)) {
    std::optional<CodeMixFeatures> cm;
    if (use_cm) cm = song.cm;
    return PredictNb(*nb, Tfidf(*bundle.vocab, song.words), cm).label;
  }
  std::optional<CmVector> cm;
  if (use_cm) cm = bundle.scaler.Scale(song.cm);
  if (const auto* svm = std::get_if<SvmModel>(&bundle.model))
    return PredictSvm(*svm, Tfidf(*bundle.vocab, song.words), cm);
  const auto& nn = std::get<NeuralModel>(bundle.model);
  return NeuralPredict(nn, PadSequence(song.words, nn.max_len, nn.Embeddings()), cm);
}

double Accuracy(std::span<const Label> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size())
    ThrowData("accuracy: " + std::to_string(predicted.size()) + " predictions for " +
              std::to_string(gold.size()) + " gold labels");
  if (gold.empty()) ThrowData("accuracy over no examples");
  size_t ok = 0;
  for (size_t i = 0; i < gold.size(); ++i) ok += predicted[i] == gold[i];
  return static_cast<double>(ok) / static_cast<double>(gold.size());
}

std::vector<ResultRow> RunExperiment(const Corpus& corpus, const CrfModel& langid,
                                     const LangResources& resources,
                                     const ExperimentConfig& config) {
  ValidateConfig(config);
  const PreparedCorpus data = PrepareCorpus(corpus, langid, resources, config.jobs);
  const std::vector<FoldSplit> folds = MakeFolds(corpus, config.k, config.seed);

  std::vector<std::map<int, double>> fold_acc(folds.size());
  ParallelFor(folds.size(), config.jobs, [&](size_t f) {
    const FoldArtifacts art = TrainFold(data, folds[f], config, config.models);
    for (int id : config.models)
      fold_acc[f][id] = EvaluateModel(art, id, data, folds[f].test);
  });

  std::vector<ResultRow> rows;
  std::vector<int> ids = config.models;
  std::sort(ids.begin(), ids.end());
  for (int id : ids) {
    ResultRow row;
    row.model_id = id;
    row.model_name = ModelSpecById(id).name;
    double sum = 0.0;
    for (const auto& acc : fold_acc) {
      row.fold_accuracy.push_back(acc.at(id));
      sum += acc.at(id);
    }
    row.mean_accuracy = sum / static_cast<double>(fold_acc.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentInputs LoadExperimentInputs(const ExperimentConfig& config) {
  if (config.corpus_path.empty()) ThrowUsage("no corpus given");
  ExperimentInputs in;
  in.corpus = LoadCorpus(config.corpus_path);
  in.resources = LoadLangResources(config.lexicon_path, config.postpositions_path);
  if (!config.langid_model_path.empty()) {
    in.langid = LoadCrfModel(config.langid_model_path);
  } else if (!config.langid_train_path.empty()) {
    CrfTrainConfig cc = config.crf;
    cc.seed = config.seed;
    in.langid = TrainCrf(LoadTaggedData(config.langid_train_path), in.resources, cc);
  } else {
    ThrowUsage("either langid_model or langid_train must be set");
  }
  return in;
}

std::vector<ResultRow> RunExperiment(const ExperimentConfig& config) {
  ValidateConfig(config);
  const ExperimentInputs in = LoadExperimentInputs(config);
  return RunExperiment(in.corpus, in.langid, in.resources, config);
}

ModelBundle TrainSingleModel(const ExperimentConfig& config, int model_id,
                             int fold_index) {
  ValidateConfig(config);
  ModelSpecById(model_id);
  if (fold_index < 0 || fold_index >= config.k)
    ThrowUsage("fold must be in [0, " + std::to_string(config.k) + ")");
  const ExperimentInputs in = LoadExperimentInputs(config);
  const PreparedCorpus data = PrepareCorpus(in.corpus, in.langid, in.resources, config.jobs);
  const auto folds = MakeFolds(in.corpus, config.k, config.seed);
  const int ids[] = {model_id};
  return ExtractBundle(TrainFold(data, folds[fold_index], config, ids), model_id);
}

std::string RenderReport(std::span<const ResultRow> rows, ReportFormat format) {
  if (rows.empty()) ThrowData("nothing to report");
  std::string out;
  if (format == ReportFormat::kCsv) {
    out = "id,model";
    for (size_t f = 0; f < rows.front().fold_accuracy.size(); ++f)
      out += ",fold_" + std::to_string(f);
    out += ",mean\n";
    for (const auto& r : rows) {
      out += std::to_string(r.model_id) + "," + r.model_name;
      for (double a : r.fold_accuracy) out += "," + Fixed4(a);
      out += "," + Fixed4(r.mean_accuracy) + "\n";
    }
    return out;
  }
  size_t name_w = 5;
  for (const auto& r : rows) name_w = std::max(name_w, r.model_name.size());
  char buf[256];
  auto line = [&](const char* id, const std::string& name, const std::string& acc) {
    std::snprintf(buf, sizeof(buf), "%-4s %-*s %9s\n", id, static_cast<int>(name_w),
                  name.c_str(), acc.c_str());
    out += buf;
  };
  line("ID", "Model", "Accuracy");
  out += std::string(4 + 1 + name_w + 1 + 9, '-') + "\n";
  for (const auto& r : rows) {
    char acc[32];
    std::snprintf(acc, sizeof(acc), "%.2f%%", 100.0 * r.mean_accuracy);
    line(std::to_string(r.model_id).c_str(), r.model_name, acc);
  }
  return out;
}

std::vector<ResultRow> ParseReportCsv(std::string_view csv) {
  std::vector<ResultRow> rows;
  size_t pos = 0;
  size_t line_no = 0;
  size_t folds = 0;
  while (pos < csv.size()) {
    size_t nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = Trim(csv.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    size_t c = 0;
    while (c <= line.size()) {
      size_t comma = line.find(',', c);
      if (comma == std::string_view::npos) comma = line.size();
      cells.push_back(line.substr(c, comma - c));
      c = comma + 1;
    }
    if (line_no == 1) {
      if (cells.size() < 4 || cells[0] != "id" || cells[1] != "model" ||
          cells.back() != "mean")
        ThrowData("report header must be id,model,fold_0..,mean");
      folds = cells.size() - 3;
      continue;
    }
    if (cells.size() != folds + 3)
      ThrowData("report line " + std::to_string(line_no) + " has the wrong column count");
    ResultRow r;
    r.model_id = ParseNumber<int>("id", cells[0]);
    r.model_name = std::string(cells[1]);
    for (size_t f = 0; f < folds; ++f)
      r.fold_accuracy.push_back(ParseNumber<double>("fold accuracy", cells[2 + f]));
    r.mean_accuracy = ParseNumber<double>("mean", cells.back());
    rows.push_back(std::move(r));
  }
  if (folds == 0) ThrowData("empty report");
  return rows;
}

}  // namespace cmlyrics
