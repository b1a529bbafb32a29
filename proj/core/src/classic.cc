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

#include "cmlyrics/classic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "cmlyrics/error.h"
#include "cmlyrics/rng.h"
#include "cmlyrics/textproc.h"
#include "json.hpp"

namespace cmlyrics {
namespace {

using json = nlohmann::json;

constexpr int kVersion = 1;

size_t ClassIndex(Label label) { return label == Label::kExciting ? 0 : 1; }

double GaussianLogDensity(double x, double mean, double stdev) {
  const double z = (x - mean) / stdev;
  return -0.5 * z * z - std::log(stdev) - 0.5 * std::log(2.0 * std::numbers::pi);
}

json ParseDoc(std::string_view content, const char* format) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed ") + format + " document: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format)
    ThrowModel(std::string("not a ") + format + " document");
  if (doc.value("version", 0) != kVersion)
    ThrowModel(std::string("unsupported ") + format + " version");
  return doc;
}

void CheckFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) ThrowModel(std::string("non-finite value in ") + what);
  }
}

}  // namespace

int Vocab::Index(std::string_view term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return -1;
  return static_cast<int>(it - terms.begin());
}

Vocab BuildVocab(std::span<const std::vector<std::string>> docs, int min_count) {
  if (docs.empty()) ThrowData("cannot build a vocabulary from no documents");
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::vector<std::string> unique(doc.begin(), doc.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto& w : unique) ++df[w];
  }
  Vocab vocab;
  vocab.n_docs = static_cast<int>(docs.size());
  vocab.min_count = min_count;
  for (const auto& [term, count] : df) {
    if (count < min_count) continue;
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(count);
  }
  if (vocab.terms.empty())
    ThrowData("vocabulary is empty after applying min_count=" +
              std::to_string(min_count));
  return vocab;
}

Vocab BuildVocab(std::span<const Song> train_songs, int min_count) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(train_songs.size());
  for (const auto& s : train_songs) docs.push_back(LowercaseWords(s.text));
  return BuildVocab(docs, min_count);
}

double SparseVec::Dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& [i, v] : entries) s += v * dense[static_cast<size_t>(i)];
  return s;
}

double SparseVec::Norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.second * e.second;
  return std::sqrt(s);
}

SparseVec Tfidf(const Vocab& vocab, std::span<const std::string> words) {
  std::map<int, int> counts;
  for (const auto& w : words) {
    int idx = vocab.Index(w);
    if (idx >= 0) ++counts[idx];
  }
  SparseVec vec;
  double sq = 0.0;
  for (const auto& [idx, c] : counts) {
    const double idf =
        std::log((1.0 + vocab.n_docs) /
                 (1.0 + vocab.doc_freq[static_cast<size_t>(idx)])) +
        1.0;
    const double v = c * idf;
    vec.entries.emplace_back(idx, v);
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  for (auto& e : vec.entries) e.second /= norm;
  return vec;
}

SparseVec Tfidf(const Vocab& vocab, const Song& song) {
  return Tfidf(vocab, LowercaseWords(song.text));
}

NbModel TrainNb(std::span<const SparseVec> vectors, std::span<const Label> labels,
                size_t vocab_size, double alpha,
                std::span<const CodeMixFeatures> cm) {
  if (vectors.size() != labels.size())
    ThrowData("NB: vectors and labels differ in length");
  if (!cm.empty() && cm.size() != vectors.size())
    ThrowData("NB: code-mixed features and vectors differ in length");
  if (alpha <= 0.0) ThrowUsage("NB alpha must be > 0");
  std::array<size_t, 2> class_count{0, 0};
  for (Label l : labels) ++class_count[ClassIndex(l)];
  if (class_count[0] == 0 || class_count[1] == 0)
    ThrowData("NB training data must contain both classes");

  NbModel model;
  const double n = static_cast<double>(labels.size());
  for (size_t c = 0; c < 2; ++c) {
    model.class_log_prior[c] = std::log(static_cast<double>(class_count[c]) / n);
  }
  std::array<std::vector<double>, 2> mass{std::vector<double>(vocab_size, 0.0),
                                          std::vector<double>(vocab_size, 0.0)};
  for (size_t i = 0; i < vectors.size(); ++i) {
    auto& m = mass[ClassIndex(labels[i])];
    for (const auto& [idx, v] : vectors[i].entries) {
      if (static_cast<size_t>(idx) >= vocab_size)
        ThrowData("NB: term index beyond vocabulary");
      m[static_cast<size_t>(idx)] += v;
    }
  }
  for (size_t c = 0; c < 2; ++c) {
    const double total = std::accumulate(mass[c].begin(), mass[c].end(), 0.0) +
                         alpha * static_cast<double>(vocab_size);
    auto& ll = model.term_log_likelihood[c];
    ll.resize(vocab_size);
    for (size_t t = 0; t < vocab_size; ++t) ll[t] = std::log((mass[c][t] + alpha) / total);
  }
  if (!cm.empty()) {
    std::array<std::array<std::pair<double, double>, 4>, 2> g{};
    for (size_t c = 0; c < 2; ++c) {
      for (size_t f = 0; f < 4; ++f) {
        double sum = 0.0;
        for (size_t i = 0; i < cm.size(); ++i) {
          if (ClassIndex(labels[i]) == c) sum += cm[i].AsArray()[f];
        }
        const double mean = sum / static_cast<double>(class_count[c]);
        double sq = 0.0;
        for (size_t i = 0; i < cm.size(); ++i) {
          if (ClassIndex(labels[i]) != c) continue;
          const double d = cm[i].AsArray()[f] - mean;
          sq += d * d;
        }
        const double sd = std::sqrt(sq / static_cast<double>(class_count[c]));
        g[c][f] = {mean, std::max(sd, 1e-6)};
      }
    }
    model.cm_gaussian = g;
  }
  return model;
}

NbPrediction PredictNb(const NbModel& model, const SparseVec& vector,
                       const std::optional<CodeMixFeatures>& cm) {
  if (cm.has_value() != model.uses_cm())
    ThrowModel(model.uses_cm()
                   ? "NB model was trained with code-mixed features; none given"
                   : "NB model was trained without code-mixed features");
  std::array<double, 2> score{};
  for (size_t c = 0; c < 2; ++c) {
    double s = model.class_log_prior[c];
    const auto& ll = model.term_log_likelihood[c];
    for (const auto& [idx, v] : vector.entries) {
      if (static_cast<size_t>(idx) < ll.size()) s += v * ll[static_cast<size_t>(idx)];
    }
    if (cm) {
      const auto x = cm->AsArray();
      for (size_t f = 0; f < 4; ++f) {
        const auto [mean, sd] = (*model.cm_gaussian)[c][f];
        s += GaussianLogDensity(x[f], mean, sd);
      }
    }
    score[c] = s;
  }
  NbPrediction pred;
  const double m = std::max(score[0], score[1]);
  const double e0 = std::exp(score[0] - m);
  const double e1 = std::exp(score[1] - m);
  pred.posterior = {e0 / (e0 + e1), e1 / (e0 + e1)};
  pred.label = score[0] >= score[1] ? Label::kExciting : Label::kNonExciting;
  return pred;
}

SvmModel TrainSvm(std::span<const SparseVec> vectors, std::span<const Label> labels,
                  size_t vocab_size, const SvmTrainConfig& config,
                  std::span<const std::array<double, 4>> cm,
                  std::vector<double>* epoch_objective) {
  if (vectors.size() != labels.size())
    ThrowData("SVM: vectors and labels differ in length");
  if (!cm.empty() && cm.size() != vectors.size())
    ThrowData("SVM: code-mixed features and vectors differ in length");
  if (config.lambda <= 0.0) ThrowUsage("SVM lambda must be > 0");
  if (config.epochs < 0) ThrowUsage("SVM epochs must be >= 0");
  bool pos = false;
  bool neg = false;
  for (Label l : labels) (l == Label::kExciting ? pos : neg) = true;
  if (!pos || !neg) ThrowData("SVM training data must contain both classes");

  SvmModel model;
  model.lambda = config.lambda;
  model.vocab_size = vocab_size;
  model.use_cm = !cm.empty();
  const size_t dim = vocab_size + (model.use_cm ? 4 : 0);

  // w = scale * v, with the bias as the last coordinate of v. The returned
  // model is the average of all iterates: avg = sum_t scale_t v_t, kept lazily
  // per coordinate through the running sum of scales.
  std::vector<double> v(dim + 1, 0.0);
  double scale = 1.0;
  double v_sq = 0.0;
  std::vector<double> avg(dim + 1, 0.0);
  std::vector<double> synced(dim + 1, 0.0);
  double scale_sum = 0.0;
  const double radius = 1.0 / std::sqrt(config.lambda);
  std::vector<size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  uint64_t t = 0;

  auto sync = [&](size_t idx) {
    avg[idx] += v[idx] * (scale_sum - synced[idx]);
    synced[idx] = scale_sum;
  };
  auto sync_all = [&] {
    for (size_t i = 0; i <= dim; ++i) sync(i);
  };
  auto materialize = [&] {
    sync_all();
    const double n = std::max(static_cast<double>(t), 1.0);
    model.weights.assign(dim, 0.0);
    for (size_t i = 0; i < dim; ++i) model.weights[i] = avg[i] / n;
    model.bias = avg[dim] / n;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    for (size_t i : order) {
      ++t;
      const double eta = 1.0 / (config.lambda * static_cast<double>(t));
      const double y = labels[i] == Label::kExciting ? 1.0 : -1.0;
      double margin = vectors[i].Dot(v) + v[dim];
      if (model.use_cm) {
        for (size_t f = 0; f < 4; ++f) margin += cm[i][f] * v[vocab_size + f];
      }
      margin *= scale * y;

      const double shrink = 1.0 - eta * config.lambda;
      if (shrink <= 0.0) {
        sync_all();
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_sq = 0.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * y / scale;
        auto bump = [&](size_t idx, double x) {
          sync(idx);
          const double old = v[idx];
          v[idx] += step * x;
          v_sq += v[idx] * v[idx] - old * old;
        };
        for (const auto& [idx, x] : vectors[i].entries) bump(static_cast<size_t>(idx), x);
        if (model.use_cm) {
          for (size_t f = 0; f < 4; ++f) bump(vocab_size + f, cm[i][f]);
        }
        bump(dim, 1.0);
      }
      const double norm = scale * std::sqrt(std::max(v_sq, 0.0));
      if (norm > radius) scale *= radius / norm;
      // Fold the scale back in while the running sum still resolves it.
      if (scale < 1e-6) {
        sync_all();
        for (double& x : v) x *= scale;
        std::fill(synced.begin(), synced.end(), 0.0);
        scale_sum = 0.0;
        v_sq *= scale * scale;
        scale = 1.0;
      }
      scale_sum += scale;
    }
    if (epoch_objective) {
      materialize();
      epoch_objective->push_back(SvmObjective(model, vectors, labels, cm));
    }
  }
  materialize();
  for (double w : model.weights) {
    if (!std::isfinite(w)) ThrowNumeric("SVM weights diverged");
  }
  return model;
}

double SvmDecision(const SvmModel& model, const SparseVec& vector,
                   const std::optional<std::array<double, 4>>& cm) {
  if (cm.has_value() != model.use_cm)
    ThrowModel(model.use_cm
                   ? "SVM model was trained with code-mixed features; none given"
                   : "SVM model was trained without code-mixed features");
  double s = model.bias;
  for (const auto& [idx, x] : vector.entries) {
    if (static_cast<size_t>(idx) < model.vocab_size)
      s += x * model.weights[static_cast<size_t>(idx)];
  }
  if (cm) {
    for (size_t f = 0; f < 4; ++f) s += (*cm)[f] * model.weights[model.vocab_size + f];
  }
  return s;
}

Label PredictSvm(const SvmModel& model, const SparseVec& vector,
                 const std::optional<std::array<double, 4>>& cm) {
  return SvmDecision(model, vector, cm) >= 0.0 ? Label::kExciting
                                                : Label::kNonExciting;
}

double SvmObjective(const SvmModel& model, std::span<const SparseVec> vectors,
                    std::span<const Label> labels,
                    std::span<const std::array<double, 4>> cm) {
  double hinge = 0.0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    const double y = labels[i] == Label::kExciting ? 1.0 : -1.0;
    std::optional<std::array<double, 4>> c;
    if (model.use_cm) c = cm[i];
    hinge += std::max(0.0, 1.0 - y * SvmDecision(model, vectors[i], c));
  }
  double sq = model.bias * model.bias;
  for (double w : model.weights) sq += w * w;
  return hinge / static_cast<double>(std::max<size_t>(vectors.size(), 1)) +
         0.5 * model.lambda * sq;
}

std::string SerializeVocab(const Vocab& vocab) {
  json doc;
  doc["format"] = "cmlyrics-vocab";
  doc["version"] = kVersion;
  doc["terms"] = vocab.terms;
  doc["doc_freq"] = vocab.doc_freq;
  doc["n_docs"] = vocab.n_docs;
  doc["min_count"] = vocab.min_count;
  return doc.dump() + "\n";
}

Vocab ParseVocab(std::string_view content) {
  json doc = ParseDoc(content, "cmlyrics-vocab");
  try {
    Vocab v;
    v.terms = doc.at("terms").get<std::vector<std::string>>();
    v.doc_freq = doc.at("doc_freq").get<std::vector<int>>();
    v.n_docs = doc.at("n_docs").get<int>();
    v.min_count = doc.at("min_count").get<int>();
    if (v.terms.size() != v.doc_freq.size())
      ThrowModel("vocab terms and doc_freq differ in length");
    if (!std::is_sorted(v.terms.begin(), v.terms.end()))
      ThrowModel("vocab terms are not sorted");
    return v;
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed vocab: ") + e.what());
  }
}

std::string SerializeNbModel(const NbModel& model) {
  json doc;
  doc["format"] = "cmlyrics-nb";
  doc["version"] = kVersion;
  doc["class_log_prior"] = model.class_log_prior;
  doc["term_log_likelihood"] = {model.term_log_likelihood[0],
                                model.term_log_likelihood[1]};
  if (model.cm_gaussian) {
    json g = json::array();
    for (const auto& per_class : *model.cm_gaussian) {
      json row = json::array();
      for (const auto& [mean, sd] : per_class) row.push_back({mean, sd});
      g.push_back(row);
    }
    doc["cm_gaussian"] = g;
  } else {
    doc["cm_gaussian"] = nullptr;
  }
  return doc.dump() + "\n";
}

NbModel ParseNbModel(std::string_view content) {
  json doc = ParseDoc(content, "cmlyrics-nb");
  try {
    NbModel m;
    m.class_log_prior = doc.at("class_log_prior").get<std::array<double, 2>>();
    const auto& ll = doc.at("term_log_likelihood");
    if (ll.size() != 2) ThrowModel("NB model needs two likelihood rows");
    for (size_t c = 0; c < 2; ++c) {
      m.term_log_likelihood[c] = ll[c].get<std::vector<double>>();
      CheckFinite(m.term_log_likelihood[c], "NB likelihoods");
    }
    if (m.term_log_likelihood[0].size() != m.term_log_likelihood[1].size())
      ThrowModel("NB likelihood rows differ in length");
    const auto& g = doc.at("cm_gaussian");
    if (!g.is_null()) {
      std::array<std::array<std::pair<double, double>, 4>, 2> params{};
      for (size_t c = 0; c < 2; ++c) {
        for (size_t f = 0; f < 4; ++f) {
          params[c][f] = {g.at(c).at(f).at(0).get<double>(),
                          g.at(c).at(f).at(1).get<double>()};
        }
      }
      m.cm_gaussian = params;
    }
    return m;
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed NB model: ") + e.what());
  }
}

std::string SerializeSvmModel(const SvmModel& model) {
  json doc;
  doc["format"] = "cmlyrics-svm";
  doc["version"] = kVersion;
  doc["weights"] = model.weights;
  doc["bias"] = model.bias;
  doc["lambda"] = model.lambda;
  doc["vocab_size"] = model.vocab_size;
  doc["use_cm"] = model.use_cm;
  return doc.dump() + "\n";
}

SvmModel ParseSvmModel(std::string_view content) {
  json doc = ParseDoc(content, "cmlyrics-svm");
  try {
    SvmModel m;
    m.weights = doc.at("weights").get<std::vector<double>>();
    m.bias = doc.at("bias").get<double>();
    m.lambda = doc.at("lambda").get<double>();
    m.vocab_size = doc.at("vocab_size").get<size_t>();
    m.use_cm = doc.at("use_cm").get<bool>();
    if (m.weights.size() != m.vocab_size + (m.use_cm ? 4 : 0))
      ThrowModel("SVM weight count does not match vocab_size/use_cm");
    CheckFinite(m.weights, "SVM weights");
    return m;
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed SVM model: ") + e.what());
  }
}

}  // namespace cmlyrics
