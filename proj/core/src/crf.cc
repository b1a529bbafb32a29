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

#include "cmlyrics/crf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"
#include "cmlyrics/rng.h"
#include "json.hpp"

namespace cmlyrics {
namespace {

using json = nlohmann::json;

constexpr int kModelVersion = 1;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// alpha[t*K + k]: log-sum of scores of all prefixes ending in tag k at t.
std::vector<double> Forward(const CrfModel& model,
                            const std::vector<double>& emit, size_t T) {
  const size_t K = model.num_tags();
  std::vector<double> alpha(T * K);
  std::vector<double> terms(K);
  for (size_t k = 0; k < K; ++k) alpha[k] = model.begin(k) + emit[k];
  for (size_t t = 1; t < T; ++t) {
    for (size_t k = 0; k < K; ++k) {
      for (size_t j = 0; j < K; ++j)
        terms[j] = alpha[(t - 1) * K + j] + model.transition(j, k);
      alpha[t * K + k] = LogSumExp(terms) + emit[t * K + k];
    }
  }
  return alpha;
}

std::vector<double> Backward(const CrfModel& model,
                             const std::vector<double>& emit, size_t T) {
  const size_t K = model.num_tags();
  std::vector<double> beta(T * K, 0.0);
  std::vector<double> terms(K);
  for (size_t t = T - 1; t-- > 0;) {
    for (size_t j = 0; j < K; ++j) {
      for (size_t k = 0; k < K; ++k)
        terms[k] = model.transition(j, k) + emit[(t + 1) * K + k] +
                   beta[(t + 1) * K + k];
      beta[t * K + j] = LogSumExp(terms);
    }
  }
  return beta;
}

void CheckExample(const CrfModel& model, const CrfExample& ex) {
  if (ex.x.size() == 0) ThrowData("CRF example with an empty sentence");
  if (ex.y.size() != ex.x.size())
    ThrowData("CRF example has " + std::to_string(ex.y.size()) + " tags for " +
              std::to_string(ex.x.size()) + " tokens");
  for (int y : ex.y) {
    if (y < 0 || static_cast<size_t>(y) >= model.num_tags())
      ThrowData("CRF example tag index out of range");
  }
}

FeaturizedSentence FeaturizeImpl(CrfModel* mutable_model,
                                 const CrfModel& model,
                                 const Sentence& sentence,
                                 const LangResources& resources) {
  FeaturizedSentence out;
  out.feature_ids.resize(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    for (const auto& f : ExtractTokenFeatures(sentence, i, resources)) {
      int id = mutable_model ? mutable_model->AddFeature(f) : model.FeatureId(f);
      if (id >= 0) out.feature_ids[i].push_back(id);
    }
  }
  return out;
}

std::vector<int> TagPositions(const CrfModel& model,
                              const std::vector<LangTag>& tags) {
  std::vector<int> y;
  y.reserve(tags.size());
  for (LangTag t : tags) {
    int idx = model.TagIndex(t);
    if (idx < 0) ThrowData(std::string("tag ") + LangTagName(t) + " not in tagset");
    y.push_back(idx);
  }
  return y;
}

}  // namespace

CrfModel::CrfModel() : CrfModel({LangTag::kTe, LangTag::kEn, LangTag::kOther}) {}

CrfModel::CrfModel(std::vector<LangTag> tagset) : tagset_(std::move(tagset)) {
  if (tagset_.empty()) ThrowModel("CRF tagset must not be empty");
  weights_.assign(num_tags() + num_tags() * num_tags(), 0.0);
}

int CrfModel::FeatureId(const std::string& feature) const {
  auto it = feature_index_.find(feature);
  return it == feature_index_.end() ? -1 : it->second;
}

int CrfModel::AddFeature(const std::string& feature) {
  auto [it, inserted] =
      feature_index_.emplace(feature, static_cast<int>(features_.size()));
  if (inserted) {
    // Only the begin/transition tail moves.
    weights_.insert(weights_.begin() + static_cast<ptrdiff_t>(emission_size()),
                    num_tags(), 0.0);
    features_.push_back(feature);
  }
  return it->second;
}

int CrfModel::TagIndex(LangTag tag) const {
  for (size_t i = 0; i < tagset_.size(); ++i) {
    if (tagset_[i] == tag) return static_cast<int>(i);
  }
  return -1;
}

FeaturizedSentence Featurize(const CrfModel& model, const Sentence& sentence,
                             const LangResources& resources) {
  return FeaturizeImpl(nullptr, model, sentence, resources);
}

FeaturizedSentence FeaturizeAndIndex(CrfModel& model, const Sentence& sentence,
                                     const LangResources& resources) {
  return FeaturizeImpl(&model, model, sentence, resources);
}

std::vector<double> EmissionScores(const CrfModel& model,
                                   const FeaturizedSentence& x) {
  const size_t K = model.num_tags();
  std::vector<double> emit(x.size() * K, 0.0);
  for (size_t t = 0; t < x.size(); ++t) {
    for (int f : x.feature_ids[t]) {
      for (size_t k = 0; k < K; ++k)
        emit[t * K + k] += model.emission(static_cast<size_t>(f), k);
    }
  }
  return emit;
}

double SequenceScore(const CrfModel& model, const FeaturizedSentence& x,
                     std::span<const int> y) {
  const size_t K = model.num_tags();
  const std::vector<double> emit = EmissionScores(model, x);
  double score = 0.0;
  for (size_t t = 0; t < x.size(); ++t) {
    const auto cur = static_cast<size_t>(y[t]);
    score += emit[t * K + cur];
    score += t == 0 ? model.begin(cur)
                    : model.transition(static_cast<size_t>(y[t - 1]), cur);
  }
  return score;
}

double LogPartition(const CrfModel& model, const FeaturizedSentence& x) {
  if (x.size() == 0) return 0.0;
  const size_t K = model.num_tags();
  const std::vector<double> emit = EmissionScores(model, x);
  const std::vector<double> alpha = Forward(model, emit, x.size());
  return LogSumExp(std::span<const double>(alpha).subspan((x.size() - 1) * K, K));
}

CrfObjective CrfLogLikelihoodGrad(const CrfModel& model,
                                  std::span<const CrfExample> batch) {
  return CrfLogLikelihoodGrad(model, batch, model.l2());
}

CrfObjective CrfLogLikelihoodGrad(const CrfModel& model,
                                  std::span<const CrfExample> batch,
                                  double l2_weight) {
  const size_t K = model.num_tags();
  const auto w = model.weights();
  CrfObjective obj;
  obj.gradient.assign(w.size(), 0.0);
  auto& g = obj.gradient;
  std::vector<double> edge(K);

  for (const auto& ex : batch) {
    CheckExample(model, ex);
    const size_t T = ex.x.size();
    const std::vector<double> emit = EmissionScores(model, ex.x);
    const std::vector<double> alpha = Forward(model, emit, T);
    const std::vector<double> beta = Backward(model, emit, T);
    const double log_z =
        LogSumExp(std::span<const double>(alpha).subspan((T - 1) * K, K));

    // Observed counts.
    double score = 0.0;
    for (size_t t = 0; t < T; ++t) {
      const auto cur = static_cast<size_t>(ex.y[t]);
      score += emit[t * K + cur];
      for (int f : ex.x.feature_ids[t])
        g[model.EmissionIndex(static_cast<size_t>(f), cur)] += 1.0;
      if (t == 0) {
        score += model.begin(cur);
        g[model.BeginIndex(cur)] += 1.0;
      } else {
        const auto prev = static_cast<size_t>(ex.y[t - 1]);
        score += model.transition(prev, cur);
        g[model.TransitionIndex(prev, cur)] += 1.0;
      }
    }
    obj.log_likelihood += score - log_z;

    // Expected counts.
    for (size_t t = 0; t < T; ++t) {
      for (size_t k = 0; k < K; ++k) {
        const double p = std::exp(alpha[t * K + k] + beta[t * K + k] - log_z);
        for (int f : ex.x.feature_ids[t])
          g[model.EmissionIndex(static_cast<size_t>(f), k)] -= p;
        if (t == 0) g[model.BeginIndex(k)] -= p;
      }
      if (t == 0) continue;
      for (size_t j = 0; j < K; ++j) {
        for (size_t k = 0; k < K; ++k) {
          const double p =
              std::exp(alpha[(t - 1) * K + j] + model.transition(j, k) +
                       emit[t * K + k] + beta[t * K + k] - log_z);
          g[model.TransitionIndex(j, k)] -= p;
        }
      }
    }
  }

  if (l2_weight != 0.0) {
    double sq = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      sq += w[i] * w[i];
      g[i] -= 2.0 * l2_weight * w[i];
    }
    obj.log_likelihood -= l2_weight * sq;
  }
  if (!std::isfinite(obj.log_likelihood))
    ThrowNumeric("CRF log-likelihood is not finite (training diverged)");
  for (double v : g) {
    if (!std::isfinite(v)) ThrowNumeric("CRF gradient is not finite");
  }
  return obj;
}

std::vector<int> ViterbiPath(const CrfModel& model, const FeaturizedSentence& x) {
  const size_t T = x.size();
  const size_t K = model.num_tags();
  if (T == 0) return {};
  const std::vector<double> emit = EmissionScores(model, x);
  std::vector<double> delta(T * K);
  std::vector<int> back(T * K, 0);
  for (size_t k = 0; k < K; ++k) delta[k] = model.begin(k) + emit[k];
  for (size_t t = 1; t < T; ++t) {
    for (size_t k = 0; k < K; ++k) {
      double best = kNegInf;
      int arg = 0;
      for (size_t j = 0; j < K; ++j) {
        const double s = delta[(t - 1) * K + j] + model.transition(j, k);
        if (s > best) {
          best = s;
          arg = static_cast<int>(j);
        }
      }
      delta[t * K + k] = best + emit[t * K + k];
      back[t * K + k] = arg;
    }
  }
  std::vector<int> path(T);
  double best = kNegInf;
  for (size_t k = 0; k < K; ++k) {
    if (delta[(T - 1) * K + k] > best) {
      best = delta[(T - 1) * K + k];
      path[T - 1] = static_cast<int>(k);
    }
  }
  for (size_t t = T - 1; t > 0; --t)
    path[t - 1] = back[t * K + static_cast<size_t>(path[t])];
  return path;
}

std::vector<LangTag> ViterbiDecode(const CrfModel& model,
                                   const Sentence& sentence,
                                   const LangResources& resources) {
  const std::vector<int> path =
      ViterbiPath(model, Featurize(model, sentence, resources));
  std::vector<LangTag> tags;
  tags.reserve(path.size());
  for (int p : path) tags.push_back(model.tagset()[static_cast<size_t>(p)]);
  return tags;
}

CrfModel TrainCrf(const std::vector<TaggedSentence>& data,
                  const LangResources& resources, const CrfTrainConfig& config,
                  const std::vector<TaggedSentence>* dev,
                  CrfTrainReport* report) {
  if (data.empty()) ThrowData("CRF training data is empty");
  if (config.epochs < 0) ThrowUsage("CRF epochs must be >= 0");
  if (config.batch_size == 0) ThrowUsage("CRF batch size must be >= 1");
  CrfModel model;
  model.set_l2(config.l2);
  std::vector<CrfExample> examples;
  examples.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i];
    if (s.tokens.empty() || s.tokens.size() != s.tags.size())
      ThrowData("training sentence " + std::to_string(i) +
                " is empty or has misaligned tags");
    examples.push_back(
        {FeaturizeAndIndex(model, s.tokens, resources), TagPositions(model, s.tags)});
  }

  CrfTrainReport local;
  CrfTrainReport& rep = report ? *report : local;
  rep = CrfTrainReport{};

  const double n = static_cast<double>(examples.size());
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::vector<double> best_weights(model.weights().begin(), model.weights().end());
  double best_dev = -1.0;
  uint64_t step = 0;
  std::vector<CrfExample> batch;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    for (size_t b = 0; b < order.size(); b += config.batch_size) {
      const size_t e = std::min(order.size(), b + config.batch_size);
      batch.clear();
      for (size_t i = b; i < e; ++i) batch.push_back(examples[order[i]]);
      // Scale the penalty so one epoch of batches sums to the full objective.
      const double share = static_cast<double>(e - b) / n;
      CrfObjective obj = CrfLogLikelihoodGrad(model, batch, config.l2 * share);
      const double eta = config.learning_rate /
                         (1.0 + config.decay * static_cast<double>(step++));
      const double scale = eta / static_cast<double>(e - b);
      auto w = model.weights();
      for (size_t i = 0; i < w.size(); ++i) w[i] += scale * obj.gradient[i];
    }
    rep.epoch_objective.push_back(
        CrfLogLikelihoodGrad(model, examples, config.l2).log_likelihood);
    if (dev != nullptr && !dev->empty()) {
      const double acc = TagAccuracy(model, *dev, resources);
      rep.dev_accuracy.push_back(acc);
      if (acc > best_dev) {
        best_dev = acc;
        rep.best_epoch = epoch;
        best_weights.assign(model.weights().begin(), model.weights().end());
      }
    } else {
      rep.best_epoch = epoch;
    }
  }
  if (dev != nullptr && !dev->empty() && rep.best_epoch > 0)
    std::copy(best_weights.begin(), best_weights.end(), model.weights().begin());
  return model;
}

std::pair<std::vector<TaggedSentence>, std::vector<TaggedSentence>>
SplitTaggedData(const std::vector<TaggedSentence>& data, double holdout_fraction,
                uint64_t seed) {
  if (data.empty()) ThrowData("no tagged sentences to split");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0))
    ThrowUsage("holdout fraction must be in [0, 1)");
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<size_t>(order));
  const size_t n = data.size();
  size_t held = static_cast<size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
  if (n >= 2 && holdout_fraction > 0.0) held = std::clamp<size_t>(held, 1, n - 1);
  std::vector<TaggedSentence> train;
  std::vector<TaggedSentence> test;
  for (size_t i = 0; i < n; ++i) (i < n - held ? train : test).push_back(data[order[i]]);
  return {std::move(train), std::move(test)};
}

double TagAccuracy(const CrfModel& model,
                   const std::vector<TaggedSentence>& gold,
                   const LangResources& resources) {
  size_t total = 0;
  size_t correct = 0;
  for (const auto& s : gold) {
    if (s.tokens.empty()) continue;
    const std::vector<LangTag> pred = ViterbiDecode(model, s.tokens, resources);
    for (size_t i = 0; i < pred.size() && i < s.tags.size(); ++i) {
      ++total;
      if (pred[i] == s.tags[i]) ++correct;
    }
  }
  if (total == 0) ThrowData("tag accuracy needs at least one gold token");
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<TaggedSentence> TagSong(const CrfModel& model, const Song& song,
                                    const LangResources& resources) {
  std::vector<TaggedSentence> out;
  for (const auto& text : SplitSentences(song.text)) {
    TaggedSentence ts;
    ts.tokens = Tokenize(text);
    ts.tags = ViterbiDecode(model, ts.tokens, resources);
    for (size_t i = 0; i < ts.tokens.size(); ++i) {
      if (ts.tokens[i].kind != TokenKind::kWord) ts.tags[i] = LangTag::kOther;
    }
    out.push_back(std::move(ts));
  }
  return out;
}

std::string SerializeCrfModel(const CrfModel& model) {
  json doc;
  doc["format"] = "cmlyrics-crf";
  doc["version"] = kModelVersion;
  json tags = json::array();
  for (LangTag t : model.tagset()) tags.push_back(LangTagName(t));
  doc["tagset"] = tags;
  doc["l2"] = model.l2();
  doc["features"] = model.features();
  const auto w = model.weights();
  const size_t K = model.num_tags();
  const size_t emission = model.num_features() * K;
  doc["emission"] = std::vector<double>(w.begin(), w.begin() + static_cast<ptrdiff_t>(emission));
  doc["begin"] = std::vector<double>(w.begin() + static_cast<ptrdiff_t>(emission),
                                     w.begin() + static_cast<ptrdiff_t>(emission + K));
  doc["transition"] =
      std::vector<double>(w.begin() + static_cast<ptrdiff_t>(emission + K), w.end());
  return doc.dump() + "\n";
}

CrfModel ParseCrfModel(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content);
    if (doc.at("format") != "cmlyrics-crf")
      ThrowModel("not a CRF model document");
    if (doc.at("version").get<int>() != kModelVersion)
      ThrowModel("unsupported CRF model version " + doc.at("version").dump());
    std::vector<LangTag> tagset;
    for (const auto& t : doc.at("tagset")) {
      auto tag = ParseLangTag(t.get<std::string>());
      if (!tag) ThrowModel("unknown tag in model: " + t.dump());
      tagset.push_back(*tag);
    }
    CrfModel model(tagset);
    model.set_l2(doc.at("l2").get<double>());
    for (const auto& f : doc.at("features")) model.AddFeature(f.get<std::string>());
    if (model.num_features() != doc.at("features").size())
      ThrowModel("duplicate feature strings in model");
    const auto emission = doc.at("emission").get<std::vector<double>>();
    const auto begin = doc.at("begin").get<std::vector<double>>();
    const auto transition = doc.at("transition").get<std::vector<double>>();
    const size_t K = model.num_tags();
    if (emission.size() != model.num_features() * K || begin.size() != K ||
        transition.size() != K * K)
      ThrowModel("CRF weight arrays do not match the feature and tag counts");
    auto w = model.weights();
    std::copy(emission.begin(), emission.end(), w.begin());
    std::copy(begin.begin(), begin.end(), w.begin() + static_cast<ptrdiff_t>(emission.size()));
    std::copy(transition.begin(), transition.end(),
              w.begin() + static_cast<ptrdiff_t>(emission.size() + K));
    for (double v : w) {
      if (!std::isfinite(v)) ThrowModel("non-finite weight in CRF model");
    }
    return model;
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed CRF model: ") + e.what());
  }
}

void SaveCrfModel(const CrfModel& model, const std::filesystem::path& path) {
  WriteFile(path, SerializeCrfModel(model));
}

CrfModel LoadCrfModel(const std::filesystem::path& path) {
  return ParseCrfModel(ReadFile(path));
}

}  // namespace cmlyrics
