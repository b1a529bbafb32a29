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

// Linear-chain CRF for token language identification.
//
// Weights live in one flat vector:
//   [ emission: num_features x K | begin-of-sentence: K | transition: K x K ]
// where K is the tagset size. All probability computations are done in log
// space with log-sum-exp.

#ifndef CMLYRICS_CRF_H_
#define CMLYRICS_CRF_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmlyrics/corpus.h"
#include "cmlyrics/langid.h"

namespace cmlyrics {

class CrfModel {
 public:
  // Zero-weight model over the {te, en, other} tagset with no features.
  CrfModel();
  explicit CrfModel(std::vector<LangTag> tagset);

  const std::vector<LangTag>& tagset() const { return tagset_; }
  size_t num_tags() const { return tagset_.size(); }
  size_t num_features() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }

  // Index of a feature string, or -1.
  int FeatureId(const std::string& feature) const;
  // Returns the existing index or appends a new feature (with zero weights).
  int AddFeature(const std::string& feature);

  double l2() const { return l2_; }
  void set_l2(double l2) { l2_ = l2; }

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }

  size_t EmissionIndex(size_t feature, size_t tag) const {
    return feature * num_tags() + tag;
  }
  size_t BeginIndex(size_t tag) const { return emission_size() + tag; }
  size_t TransitionIndex(size_t prev, size_t cur) const {
    return emission_size() + num_tags() + prev * num_tags() + cur;
  }

  double emission(size_t feature, size_t tag) const {
    return weights_[EmissionIndex(feature, tag)];
  }
  double begin(size_t tag) const { return weights_[BeginIndex(tag)]; }
  double transition(size_t prev, size_t cur) const {
    return weights_[TransitionIndex(prev, cur)];
  }

  // Position of a tag in the tagset, or -1.
  int TagIndex(LangTag tag) const;

  bool operator==(const CrfModel&) const = default;

 private:
  size_t emission_size() const { return features_.size() * num_tags(); }

  std::vector<LangTag> tagset_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, int> feature_index_;
  std::vector<double> weights_;
  double l2_ = 1e-4;
};

// Feature ids per token; features unknown to the model are dropped.
struct FeaturizedSentence {
  std::vector<std::vector<int>> feature_ids;

  size_t size() const { return feature_ids.size(); }
};

FeaturizedSentence Featurize(const CrfModel& model, const Sentence& sentence,
                             const LangResources& resources);
// Training-time variant that adds unseen features to the model.
FeaturizedSentence FeaturizeAndIndex(CrfModel& model, const Sentence& sentence,
                                     const LangResources& resources);

// A labelled sentence in model coordinates: tag positions into the tagset.
struct CrfExample {
  FeaturizedSentence x;
  std::vector<int> y;
};

// T x K emission scores.
std::vector<double> EmissionScores(const CrfModel& model,
                                   const FeaturizedSentence& x);

// Unnormalised log score of one labelling.
double SequenceScore(const CrfModel& model, const FeaturizedSentence& x,
                     std::span<const int> y);

// log Z(x) by the forward recursion.
double LogPartition(const CrfModel& model, const FeaturizedSentence& x);

struct CrfObjective {
  double log_likelihood = 0.0;  // sum log P(y|x) - l2_weight * ||w||^2
  std::vector<double> gradient;  // same layout as the weights
};

// Penalised conditional log-likelihood of a batch and its gradient
// (observed minus expected counts, minus 2 * l2_weight * w). Expected counts
// come from forward-backward. l2_weight defaults to model.l2(). Throws
// Error(kNumeric) if a non-finite value appears.
CrfObjective CrfLogLikelihoodGrad(const CrfModel& model,
                                  std::span<const CrfExample> batch);
CrfObjective CrfLogLikelihoodGrad(const CrfModel& model,
                                  std::span<const CrfExample> batch,
                                  double l2_weight);

// Highest-scoring labelling as tagset positions; ties go to the lower index.
std::vector<int> ViterbiPath(const CrfModel& model, const FeaturizedSentence& x);

// Decodes a non-empty sentence.
std::vector<LangTag> ViterbiDecode(const CrfModel& model,
                                   const Sentence& sentence,
                                   const LangResources& resources);

struct CrfTrainConfig {
  double l2 = 1e-4;
  int epochs = 15;
  size_t batch_size = 8;
  double learning_rate = 0.2;
  // Step size at update t is learning_rate / (1 + decay * t).
  double decay = 1e-3;
  uint64_t seed = 42;
};

struct CrfTrainReport {
  std::vector<double> epoch_objective;  // full-data objective after each epoch
  std::vector<double> dev_accuracy;     // empty without a dev set
  int best_epoch = 0;                   // 1-based; 0 when no epoch ran
};

// Minibatch stochastic gradient ascent. Features are indexed from the
// training data in first-seen order. With a dev set, returns the weights of
// the epoch with the best dev accuracy (earliest on ties); otherwise the final
// weights. Throws Error(kData) on empty or misaligned data.
CrfModel TrainCrf(const std::vector<TaggedSentence>& data,
                  const LangResources& resources, const CrfTrainConfig& config,
                  const std::vector<TaggedSentence>* dev = nullptr,
                  CrfTrainReport* report = nullptr);

// Seeded shuffle, then the last round(fraction * n) sentences are held out
// (at least one each side when n >= 2).
std::pair<std::vector<TaggedSentence>, std::vector<TaggedSentence>>
SplitTaggedData(const std::vector<TaggedSentence>& data, double holdout_fraction,
                uint64_t seed);

// Token accuracy of Viterbi output against gold tags.
double TagAccuracy(const CrfModel& model,
                   const std::vector<TaggedSentence>& gold,
                   const LangResources& resources);

// split_sentences -> tokenize -> decode; Punct and Number tokens are forced
// to Other.
std::vector<TaggedSentence> TagSong(const CrfModel& model, const Song& song,
                                    const LangResources& resources);

// Versioned JSON model document; doubles are written in shortest round-trip
// form so Load(Save(m)) == m.
std::string SerializeCrfModel(const CrfModel& model);
CrfModel ParseCrfModel(std::string_view content);
void SaveCrfModel(const CrfModel& model, const std::filesystem::path& path);
CrfModel LoadCrfModel(const std::filesystem::path& path);

}  // namespace cmlyrics

#endif  // CMLYRICS_CRF_H_
