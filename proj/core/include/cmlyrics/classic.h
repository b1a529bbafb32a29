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

// tf-idf vectors and the two classical baselines: a multinomial Naive Bayes
// (optionally with per-class Gaussians over the code-mixed features) and a
// linear SVM trained with Pegasos.
//
// Class index 0 is Exciting, 1 is NonExciting. Exact ties resolve to
// Exciting everywhere.

#ifndef CMLYRICS_CLASSIC_H_
#define CMLYRICS_CLASSIC_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmlyrics/cmfeatures.h"
#include "cmlyrics/corpus.h"

namespace cmlyrics {

struct Vocab {
  std::vector<std::string> terms;  // sorted; position = index
  std::vector<int> doc_freq;
  int n_docs = 0;
  int min_count = 1;

  size_t size() const { return terms.size(); }
  // Index of a lowercased term, or -1.
  int Index(std::string_view term) const;

  bool operator==(const Vocab&) const = default;
};

// Vocabulary over already-lowercased documents; terms must appear in at least
// min_count documents. Throws Error(kData) if nothing survives.
Vocab BuildVocab(std::span<const std::vector<std::string>> docs, int min_count);
// Uses LowercaseWords(song.text) as the document.
Vocab BuildVocab(std::span<const Song> train_songs, int min_count);

struct SparseVec {
  std::vector<std::pair<int, double>> entries;  // strictly increasing index

  bool empty() const { return entries.empty(); }
  double Dot(std::span<const double> dense) const;
  double Norm() const;

  bool operator==(const SparseVec&) const = default;
};

// Raw count times smoothed idf, ln((1 + N) / (1 + df)) + 1, then L2
// normalised. Out-of-vocabulary words are ignored.
SparseVec Tfidf(const Vocab& vocab, std::span<const std::string> words);
SparseVec Tfidf(const Vocab& vocab, const Song& song);

struct NbModel {
  std::array<double, 2> class_log_prior{0, 0};
  // term_log_likelihood[c][t]
  std::array<std::vector<double>, 2> term_log_likelihood;
  // Per class, per code-mixed feature (mean, stdev); set iff trained with cm.
  std::optional<std::array<std::array<std::pair<double, double>, 4>, 2>>
      cm_gaussian;

  bool uses_cm() const { return cm_gaussian.has_value(); }
  bool operator==(const NbModel&) const = default;
};

struct NbPrediction {
  Label label = Label::kExciting;
  std::array<double, 2> posterior{0.5, 0.5};
};

// Multinomial NB over tf-idf mass with Laplace smoothing alpha. When cm is
// given (raw features, one per example) a Gaussian per class and feature is
// fitted, stdev floored at 1e-6. Throws Error(kData) if a class is missing.
NbModel TrainNb(std::span<const SparseVec> vectors, std::span<const Label> labels,
                size_t vocab_size, double alpha,
                std::span<const CodeMixFeatures> cm = {});

// Class scores: log prior + sum value * log-likelihood (+ Gaussian
// log-densities). Throws Error(kModel) when cm presence does not match the
// model.
NbPrediction PredictNb(const NbModel& model, const SparseVec& vector,
                       const std::optional<CodeMixFeatures>& cm = std::nullopt);

struct SvmModel {
  std::vector<double> weights;  // vocab size, plus 4 when use_cm
  double bias = 0.0;
  double lambda = 1e-4;
  size_t vocab_size = 0;
  bool use_cm = false;

  bool operator==(const SvmModel&) const = default;
};

struct SvmTrainConfig {
  double lambda = 1e-4;
  int epochs = 20;
  uint64_t seed = 42;
};

// Pegasos: one stochastic subgradient step per example on
// hinge loss + (lambda/2)(||w||^2 + b^2), step 1/(lambda t), followed by the
// projection onto the ball of radius 1/sqrt(lambda). The bias is handled as a
// weight on a constant input, and the returned model is the average of all
// iterates. Each epoch visits the examples in a fresh permutation drawn from
// Rng(config.seed); the seeded shuffle, not the input order, decides the
// visiting sequence. epoch_objective, when given, receives the regularized
// objective of the averaged model after each epoch. Throws Error(kData) on
// single-class data.
SvmModel TrainSvm(std::span<const SparseVec> vectors, std::span<const Label> labels,
                  size_t vocab_size, const SvmTrainConfig& config,
                  std::span<const std::array<double, 4>> cm = {},
                  std::vector<double>* epoch_objective = nullptr);

double SvmDecision(const SvmModel& model, const SparseVec& vector,
                   const std::optional<std::array<double, 4>>& cm = std::nullopt);
// sign(w.x + b); zero goes to Exciting.
Label PredictSvm(const SvmModel& model, const SparseVec& vector,
                 const std::optional<std::array<double, 4>>& cm = std::nullopt);

// Mean hinge loss + (lambda/2)(||w||^2 + b^2).
double SvmObjective(const SvmModel& model, std::span<const SparseVec> vectors,
                    std::span<const Label> labels,
                    std::span<const std::array<double, 4>> cm = {});

// Versioned JSON documents; exact round trip.
std::string SerializeVocab(const Vocab& vocab);
Vocab ParseVocab(std::string_view content);
std::string SerializeNbModel(const NbModel& model);
NbModel ParseNbModel(std::string_view content);
std::string SerializeSvmModel(const SvmModel& model);
SvmModel ParseSvmModel(std::string_view content);

}  // namespace cmlyrics

#endif  // CMLYRICS_CLASSIC_H_
