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

// Sequence classifiers over lyric tokens: the CNN and LSTM baselines and the
// code-mixed network (embedding -> conv1d -> LSTM -> mean pool -> fusion with
// the four code-mixed features -> hidden layer -> softmax).
//
// Only the first valid_len positions are run through the network. With a zero
// PAD row and same-padding convolution this matches running the full padded
// sequence and masking the pool, and keeps PAD from costing time.

#ifndef CMLYRICS_NEURAL_H_
#define CMLYRICS_NEURAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmlyrics/corpus.h"
#include "cmlyrics/embeddings.h"
#include "cmlyrics/neural_kernels.h"

namespace cmlyrics {

enum class Arch { kCnn, kLstm, kCmnn };

const char* ArchName(Arch arch);  // "cnn", "lstm", "cmnn"
std::optional<Arch> ParseArch(std::string_view name);
std::optional<Activation> ParseActivation(std::string_view name);

using CmVector = std::array<double, 4>;

struct SequenceInput {
  std::vector<int> indices;  // length L, PAD after valid_len
  size_t valid_len = 0;
};

// Maps words through the table (UNK for unseen), keeps the first L and pads
// with PAD. Throws Error(kData) on an empty token list or L == 0.
SequenceInput PadSequence(std::span<const std::string> tokens, size_t max_len,
                          const EmbeddingTable& table);

struct ArchConfig {
  Arch arch = Arch::kCmnn;
  bool use_cm = false;
  Activation activation = Activation::kRelu;
  size_t n_filters = 64;
  size_t lstm_hidden = 64;
  size_t fusion_hidden = 32;
  // At initialization the non-PAD embedding rows are centered and scaled by
  // one common factor to this component RMS; 0 copies the table unchanged.
  double embed_rms = 1.0;

  bool operator==(const ArchConfig&) const = default;
};

struct TrainConfig {
  int epochs = 10;
  size_t batch_size = 32;
  double learning_rate = 0.05;
  uint64_t seed = 42;
  double clip_norm = 5.0;
};

// All trainable tensors. Groups an architecture does not use stay empty.
struct NeuralParams {
  std::vector<double> embedding;  // V x d, row 0 (PAD) fixed at zero
  std::vector<double> conv_w;     // 3 x d x n_filters
  std::vector<double> conv_b;
  std::vector<double> lstm_w;     // 4H x input
  std::vector<double> lstm_u;     // 4H x H
  std::vector<double> lstm_b;     // 4H, forget slice starts at 1
  std::vector<double> fusion_w;   // F x (pooled + 4 if use_cm)
  std::vector<double> fusion_b;
  std::vector<double> out_w;      // 2 x F
  std::vector<double> out_b;

  // Visits (name, tensor) in a fixed order.
  void ForEach(const std::function<void(const char*, std::vector<double>&)>& f);
  void ForEach(
      const std::function<void(const char*, const std::vector<double>&)>& f) const;

  bool operator==(const NeuralParams&) const = default;
};

struct NeuralModel {
  ArchConfig config;
  std::vector<std::string> vocab;  // embedding rows; [0] PAD, [1] UNK
  size_t embed_dim = 0;
  size_t max_len = 0;  // L used for padding at training time
  NeuralParams params;

  // Embedding view (vocab + current embedding weights).
  EmbeddingTable Embeddings() const;

  bool operator==(const NeuralModel&) const = default;
};

// Allocates parameters for the architecture: embedding copied from the table,
// everything else uniform(-0.08, 0.08) from Rng(seed), LSTM forget-gate bias 1.
NeuralModel InitNeuralModel(const ArchConfig& config, const EmbeddingTable& table,
                            size_t max_len, uint64_t seed);

// Class probabilities (Exciting, NonExciting). Throws Error(kModel) when cm
// presence does not match config.use_cm.
std::array<double, 2> NeuralForward(const NeuralModel& model,
                                    const SequenceInput& seq,
                                    const std::optional<CmVector>& cm);

// Cross-entropy of one example, accumulating parameter gradients into grad
// (which must have the model's shapes; see ZeroLike).
double NeuralLossGrad(const NeuralModel& model, const SequenceInput& seq,
                      const std::optional<CmVector>& cm, Label label,
                      NeuralParams* grad);

NeuralParams ZeroLike(const NeuralParams& params);

// argmax of the forward probabilities; ties go to Exciting.
Label NeuralPredict(const NeuralModel& model, const SequenceInput& seq,
                    const std::optional<CmVector>& cm);
Label PredictFromProbabilities(const std::array<double, 2>& probs);

struct NeuralExample {
  SequenceInput seq;
  std::optional<CmVector> cm;
  Label label = Label::kExciting;
};

struct NeuralTrainReport {
  std::vector<double> epoch_loss;    // mean training loss per epoch
  std::vector<double> dev_accuracy;  // per epoch
  int best_epoch = 0;                // 1-based
};

// Minibatch SGD on mean cross-entropy with global gradient-norm clipping;
// training order reshuffled every epoch from Rng(config.seed + 1). After each
// epoch dev accuracy is measured and the best snapshot is kept (earliest on
// ties). Throws Error(kData) on empty train/dev sets and Error(kNumeric)
// naming the epoch if the loss becomes non-finite.
NeuralModel TrainNeural(const ArchConfig& arch, std::span<const NeuralExample> train,
                        std::span<const NeuralExample> dev,
                        const EmbeddingTable& embeddings, size_t max_len,
                        const TrainConfig& config,
                        NeuralTrainReport* report = nullptr);

double NeuralAccuracy(const NeuralModel& model,
                      std::span<const NeuralExample> examples);

// Versioned JSON document with the architecture, vocabulary and every tensor.
std::string SerializeNeuralModel(const NeuralModel& model);
NeuralModel ParseNeuralModel(std::string_view content);

}  // namespace cmlyrics

#endif  // CMLYRICS_NEURAL_H_
