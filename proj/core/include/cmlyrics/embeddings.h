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

#ifndef CMLYRICS_EMBEDDINGS_H_
#define CMLYRICS_EMBEDDINGS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmlyrics/corpus.h"

namespace cmlyrics {

inline constexpr int kPadIndex = 0;
inline constexpr int kUnkIndex = 1;
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

// Word vectors with two reserved rows: PAD (always zero) and UNK.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // words[0] must be kPadToken and words[1] kUnkToken; vectors is row-major
  // words.size() x dim.
  EmbeddingTable(std::vector<std::string> words, size_t dim,
                 std::vector<double> vectors);

  size_t size() const { return words_.size(); }
  size_t dim() const { return dim_; }
  const std::vector<std::string>& words() const { return words_; }

  // Row of a word (lowercased first); UNK for unknown words, PAD for the PAD
  // sentinel.
  int IndexOf(std::string_view word) const;
  std::span<const double> Row(size_t index) const {
    return {vectors_.data() + index * dim_, dim_};
  }
  std::span<double> MutableRow(size_t index) {
    return {vectors_.data() + index * dim_, dim_};
  }
  std::span<const double> Lookup(std::string_view word) const {
    return Row(static_cast<size_t>(IndexOf(word)));
  }
  const std::vector<double>& vectors() const { return vectors_; }
  std::vector<double>& mutable_vectors() { return vectors_; }

  bool operator==(const EmbeddingTable& o) const {
    return words_ == o.words_ && dim_ == o.dim_ && vectors_ == o.vectors_;
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  size_t dim_ = 0;
  std::vector<double> vectors_;
};

struct EmbeddingConfig {
  size_t dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  int min_count = 2;
  uint64_t seed = 42;
  double step = 0.025;  // initial learning rate, decays linearly
};

// Skip-gram negative-sampling loss for one (center, context) pair and its
// negatives:  -log s(u_o . v_c) - sum_k log s(-u_k . v_c).
struct SgnsGrad {
  double loss = 0.0;
  std::vector<double> center;                 // dL/dv_c
  std::vector<double> context;                // dL/du_o
  std::vector<std::vector<double>> negatives;  // dL/du_k
};
SgnsGrad SgnsPairLossGrad(std::span<const double> center,
                          std::span<const double> context,
                          std::span<const std::span<const double>> negatives);

// Trains skip-gram embeddings with negative sampling on lowercased token
// sequences. Words seen fewer than min_count times map to UNK, which is
// trained like any other word. Negatives are drawn from unigram^0.75; rows
// start uniform in (-0.5/dim, 0.5/dim). epoch_loss, when given, receives the
// mean pair loss of each epoch. Throws Error(kData) if no word reaches
// min_count.
EmbeddingTable TrainEmbeddings(std::span<const std::vector<std::string>> docs,
                               const EmbeddingConfig& config,
                               std::vector<double>* epoch_loss = nullptr);
EmbeddingTable TrainEmbeddings(std::span<const Song> songs,
                               const EmbeddingConfig& config);

// Text format: "<|V|> <dim>" header, then "word v1 ... v_dim" per row in
// index order.
std::string SerializeEmbeddings(const EmbeddingTable& table);
EmbeddingTable ParseEmbeddings(std::string_view content);
void SaveEmbeddings(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable LoadEmbeddings(const std::filesystem::path& path);

double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace cmlyrics

#endif  // CMLYRICS_EMBEDDINGS_H_
