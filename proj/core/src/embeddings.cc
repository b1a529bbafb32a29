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

#include "cmlyrics/embeddings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "cmlyrics/error.h"
#include "cmlyrics/io.h"
#include "cmlyrics/rng.h"
#include "cmlyrics/textproc.h"

namespace cmlyrics {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x)) computed without overflow.
double NegLogSigmoid(double x) {
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::vector<std::string> words, size_t dim,
                               std::vector<double> vectors)
    : words_(std::move(words)), dim_(dim), vectors_(std::move(vectors)) {
  if (words_.size() < 2 || words_[0] != kPadToken || words_[1] != kUnkToken)
    ThrowModel("embedding table must start with the PAD and UNK rows");
  if (dim_ == 0) ThrowModel("embedding dimension must be positive");
  if (vectors_.size() != words_.size() * dim_)
    ThrowModel("embedding matrix size does not match |V| x dim");
  for (size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second)
      ThrowModel("duplicate word in embedding table: " + words_[i]);
  }
  for (double v : vectors_) {
    if (!std::isfinite(v)) ThrowModel("non-finite embedding value");
  }
  for (double v : Row(kPadIndex)) {
    if (v != 0.0) ThrowModel("PAD embedding row must be zero");
  }
}

int EmbeddingTable::IndexOf(std::string_view word) const {
  if (word == kPadToken) return kPadIndex;
  auto it = index_.find(AsciiLower(word));
  return it == index_.end() ? kUnkIndex : it->second;
}

SgnsGrad SgnsPairLossGrad(std::span<const double> center,
                          std::span<const double> context,
                          std::span<const std::span<const double>> negatives) {
  const size_t d = center.size();
  SgnsGrad g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);
  // Positive pair: d/dx[-log s(x)] = s(x) - 1.
  const double xp = Dot(center, context);
  g.loss += NegLogSigmoid(xp);
  const double cp = Sigmoid(xp) - 1.0;
  for (size_t i = 0; i < d; ++i) {
    g.center[i] += cp * context[i];
    g.context[i] = cp * center[i];
  }
  // Negatives: d/dx[-log s(-x)] = s(x).
  for (const auto& neg : negatives) {
    const double xn = Dot(center, neg);
    g.loss += NegLogSigmoid(-xn);
    const double cn = Sigmoid(xn);
    std::vector<double> gn(d);
    for (size_t i = 0; i < d; ++i) {
      g.center[i] += cn * neg[i];
      gn[i] = cn * center[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

EmbeddingTable TrainEmbeddings(std::span<const std::vector<std::string>> docs,
                               const EmbeddingConfig& config,
                               std::vector<double>* epoch_loss) {
  if (config.dim == 0) ThrowUsage("embedding dimension must be positive");
  if (config.window < 1) ThrowUsage("embedding window must be >= 1");
  if (config.negatives < 0 || config.epochs < 0)
    ThrowUsage("embedding negatives and epochs must be >= 0");

  std::map<std::string, uint64_t> counts;
  for (const auto& doc : docs) {
    for (const auto& w : doc) ++counts[w];
  }
  std::vector<std::string> words = {kPadToken, kUnkToken};
  std::vector<double> freq = {0.0, 0.0};
  for (const auto& [w, c] : counts) {
    if (c >= static_cast<uint64_t>(std::max(config.min_count, 1)) &&
        w != kPadToken && w != kUnkToken) {
      words.push_back(w);
      freq.push_back(static_cast<double>(c));
    } else {
      freq[kUnkIndex] += static_cast<double>(c);
    }
  }
  if (words.size() == 2)
    ThrowData("no word reaches min_count=" + std::to_string(config.min_count) +
              "; embedding vocabulary is empty");

  const size_t d = config.dim;
  const size_t V = words.size();
  Rng rng(config.seed);
  std::vector<double> syn0(V * d, 0.0);
  for (size_t i = d; i < syn0.size(); ++i) syn0[i] = (rng.Uniform() - 0.5) / static_cast<double>(d);
  std::vector<double> syn1(V * d, 0.0);

  // Cumulative unigram^0.75 distribution over rows 1..V-1.
  std::vector<double> cdf(V, 0.0);
  double acc = 0.0;
  for (size_t i = 1; i < V; ++i) {
    acc += std::pow(freq[i], 0.75);
    cdf[i] = acc;
  }

  EmbeddingTable probe(words, d, std::vector<double>(V * d, 0.0));
  std::vector<std::vector<int>> ids;
  uint64_t total_tokens = 0;
  for (const auto& doc : docs) {
    std::vector<int> row;
    row.reserve(doc.size());
    for (const auto& w : doc) row.push_back(probe.IndexOf(w));
    total_tokens += row.size();
    ids.push_back(std::move(row));
  }

  const double total_work =
      static_cast<double>(total_tokens) * std::max(config.epochs, 1);
  uint64_t processed = 0;
  std::vector<int> negs;
  std::vector<std::span<const double>> neg_rows;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    uint64_t pairs = 0;
    for (const auto& doc : ids) {
      for (size_t i = 0; i < doc.size(); ++i, ++processed) {
        const double lr =
            config.step * std::max(1e-4, 1.0 - static_cast<double>(processed) / total_work);
        const auto c = static_cast<size_t>(doc[i]);
        const size_t lo = i >= static_cast<size_t>(config.window) ? i - config.window : 0;
        const size_t hi = std::min(doc.size(), i + config.window + 1);
        for (size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const auto o = static_cast<size_t>(doc[j]);
          negs.clear();
          for (int k = 0; k < config.negatives; ++k) {
            const double r = rng.Uniform() * acc;
            auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), r);
            size_t n = static_cast<size_t>(it - cdf.begin());
            if (n >= V) n = V - 1;
            if (n != o) negs.push_back(static_cast<int>(n));
          }
          neg_rows.clear();
          for (int n : negs) neg_rows.emplace_back(syn1.data() + static_cast<size_t>(n) * d, d);
          std::span<double> vc(syn0.data() + c * d, d);
          std::span<double> uo(syn1.data() + o * d, d);
          const SgnsGrad g = SgnsPairLossGrad(vc, uo, neg_rows);
          loss_sum += g.loss;
          ++pairs;
          for (size_t q = 0; q < d; ++q) uo[q] -= lr * g.context[q];
          for (size_t k = 0; k < negs.size(); ++k) {
            double* un = syn1.data() + static_cast<size_t>(negs[k]) * d;
            for (size_t q = 0; q < d; ++q) un[q] -= lr * g.negatives[k][q];
          }
          for (size_t q = 0; q < d; ++q) vc[q] -= lr * g.center[q];
        }
      }
    }
    if (epoch_loss) epoch_loss->push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
  }
  // PAD never occurs in the token stream, so row 0 is still zero.
  return EmbeddingTable(std::move(words), d, std::move(syn0));
}

EmbeddingTable TrainEmbeddings(std::span<const Song> songs,
                               const EmbeddingConfig& config) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(songs.size());
  for (const auto& s : songs) docs.push_back(LowercaseWords(s.text));
  return TrainEmbeddings(docs, config);
}

std::string SerializeEmbeddings(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  for (size_t i = 0; i < table.size(); ++i) {
    out += table.words()[i];
    for (double v : table.Row(i)) {
      out += ' ';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable ParseEmbeddings(std::string_view content) {
  size_t pos = 0;
  size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= content.size()) return false;
    size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    return true;
  };
  auto fail = [&](const std::string& why) -> EmbeddingTable {
    ThrowModel("embedding file line " + std::to_string(line_no) + ": " + why);
  };
  std::string_view line;
  if (!next_line(line)) return fail("missing header");
  size_t n = 0;
  size_t d = 0;
  {
    auto sp = line.find(' ');
    if (sp == std::string_view::npos) return fail("header must be \"<count> <dim>\"");
    auto r1 = std::from_chars(line.data(), line.data() + sp, n);
    auto r2 = std::from_chars(line.data() + sp + 1, line.data() + line.size(), d);
    if (r1.ec != std::errc() || r2.ec != std::errc() || d == 0)
      return fail("header must be \"<count> <dim>\"");
  }
  std::vector<std::string> words;
  std::vector<double> vectors;
  words.reserve(n);
  vectors.reserve(n * d);
  while (words.size() < n) {
    if (!next_line(line)) return fail("expected " + std::to_string(n) + " rows");
    auto sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0) return fail("malformed row");
    words.emplace_back(line.substr(0, sp));
    const char* p = line.data() + sp + 1;
    const char* end = line.data() + line.size();
    for (size_t k = 0; k < d; ++k) {
      double v;
      auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc()) return fail("expected " + std::to_string(d) + " values");
      vectors.push_back(v);
      p = r.ptr;
      if (p < end && *p == ' ') ++p;
    }
    if (p != end) return fail("trailing data");
  }
  return EmbeddingTable(std::move(words), d, std::move(vectors));
}

void SaveEmbeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  WriteFile(path, SerializeEmbeddings(table));
}

EmbeddingTable LoadEmbeddings(const std::filesystem::path& path) {
  return ParseEmbeddings(ReadFile(path));
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

}  // namespace cmlyrics
