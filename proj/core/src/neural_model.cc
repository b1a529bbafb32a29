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

#include "cmlyrics/neural.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmlyrics/error.h"
#include "cmlyrics/rng.h"
#include "cmlyrics/textproc.h"
#include "json.hpp"

namespace cmlyrics {
namespace {

using json = nlohmann::json;

constexpr int kVersion = 1;
constexpr double kInitRange = 0.08;

bool UsesConv(Arch a) { return a == Arch::kCnn || a == Arch::kCmnn; }
bool UsesLstm(Arch a) { return a == Arch::kLstm || a == Arch::kCmnn; }

size_t PooledSize(const ArchConfig& c) {
  return UsesLstm(c.arch) ? c.lstm_hidden : c.n_filters;
}

NeuralParams AllocateParams(const ArchConfig& c, size_t vocab_size, size_t d) {
  NeuralParams p;
  p.embedding.assign(vocab_size * d, 0.0);
  size_t lstm_in = d;
  if (UsesConv(c.arch)) {
    p.conv_w.assign(3 * d * c.n_filters, 0.0);
    p.conv_b.assign(c.n_filters, 0.0);
    lstm_in = c.n_filters;
  }
  if (UsesLstm(c.arch)) {
    const size_t G = 4 * c.lstm_hidden;
    p.lstm_w.assign(G * lstm_in, 0.0);
    p.lstm_u.assign(G * c.lstm_hidden, 0.0);
    p.lstm_b.assign(G, 0.0);
  }
  const size_t z = PooledSize(c) + (c.use_cm ? 4 : 0);
  p.fusion_w.assign(c.fusion_hidden * z, 0.0);
  p.fusion_b.assign(c.fusion_hidden, 0.0);
  p.out_w.assign(2 * c.fusion_hidden, 0.0);
  p.out_b.assign(2, 0.0);
  return p;
}

void ValidateConfig(const ArchConfig& c) {
  if (c.fusion_hidden == 0) ThrowUsage("fusion hidden size must be positive");
  if (!(c.embed_rms >= 0.0) || !std::isfinite(c.embed_rms))
    ThrowUsage("embed_rms must be finite and >= 0");
  if (UsesConv(c.arch) && c.n_filters == 0) ThrowUsage("filter count must be positive");
  if (UsesLstm(c.arch) && c.lstm_hidden == 0) ThrowUsage("LSTM hidden size must be positive");
}

struct Trace {
  size_t n = 0;
  Mat x;
  Mat conv;
  LstmCache lstm;
  std::vector<double> z;  // pooled ++ cm
  std::vector<double> hidden;
  std::vector<double> logits;
};

Trace RunForward(const NeuralModel& m, const SequenceInput& seq,
                 const std::optional<CmVector>& cm) {
  const ArchConfig& c = m.config;
  if (cm.has_value() != c.use_cm)
    ThrowModel(c.use_cm ? "model expects code-mixed features; none given"
                        : "model was built without code-mixed features");
  if (seq.valid_len == 0 || seq.valid_len > seq.indices.size())
    ThrowModel("sequence valid_len must be in [1, L]");
  Trace tr;
  tr.n = seq.valid_len;
  const size_t d = m.embed_dim;
  const size_t V = m.vocab.size();
  tr.x = Mat(tr.n, d);
  for (size_t t = 0; t < tr.n; ++t) {
    const auto idx = static_cast<size_t>(seq.indices[t]);
    if (idx >= V) ThrowModel("token index beyond the embedding table");
    std::copy_n(m.params.embedding.begin() + static_cast<ptrdiff_t>(idx * d), d,
                tr.x.Row(t).begin());
  }
  const Mat* seq_out = &tr.x;
  if (UsesConv(c.arch)) {
    tr.conv = Conv1dForward(tr.x, m.params.conv_w, m.params.conv_b);
    seq_out = &tr.conv;
  }
  if (UsesLstm(c.arch)) {
    tr.lstm = LstmForward(*seq_out, m.params.lstm_w, m.params.lstm_u,
                          m.params.lstm_b, c.lstm_hidden);
    seq_out = &tr.lstm.h;
  }
  tr.z = MeanPool(*seq_out, tr.n);
  if (cm) tr.z.insert(tr.z.end(), cm->begin(), cm->end());
  tr.hidden = DenseForward(tr.z, m.params.fusion_w, m.params.fusion_b, c.activation);
  tr.logits = Affine(tr.hidden, m.params.out_w, m.params.out_b);
  return tr;
}

void AddInto(std::vector<double>& dst, const std::vector<double>& src) {
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

double GlobalNorm(const NeuralParams& g) {
  double sq = 0.0;
  g.ForEach([&](const char*, const std::vector<double>& t) {
    for (double v : t) sq += v * v;
  });
  return std::sqrt(sq);
}

}  // namespace

const char* ArchName(Arch arch) {
  switch (arch) {
    case Arch::kCnn:
      return "cnn";
    case Arch::kLstm:
      return "lstm";
    case Arch::kCmnn:
      return "cmnn";
  }
  return "cmnn";
}

std::optional<Arch> ParseArch(std::string_view name) {
  if (name == "cnn") return Arch::kCnn;
  if (name == "lstm") return Arch::kLstm;
  if (name == "cmnn") return Arch::kCmnn;
  return std::nullopt;
}

std::optional<Activation> ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  return std::nullopt;
}

SequenceInput PadSequence(std::span<const std::string> tokens, size_t max_len,
                          const EmbeddingTable& table) {
  if (max_len == 0) ThrowUsage("sequence length must be >= 1");
  if (tokens.empty()) ThrowData("cannot build a sequence from an empty song");
  SequenceInput seq;
  seq.indices.assign(max_len, kPadIndex);
  seq.valid_len = std::min(max_len, tokens.size());
  for (size_t i = 0; i < seq.valid_len; ++i) seq.indices[i] = table.IndexOf(tokens[i]);
  return seq;
}

void NeuralParams::ForEach(
    const std::function<void(const char*, std::vector<double>&)>& f) {
  f("embedding", embedding);
  f("conv_w", conv_w);
  f("conv_b", conv_b);
  f("lstm_w", lstm_w);
  f("lstm_u", lstm_u);
  f("lstm_b", lstm_b);
  f("fusion_w", fusion_w);
  f("fusion_b", fusion_b);
  f("out_w", out_w);
  f("out_b", out_b);
}

void NeuralParams::ForEach(
    const std::function<void(const char*, const std::vector<double>&)>& f) const {
  const_cast<NeuralParams*>(this)->ForEach(
      [&](const char* name, std::vector<double>& t) { f(name, t); });
}

EmbeddingTable NeuralModel::Embeddings() const {
  return EmbeddingTable(vocab, embed_dim, params.embedding);
}

NeuralModel InitNeuralModel(const ArchConfig& config, const EmbeddingTable& table,
                            size_t max_len, uint64_t seed) {
  ValidateConfig(config);
  if (max_len == 0) ThrowUsage("max_len must be >= 1");
  NeuralModel m;
  m.config = config;
  m.vocab = table.words();
  m.embed_dim = table.dim();
  m.max_len = max_len;
  m.params = AllocateParams(config, table.size(), table.dim());
  m.params.embedding = table.vectors();
  if (config.embed_rms > 0.0) {
    // Center the non-PAD rows, then scale them to the target component RMS.
    auto& e = m.params.embedding;
    const size_t d = table.dim();
    const size_t rows = table.size() - 1;
    std::vector<double> mean(d, 0.0);
    for (size_t r = 1; r <= rows; ++r)
      for (size_t j = 0; j < d; ++j) mean[j] += e[r * d + j] / static_cast<double>(rows);
    double ss = 0.0;
    for (size_t r = 1; r <= rows; ++r) {
      for (size_t j = 0; j < d; ++j) {
        e[r * d + j] -= mean[j];
        ss += e[r * d + j] * e[r * d + j];
      }
    }
    if (ss > 0.0) {
      const double f = config.embed_rms / std::sqrt(ss / static_cast<double>(rows * d));
      for (size_t i = d; i < e.size(); ++i) e[i] *= f;
    }
  }
  Rng rng(seed);
  m.params.ForEach([&](const char* name, std::vector<double>& t) {
    if (std::string_view(name) == "embedding") return;
    for (double& v : t) v = rng.Uniform(-kInitRange, kInitRange);
  });
  if (UsesLstm(config.arch)) {
    const size_t H = config.lstm_hidden;
    std::fill_n(m.params.lstm_b.begin() + static_cast<ptrdiff_t>(H), H, 1.0);
  }
  return m;
}

NeuralParams ZeroLike(const NeuralParams& params) {
  NeuralParams z = params;
  z.ForEach([](const char*, std::vector<double>& t) { std::fill(t.begin(), t.end(), 0.0); });
  return z;
}

std::array<double, 2> NeuralForward(const NeuralModel& model,
                                    const SequenceInput& seq,
                                    const std::optional<CmVector>& cm) {
  const Trace tr = RunForward(model, seq, cm);
  const std::vector<double> p = Softmax(tr.logits);
  return {p[0], p[1]};
}

double NeuralLossGrad(const NeuralModel& model, const SequenceInput& seq,
                      const std::optional<CmVector>& cm, Label label,
                      NeuralParams* grad) {
  const ArchConfig& c = model.config;
  const NeuralParams& p = model.params;
  const Trace tr = RunForward(model, seq, cm);
  std::vector<double> dlogits;
  const double loss = SoftmaxCrossEntropy(
      tr.logits, label == Label::kExciting ? 0 : 1, grad ? &dlogits : nullptr);
  if (!grad) return loss;

  // Output layer.
  const size_t F = c.fusion_hidden;
  std::vector<double> dhidden(F, 0.0);
  for (size_t k = 0; k < 2; ++k) {
    grad->out_b[k] += dlogits[k];
    for (size_t j = 0; j < F; ++j) {
      grad->out_w[k * F + j] += dlogits[k] * tr.hidden[j];
      dhidden[j] += dlogits[k] * p.out_w[k * F + j];
    }
  }
  // Fusion layer.
  DenseGrads fg = DenseBackward(tr.z, p.fusion_w, tr.hidden, dhidden, c.activation);
  AddInto(grad->fusion_w, fg.dw);
  AddInto(grad->fusion_b, fg.db);
  const size_t pooled = PooledSize(c);
  std::span<const double> dpool(fg.dx.data(), pooled);

  Mat dseq = MeanPoolBackward(tr.n, pooled, tr.n, dpool);
  if (UsesLstm(c.arch)) {
    const Mat& lstm_in = UsesConv(c.arch) ? tr.conv : tr.x;
    LstmGrads lg = LstmBackward(lstm_in, p.lstm_w, p.lstm_u, tr.lstm, dseq);
    AddInto(grad->lstm_w, lg.dw);
    AddInto(grad->lstm_u, lg.du);
    AddInto(grad->lstm_b, lg.db);
    dseq = std::move(lg.dx);
  }
  if (UsesConv(c.arch)) {
    Conv1dGrads cg = Conv1dBackward(tr.x, p.conv_w, tr.conv, dseq);
    AddInto(grad->conv_w, cg.dfilters);
    AddInto(grad->conv_b, cg.dbias);
    dseq = std::move(cg.dx);
  }
  const size_t d = model.embed_dim;
  for (size_t t = 0; t < tr.n; ++t) {
    const auto idx = static_cast<size_t>(seq.indices[t]);
    if (idx == kPadIndex) continue;
    for (size_t j = 0; j < d; ++j) grad->embedding[idx * d + j] += dseq(t, j);
  }
  return loss;
}

Label PredictFromProbabilities(const std::array<double, 2>& probs) {
  return probs[0] >= probs[1] ? Label::kExciting : Label::kNonExciting;
}

Label NeuralPredict(const NeuralModel& model, const SequenceInput& seq,
                    const std::optional<CmVector>& cm) {
  return PredictFromProbabilities(NeuralForward(model, seq, cm));
}

double NeuralAccuracy(const NeuralModel& model,
                      std::span<const NeuralExample> examples) {
  if (examples.empty()) ThrowData("accuracy over no examples");
  size_t correct = 0;
  for (const auto& ex : examples) {
    if (NeuralPredict(model, ex.seq, ex.cm) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

NeuralModel TrainNeural(const ArchConfig& arch, std::span<const NeuralExample> train,
                        std::span<const NeuralExample> dev,
                        const EmbeddingTable& embeddings, size_t max_len,
                        const TrainConfig& config, NeuralTrainReport* report) {
  if (train.empty()) ThrowData("neural training set is empty");
  if (dev.empty()) ThrowData("neural dev set is empty");
  if (config.epochs < 1) ThrowUsage("neural training needs at least one epoch");
  if (config.batch_size == 0) ThrowUsage("batch size must be >= 1");
  if (config.learning_rate <= 0.0) ThrowUsage("learning rate must be > 0");

  NeuralModel model = InitNeuralModel(arch, embeddings, max_len, config.seed);
  NeuralTrainReport local;
  NeuralTrainReport& rep = report ? *report : local;
  rep = NeuralTrainReport{};

  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed + 1);
  NeuralParams best = model.params;
  double best_acc = -1.0;
  NeuralParams grad = ZeroLike(model.params);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    double loss_sum = 0.0;
    for (size_t b = 0; b < order.size(); b += config.batch_size) {
      const size_t e = std::min(order.size(), b + config.batch_size);
      grad.ForEach([](const char*, std::vector<double>& t) {
        std::fill(t.begin(), t.end(), 0.0);
      });
      for (size_t i = b; i < e; ++i) {
        const auto& ex = train[order[i]];
        const double loss = NeuralLossGrad(model, ex.seq, ex.cm, ex.label, &grad);
        if (!std::isfinite(loss))
          ThrowNumeric("non-finite training loss in epoch " + std::to_string(epoch));
        loss_sum += loss;
      }
      double scale = 1.0 / static_cast<double>(e - b);
      const double norm = GlobalNorm(grad) * scale;
      if (!std::isfinite(norm))
        ThrowNumeric("non-finite gradient in epoch " + std::to_string(epoch));
      if (config.clip_norm > 0.0 && norm > config.clip_norm)
        scale *= config.clip_norm / norm;
      const double step = config.learning_rate * scale;
      std::vector<std::vector<double>*> targets;
      model.params.ForEach([&](const char*, std::vector<double>& t) { targets.push_back(&t); });
      size_t k = 0;
      grad.ForEach([&](const char*, std::vector<double>& g) {
        auto& t = *targets[k++];
        for (size_t i = 0; i < t.size(); ++i) t[i] -= step * g[i];
      });
      // PAD never receives gradient; keep it exactly zero regardless.
      std::fill_n(model.params.embedding.begin(), model.embed_dim, 0.0);
    }
    rep.epoch_loss.push_back(loss_sum / static_cast<double>(train.size()));
    const double acc = NeuralAccuracy(model, dev);
    rep.dev_accuracy.push_back(acc);
    if (acc > best_acc) {
      best_acc = acc;
      best = model.params;
      rep.best_epoch = epoch;
    }
  }
  model.params = std::move(best);
  return model;
}

std::string SerializeNeuralModel(const NeuralModel& model) {
  json doc;
  doc["format"] = "cmlyrics-neural";
  doc["version"] = kVersion;
  doc["arch"] = ArchName(model.config.arch);
  doc["use_cm"] = model.config.use_cm;
  doc["activation"] = ActivationName(model.config.activation);
  doc["n_filters"] = model.config.n_filters;
  doc["lstm_hidden"] = model.config.lstm_hidden;
  doc["fusion_hidden"] = model.config.fusion_hidden;
  doc["embed_rms"] = model.config.embed_rms;
  doc["embed_dim"] = model.embed_dim;
  doc["max_len"] = model.max_len;
  doc["vocab"] = model.vocab;
  json params = json::object();
  model.params.ForEach([&](const char* name, const std::vector<double>& t) {
    params[name] = t;
  });
  doc["params"] = params;
  return doc.dump() + "\n";
}

NeuralModel ParseNeuralModel(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed neural model: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "cmlyrics-neural")
    ThrowModel("not a neural model document");
  if (doc.value("version", 0) != kVersion) ThrowModel("unsupported neural model version");
  try {
    NeuralModel m;
    auto arch = ParseArch(doc.at("arch").get<std::string>());
    auto act = ParseActivation(doc.at("activation").get<std::string>());
    if (!arch || !act) ThrowModel("unknown architecture or activation");
    m.config.arch = *arch;
    m.config.activation = *act;
    m.config.use_cm = doc.at("use_cm").get<bool>();
    m.config.n_filters = doc.at("n_filters").get<size_t>();
    m.config.lstm_hidden = doc.at("lstm_hidden").get<size_t>();
    m.config.fusion_hidden = doc.at("fusion_hidden").get<size_t>();
    m.config.embed_rms = doc.at("embed_rms").get<double>();
    ValidateConfig(m.config);
    m.embed_dim = doc.at("embed_dim").get<size_t>();
    m.max_len = doc.at("max_len").get<size_t>();
    m.vocab = doc.at("vocab").get<std::vector<std::string>>();
    m.params = AllocateParams(m.config, m.vocab.size(), m.embed_dim);
    const auto& params = doc.at("params");
    m.params.ForEach([&](const char* name, std::vector<double>& t) {
      auto values = params.at(name).get<std::vector<double>>();
      if (values.size() != t.size())
        ThrowModel(std::string("tensor ") + name + " has the wrong size");
      for (double v : values) {
        if (!std::isfinite(v)) ThrowModel(std::string("non-finite value in ") + name);
      }
      t = std::move(values);
    });
    (void)m.Embeddings();  // validates the vocabulary and PAD row
    return m;
  } catch (const json::exception& e) {
    ThrowModel(std::string("malformed neural model: ") + e.what());
  }
}

}  // namespace cmlyrics
