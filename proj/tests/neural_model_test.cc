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

#include <gtest/gtest.h>

#include <cmath>

#include "cmlyrics/embeddings.h"
#include "cmlyrics/error.h"
#include "cmlyrics/rng.h"
#include "oracles.h"

namespace cmlyrics {
namespace {

using namespace cmlyrics::testing;

EmbeddingTable RandomTable(Rng& rng, size_t n_words, size_t dim) {
  std::vector<std::string> words = {kPadToken, kUnkToken};
  for (size_t i = 0; i < n_words; ++i) words.push_back("w" + std::to_string(i));
  std::vector<double> v(words.size() * dim, 0.0);
  for (size_t i = dim; i < v.size(); ++i) v[i] = rng.Uniform(-0.5, 0.5);
  return EmbeddingTable(std::move(words), dim, std::move(v));
}

SequenceInput RandomSeq(Rng& rng, size_t L, size_t n_rows) {
  SequenceInput s;
  s.valid_len = 1 + rng.Below(L);
  for (size_t t = 0; t < L; ++t)
    s.indices.push_back(t < s.valid_len ? static_cast<int>(1 + rng.Below(n_rows - 1)) : kPadIndex);
  return s;
}

ArchConfig TinyArch(Arch arch, bool use_cm, Activation act) {
  ArchConfig c;
  c.arch = arch;
  c.use_cm = use_cm;
  c.activation = act;
  c.n_filters = 3;
  c.lstm_hidden = 4;
  c.fusion_hidden = 3;
  return c;
}

void RandomizeParams(Rng& rng, NeuralModel& m) {
  m.params.ForEach([&](const char* name, std::vector<double>& t) {
    for (double& v : t) v = rng.Uniform(-0.5, 0.5);
    if (std::string(name) == "embedding")
      for (size_t j = 0; j < m.embed_dim; ++j) t[j] = 0.0;
  });
}

TEST(NeuralModel, FullGradientMatchesFiniteDifferences) {
  Rng rng(21);
  int instances = 0;
  for (Arch arch : {Arch::kCnn, Arch::kLstm, Arch::kCmnn}) {
    for (bool use_cm : {false, true}) {
      for (Activation act : {Activation::kTanh, Activation::kRelu}) {
        const EmbeddingTable table = RandomTable(rng, 6, 5);
        NeuralModel m = InitNeuralModel(TinyArch(arch, use_cm, act), table, 6, rng.NextU64());
        RandomizeParams(rng, m);
        const SequenceInput seq = RandomSeq(rng, 6, table.size());
        std::optional<CmVector> cm;
        if (use_cm) cm = CmVector{rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1),
                                  rng.Uniform(-1, 1)};
        const Label label = static_cast<Label>(rng.Below(2));
        NeuralParams grad = ZeroLike(m.params);
        NeuralLossGrad(m, seq, cm, label, &grad);
        std::vector<std::vector<double>*> tensors;
        std::vector<const std::vector<double>*> grads;
        std::vector<std::string> names;
        m.params.ForEach([&](const char* name, std::vector<double>& t) {
          tensors.push_back(&t);
          names.push_back(name);
        });
        std::as_const(grad).ForEach(
            [&](const char*, const std::vector<double>& g) { grads.push_back(&g); });
        auto loss = [&] { return NeuralLossGrad(m, seq, cm, label, nullptr); };
        for (size_t k = 0; k < tensors.size(); ++k) {
          ASSERT_EQ(tensors[k]->size(), grads[k]->size()) << names[k];
          for (size_t i = 0; i < tensors[k]->size(); ++i) {
            const double num = CentralDifference(*tensors[k], i, loss, 1e-5);
            EXPECT_LT(GradRelError((*grads[k])[i], num), 1e-3)
                << ArchName(arch) << " cm=" << use_cm << " " << names[k] << "[" << i << "]";
          }
        }
        ++instances;
      }
    }
  }
  EXPECT_GE(instances, 10);
}

TEST(NeuralModel, ForwardIsDistribution) {
  Rng rng(22);
  for (Arch arch : {Arch::kCnn, Arch::kLstm, Arch::kCmnn}) {
    const EmbeddingTable table = RandomTable(rng, 8, 4);
    NeuralModel m = InitNeuralModel(TinyArch(arch, false, Activation::kRelu), table, 7, 3);
    for (int i = 0; i < 10; ++i) {
      const auto p = NeuralForward(m, RandomSeq(rng, 7, table.size()), std::nullopt);
      EXPECT_GT(p[0], 0.0);
      EXPECT_GT(p[1], 0.0);
      EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
    }
    std::fill(m.params.out_w.begin(), m.params.out_w.end(), 0.0);
    std::fill(m.params.out_b.begin(), m.params.out_b.end(), 0.0);
    const auto p = NeuralForward(m, RandomSeq(rng, 7, table.size()), std::nullopt);
    EXPECT_EQ(p, (std::array<double, 2>{0.5, 0.5}));
    EXPECT_THROW(NeuralForward(m, RandomSeq(rng, 7, table.size()), CmVector{}), Error);
  }
}

TEST(NeuralModel, AppendingPadIsBitwiseInvariant) {
  Rng rng(23);
  for (Arch arch : {Arch::kCnn, Arch::kLstm, Arch::kCmnn}) {
    const EmbeddingTable table = RandomTable(rng, 8, 4);
    NeuralModel m = InitNeuralModel(TinyArch(arch, true, Activation::kTanh), table, 12, 4);
    RandomizeParams(rng, m);
    SequenceInput s = RandomSeq(rng, 5, table.size());
    const CmVector cm{0.1, -0.2, 0.3, 0.4};
    const auto before = NeuralForward(m, s, cm);
    s.indices.resize(12, kPadIndex);
    EXPECT_EQ(NeuralForward(m, s, cm), before);
  }
}

TEST(NeuralModel, InitInvariants) {
  Rng rng(24);
  const EmbeddingTable table = RandomTable(rng, 8, 4);
  ArchConfig c = TinyArch(Arch::kCmnn, false, Activation::kRelu);
  const NeuralModel m = InitNeuralModel(c, table, 5, 9);
  const size_t H = c.lstm_hidden;
  for (size_t i = 0; i < H; ++i) EXPECT_EQ(m.params.lstm_b[H + i], 1.0);
  for (size_t j = 0; j < 4; ++j) EXPECT_EQ(m.params.embedding[j], 0.0);
  for (double v : m.params.conv_w) EXPECT_LT(std::abs(v), 0.08);
  EXPECT_EQ(InitNeuralModel(c, table, 5, 9), m);
  // Centering and common scaling preserve differences between rows up to scale.
  double sq = 0.0;
  for (size_t i = 4; i < m.params.embedding.size(); ++i) sq += m.params.embedding[i] * m.params.embedding[i];
  EXPECT_NEAR(std::sqrt(sq / (m.params.embedding.size() - 4)), 1.0, 1e-9);
  c.embed_rms = 0.0;
  const NeuralModel raw = InitNeuralModel(c, table, 5, 9);
  EXPECT_EQ(raw.params.embedding, table.vectors());
  const auto lstm_only = InitNeuralModel(TinyArch(Arch::kLstm, false, Activation::kRelu), table, 5, 9);
  EXPECT_TRUE(lstm_only.params.conv_w.empty());
  const auto cnn_only = InitNeuralModel(TinyArch(Arch::kCnn, false, Activation::kRelu), table, 5, 9);
  EXPECT_TRUE(cnn_only.params.lstm_w.empty());
}

TEST(PadSequence, Examples) {
  Rng rng(25);
  const EmbeddingTable table = RandomTable(rng, 4, 2);
  const std::vector<std::string> ab = {"w0", "w1"};
  const auto s = PadSequence(ab, 4, table);
  EXPECT_EQ(s.indices, (std::vector<int>{2, 3, kPadIndex, kPadIndex}));
  EXPECT_EQ(s.valid_len, 2u);
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("w" + std::to_string(i % 4));
  const auto t = PadSequence(ten, 4, table);
  EXPECT_EQ(t.indices, (std::vector<int>{2, 3, 4, 5}));
  EXPECT_EQ(t.valid_len, 4u);
  const std::vector<std::string> unseen = {"zz", "yy"};
  EXPECT_EQ(PadSequence(unseen, 3, table).indices, (std::vector<int>{1, 1, 0}));
  EXPECT_THROW(PadSequence(std::vector<std::string>{}, 3, table), Error);
  EXPECT_THROW(PadSequence(ab, 0, table), Error);
}

TEST(NeuralPredict, TieRule) {
  EXPECT_EQ(PredictFromProbabilities({0.7, 0.3}), Label::kExciting);
  EXPECT_EQ(PredictFromProbabilities({0.3, 0.7}), Label::kNonExciting);
  EXPECT_EQ(PredictFromProbabilities({0.5, 0.5}), Label::kExciting);
}

struct MarkerTask {
  EmbeddingTable table;
  std::vector<NeuralExample> train, dev;
};

// Label is the presence of one marker token among random filler words.
MarkerTask MakeMarkerTask(size_t n_train, size_t n_dev, size_t dim) {
  Rng rng(5);
  std::vector<std::vector<std::string>> docs;
  std::vector<Label> labels;
  for (size_t i = 0; i < n_train + n_dev; ++i) {
    std::vector<std::string> d;
    const size_t L = 5 + rng.Below(10);
    for (size_t t = 0; t < L; ++t) d.push_back("w" + std::to_string(rng.Below(50)));
    const bool pos = rng.Below(2);
    if (pos) d[rng.Below(L)] = "marker";
    docs.push_back(d);
    labels.push_back(pos ? Label::kExciting : Label::kNonExciting);
  }
  EmbeddingConfig ec;
  ec.dim = dim;
  ec.min_count = 1;
  MarkerTask task;
  task.table = TrainEmbeddings(std::span(docs).first(n_train), ec);
  for (size_t i = 0; i < docs.size(); ++i)
    (i < n_train ? task.train : task.dev)
        .push_back({PadSequence(docs[i], 14, task.table), std::nullopt, labels[i]});
  return task;
}

TrainConfig MarkerTrainConfig() {
  TrainConfig tc;
  tc.learning_rate = 0.2;
  tc.batch_size = 8;
  return tc;
}

TEST(TrainNeural, LearnsMarkerTask) {
  const MarkerTask task = MakeMarkerTask(400, 100, 16);
  for (Arch arch : {Arch::kCnn, Arch::kLstm, Arch::kCmnn}) {
    ArchConfig ac;
    ac.arch = arch;
    ac.n_filters = ac.lstm_hidden = ac.fusion_hidden = 16;
    NeuralTrainReport rep;
    const NeuralModel m = TrainNeural(ac, task.train, task.dev, task.table, 14,
                                      MarkerTrainConfig(), &rep);
    EXPECT_EQ(rep.dev_accuracy.size(), 10u);
    EXPECT_GE(NeuralAccuracy(m, task.dev), 0.95) << ArchName(arch);
    EXPECT_DOUBLE_EQ(NeuralAccuracy(m, task.dev), rep.dev_accuracy[rep.best_epoch - 1]);
  }
}

TEST(TrainNeural, DeterministicAndSnapshotRules) {
  const MarkerTask task = MakeMarkerTask(60, 20, 8);
  ArchConfig ac = TinyArch(Arch::kCmnn, false, Activation::kRelu);
  TrainConfig tc = MarkerTrainConfig();
  tc.epochs = 3;
  NeuralTrainReport rep;
  const NeuralModel a = TrainNeural(ac, task.train, task.dev, task.table, 14, tc, &rep);
  EXPECT_EQ(TrainNeural(ac, task.train, task.dev, task.table, 14, tc), a);
  const double best = rep.dev_accuracy[rep.best_epoch - 1];
  for (int e = 0; e < rep.best_epoch - 1; ++e) EXPECT_LT(rep.dev_accuracy[e], best);
  for (double acc : rep.dev_accuracy) EXPECT_LE(acc, best);

  tc.epochs = 1;
  NeuralTrainReport one;
  const NeuralModel b = TrainNeural(ac, task.train, task.dev, task.table, 14, tc, &one);
  EXPECT_EQ(one.best_epoch, 1);
  EXPECT_NE(b.params, InitNeuralModel(ac, task.table, 14, tc.seed).params);
  EXPECT_DOUBLE_EQ(NeuralAccuracy(b, task.dev), one.dev_accuracy[0]);
  EXPECT_THROW(TrainNeural(ac, {}, task.dev, task.table, 14, tc), Error);
  EXPECT_THROW(TrainNeural(ac, task.train, {}, task.table, 14, tc), Error);
}

TEST(TrainNeural, ZeroCmPathTrains) {
  MarkerTask task = MakeMarkerTask(40, 10, 8);
  for (auto* set : {&task.train, &task.dev})
    for (auto& ex : *set) ex.cm = CmVector{0, 0, 0, 0};
  ArchConfig ac = TinyArch(Arch::kCnn, true, Activation::kRelu);
  TrainConfig tc = MarkerTrainConfig();
  tc.epochs = 2;
  const NeuralModel m = TrainNeural(ac, task.train, task.dev, task.table, 14, tc);
  for (const auto& ex : task.dev) {
    const auto p = NeuralForward(m, ex.seq, ex.cm);
    EXPECT_TRUE(std::isfinite(p[0]));
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
  }
}

TEST(NeuralIo, ExactRoundTrip) {
  const MarkerTask task = MakeMarkerTask(30, 10, 6);
  ArchConfig ac = TinyArch(Arch::kCmnn, true, Activation::kTanh);
  const NeuralModel m = InitNeuralModel(ac, task.table, 14, 77);
  const NeuralModel back = ParseNeuralModel(SerializeNeuralModel(m));
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.Embeddings(), m.Embeddings());
  EXPECT_THROW(ParseNeuralModel("{\"format\":\"cmlyrics-neural\",\"version\":99}"), Error);
  EXPECT_THROW(ParseNeuralModel("nope"), Error);
}

}  // namespace
}  // namespace cmlyrics
