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

#include "cmlyrics/neural_kernels.h"

#include <gtest/gtest.h>

#include <cmath>

#include "cmlyrics/error.h"
#include "cmlyrics/rng.h"
#include "oracles.h"

namespace cmlyrics {
namespace {

using namespace cmlyrics::testing;

constexpr double kH = 1e-5;
constexpr double kTol = 1e-3;

std::vector<double> RandomVec(Rng& rng, size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-scale, scale);
  return v;
}

Mat RandomMat(Rng& rng, size_t r, size_t c) {
  Mat m(r, c);
  m.data = RandomVec(rng, r * c);
  return m;
}

// Weighted sum of all entries; the weights act as the upstream gradient.
double Project(const std::vector<double>& v, const std::vector<double>& r) {
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += v[i] * r[i];
  return s;
}

Mat AsMat(size_t rows, size_t cols, const std::vector<double>& data) {
  Mat m(rows, cols);
  m.data = data;
  return m;
}

void ExpectGradMatches(const std::vector<double>& analytic, std::vector<double>& x,
                       const std::function<double()>& f, const char* what) {
  ASSERT_EQ(analytic.size(), x.size()) << what;
  for (size_t i = 0; i < x.size(); ++i)
    EXPECT_LT(GradRelError(analytic[i], CentralDifference(x, i, f, kH)), kTol)
        << what << " index " << i;
}

TEST(Conv1d, HandExample) {
  const Mat x = AsMat(4, 1, {1, 2, 3, 4});
  const std::vector<double> w = {1, 1, 1}, b = {0};
  EXPECT_EQ(Conv1dForward(x, w, b).data, (std::vector<double>{3, 6, 9, 7}));
  const std::vector<double> neg = {-1, -1, -1};
  EXPECT_EQ(Conv1dForward(x, neg, b).data, (std::vector<double>{0, 0, 0, 0}));
  EXPECT_THROW(Conv1dForward(x, std::vector<double>{1, 1}, b), Error);
}

TEST(Conv1d, GradientsMatchFiniteDifferences) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t L = 1 + rng.Below(5), d = 1 + rng.Below(3), F = 1 + rng.Below(3);
    std::vector<double> xv = RandomVec(rng, L * d), w = RandomVec(rng, 3 * d * F),
                        b = RandomVec(rng, F), r = RandomVec(rng, L * F);
    auto loss = [&] { return Project(Conv1dForward(AsMat(L, d, xv), w, b).data, r); };
    const Mat x = AsMat(L, d, xv);
    const Mat out = Conv1dForward(x, w, b);
    const auto g = Conv1dBackward(x, w, out, AsMat(L, F, r));
    ExpectGradMatches(g.dx.data, xv, loss, "conv dx");
    ExpectGradMatches(g.dfilters, w, loss, "conv dw");
    ExpectGradMatches(g.dbias, b, loss, "conv db");
  }
}

TEST(Lstm, ZeroParametersGiveZeroState) {
  Rng rng(2);
  const Mat x = RandomMat(rng, 4, 3);
  const std::vector<double> w(4 * 2 * 3, 0.0), u(4 * 2 * 2, 0.0), b(8, 0.0);
  const auto cache = LstmForward(x, w, u, b, 2);
  for (double v : cache.h.data) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, HiddenStateBounded) {
  Rng rng(3);
  const Mat x = RandomMat(rng, 20, 3);
  const auto w = RandomVec(rng, 16 * 3, 5), u = RandomVec(rng, 16 * 4, 5), b = RandomVec(rng, 16, 5);
  for (double v : LstmForward(x, w, u, b, 4).h.data) EXPECT_LT(std::abs(v), 1.0);
}

TEST(Lstm, GradientsMatchFiniteDifferences) {
  Rng rng(4);
  const size_t L = 5, d = 3, H = 4;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xv = RandomVec(rng, L * d), w = RandomVec(rng, 4 * H * d),
                        u = RandomVec(rng, 4 * H * H), b = RandomVec(rng, 4 * H),
                        r = RandomVec(rng, L * H);
    auto loss = [&] { return Project(LstmForward(AsMat(L, d, xv), w, u, b, H).h.data, r); };
    const Mat x = AsMat(L, d, xv);
    const auto cache = LstmForward(x, w, u, b, H);
    const auto g = LstmBackward(x, w, u, cache, AsMat(L, H, r));
    ExpectGradMatches(g.dx.data, xv, loss, "lstm dx");
    ExpectGradMatches(g.dw, w, loss, "lstm dw");
    ExpectGradMatches(g.du, u, loss, "lstm du");
    ExpectGradMatches(g.db, b, loss, "lstm db");
  }
}

TEST(MeanPool, ExamplesAndErrors) {
  const Mat h = AsMat(3, 2, {1, 2, 3, 4, 100, 100});
  EXPECT_EQ(MeanPool(h, 2), (std::vector<double>{2, 3}));
  EXPECT_EQ(MeanPool(h, 1), (std::vector<double>{1, 2}));
  EXPECT_THROW(MeanPool(h, 0), Error);
  EXPECT_THROW(MeanPool(h, 4), Error);
  const Mat g = MeanPoolBackward(3, 2, 2, std::vector<double>{2, 4});
  EXPECT_EQ(g.data, (std::vector<double>{1, 2, 1, 2, 0, 0}));
}

TEST(MeanPool, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t L = 1 + rng.Below(6), d = 1 + rng.Below(4), n = 1 + rng.Below(L);
    std::vector<double> hv = RandomVec(rng, L * d), r = RandomVec(rng, d);
    auto loss = [&] { return Project(MeanPool(AsMat(L, d, hv), n), r); };
    ExpectGradMatches(MeanPoolBackward(L, d, n, r).data, hv, loss, "pool");
  }
}

TEST(Dense, GradientsMatchFiniteDifferences) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Activation act = trial % 2 ? Activation::kTanh : Activation::kRelu;
    const size_t in = 1 + rng.Below(5), out = 1 + rng.Below(4);
    std::vector<double> x = RandomVec(rng, in), w = RandomVec(rng, in * out),
                        b = RandomVec(rng, out), r = RandomVec(rng, out);
    auto loss = [&] { return Project(DenseForward(x, w, b, act), r); };
    const auto y = DenseForward(x, w, b, act);
    const auto g = DenseBackward(x, w, y, r, act);
    ExpectGradMatches(g.dx, x, loss, "dense dx");
    ExpectGradMatches(g.dw, w, loss, "dense dw");
    ExpectGradMatches(g.db, b, loss, "dense db");
  }
}

TEST(Dense, Values) {
  const std::vector<double> x = {1, 2}, w = {1, -1, -2, 0.5}, b = {0.5, 0};
  EXPECT_EQ(Affine(x, w, b), (std::vector<double>{-0.5, -1}));
  EXPECT_EQ(DenseForward(x, w, b, Activation::kRelu), (std::vector<double>{0, 0}));
  EXPECT_DOUBLE_EQ(DenseForward(x, w, b, Activation::kTanh)[0], std::tanh(-0.5));
}

TEST(SoftmaxCrossEntropy, ValuesAndGradient) {
  const std::vector<double> zero = {0, 0};
  std::vector<double> d;
  EXPECT_NEAR(SoftmaxCrossEntropy(zero, 0, &d), std::log(2.0), 1e-15);
  EXPECT_EQ(d, (std::vector<double>{-0.5, 0.5}));
  const auto p = Softmax(std::vector<double>{1000, 0});
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(SoftmaxCrossEntropy(std::vector<double>{1000, -1000}, 1, &d)));

  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> z = RandomVec(rng, 2, 3);
    const size_t target = rng.Below(2);
    SoftmaxCrossEntropy(z, target, &d);
    auto loss = [&] { return SoftmaxCrossEntropy(z, target, nullptr); };
    ExpectGradMatches(d, z, loss, "softmax");
    const auto q = Softmax(z);
    EXPECT_NEAR(q[0] + q[1], 1.0, 1e-15);
  }
}

}  // namespace
}  // namespace cmlyrics
