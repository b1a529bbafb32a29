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

#include <algorithm>
#include <cmath>
#include <string>

#include "cmlyrics/error.h"

namespace cmlyrics {
namespace {

inline double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double Act(double z, Activation a) {
  return a == Activation::kRelu ? (z > 0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation output.
inline double ActGrad(double y, Activation a) {
  return a == Activation::kRelu ? (y > 0 ? 1.0 : 0.0) : 1.0 - y * y;
}

void Expect(bool cond, const char* what) {
  if (!cond) ThrowModel(std::string("dimension mismatch: ") + what);
}

}  // namespace

const char* ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Mat Conv1dForward(const Mat& x, std::span<const double> filters,
                  std::span<const double> bias) {
  const size_t L = x.rows;
  const size_t din = x.cols;
  const size_t nf = bias.size();
  Expect(filters.size() == 3 * din * nf, "conv1d filters");
  Mat out(L, nf);
  for (size_t t = 0; t < L; ++t) {
    auto row = out.Row(t);
    std::copy(bias.begin(), bias.end(), row.begin());
    for (size_t k = 0; k < 3; ++k) {
      if ((t == 0 && k == 0) || (t + 1 == L && k == 2)) continue;
      const size_t src = t + k - 1;
      for (size_t j = 0; j < din; ++j) {
        const double xv = x(src, j);
        if (xv == 0.0) continue;
        const double* f = filters.data() + (k * din + j) * nf;
        for (size_t q = 0; q < nf; ++q) row[q] += xv * f[q];
      }
    }
    for (double& v : row) v = v > 0 ? v : 0.0;
  }
  return out;
}

Conv1dGrads Conv1dBackward(const Mat& x, std::span<const double> filters,
                           const Mat& out, const Mat& dout) {
  const size_t L = x.rows;
  const size_t din = x.cols;
  const size_t nf = out.cols;
  Expect(filters.size() == 3 * din * nf, "conv1d filters");
  Expect(dout.rows == L && dout.cols == nf, "conv1d dout");
  Conv1dGrads g;
  g.dx = Mat(L, din);
  g.dfilters.assign(filters.size(), 0.0);
  g.dbias.assign(nf, 0.0);
  std::vector<double> dz(nf);
  for (size_t t = 0; t < L; ++t) {
    for (size_t q = 0; q < nf; ++q) dz[q] = out(t, q) > 0 ? dout(t, q) : 0.0;
    for (size_t q = 0; q < nf; ++q) g.dbias[q] += dz[q];
    for (size_t k = 0; k < 3; ++k) {
      if ((t == 0 && k == 0) || (t + 1 == L && k == 2)) continue;
      const size_t src = t + k - 1;
      for (size_t j = 0; j < din; ++j) {
        const double xv = x(src, j);
        const double* f = filters.data() + (k * din + j) * nf;
        double* df = g.dfilters.data() + (k * din + j) * nf;
        double acc = 0.0;
        for (size_t q = 0; q < nf; ++q) {
          df[q] += xv * dz[q];
          acc += f[q] * dz[q];
        }
        g.dx(src, j) += acc;
      }
    }
  }
  return g;
}

LstmCache LstmForward(const Mat& x, std::span<const double> w,
                      std::span<const double> u, std::span<const double> b,
                      size_t hidden) {
  const size_t L = x.rows;
  const size_t d = x.cols;
  const size_t H = hidden;
  const size_t G = 4 * H;
  Expect(w.size() == G * d, "lstm W");
  Expect(u.size() == G * H, "lstm U");
  Expect(b.size() == G, "lstm b");
  LstmCache cache{Mat(L, G), Mat(L, H), Mat(L, H)};
  std::vector<double> a(G);
  for (size_t t = 0; t < L; ++t) {
    std::copy(b.begin(), b.end(), a.begin());
    for (size_t r = 0; r < G; ++r) {
      const double* wr = w.data() + r * d;
      double s = 0.0;
      for (size_t j = 0; j < d; ++j) s += wr[j] * x(t, j);
      if (t > 0) {
        const double* ur = u.data() + r * H;
        for (size_t j = 0; j < H; ++j) s += ur[j] * cache.h(t - 1, j);
      }
      a[r] += s;
    }
    auto gates = cache.gates.Row(t);
    for (size_t j = 0; j < H; ++j) {
      const double ig = Sigmoid(a[j]);
      const double fg = Sigmoid(a[H + j]);
      const double og = Sigmoid(a[2 * H + j]);
      const double gg = std::tanh(a[3 * H + j]);
      gates[j] = ig;
      gates[H + j] = fg;
      gates[2 * H + j] = og;
      gates[3 * H + j] = gg;
      const double c_prev = t > 0 ? cache.c(t - 1, j) : 0.0;
      const double c = fg * c_prev + ig * gg;
      cache.c(t, j) = c;
      cache.h(t, j) = og * std::tanh(c);
    }
  }
  return cache;
}

LstmGrads LstmBackward(const Mat& x, std::span<const double> w,
                       std::span<const double> u, const LstmCache& cache,
                       const Mat& dh) {
  const size_t L = x.rows;
  const size_t d = x.cols;
  const size_t H = cache.h.cols;
  const size_t G = 4 * H;
  Expect(dh.rows == L && dh.cols == H, "lstm dh");
  LstmGrads g;
  g.dx = Mat(L, d);
  g.dw.assign(w.size(), 0.0);
  g.du.assign(u.size(), 0.0);
  g.db.assign(G, 0.0);
  std::vector<double> dh_next(H, 0.0);
  std::vector<double> dc_next(H, 0.0);
  std::vector<double> da(G);
  for (size_t t = L; t-- > 0;) {
    const auto gates = cache.gates.Row(t);
    for (size_t j = 0; j < H; ++j) {
      const double ig = gates[j];
      const double fg = gates[H + j];
      const double og = gates[2 * H + j];
      const double gg = gates[3 * H + j];
      const double tc = std::tanh(cache.c(t, j));
      const double dht = dh(t, j) + dh_next[j];
      const double dc = dht * og * (1.0 - tc * tc) + dc_next[j];
      const double c_prev = t > 0 ? cache.c(t - 1, j) : 0.0;
      da[j] = dc * gg * ig * (1.0 - ig);
      da[H + j] = dc * c_prev * fg * (1.0 - fg);
      da[2 * H + j] = dht * tc * og * (1.0 - og);
      da[3 * H + j] = dc * ig * (1.0 - gg * gg);
      dc_next[j] = dc * fg;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (size_t r = 0; r < G; ++r) {
      const double dar = da[r];
      g.db[r] += dar;
      if (dar == 0.0) continue;
      const double* wr = w.data() + r * d;
      double* dwr = g.dw.data() + r * d;
      for (size_t j = 0; j < d; ++j) {
        dwr[j] += dar * x(t, j);
        g.dx(t, j) += dar * wr[j];
      }
      if (t > 0) {
        const double* ur = u.data() + r * H;
        double* dur = g.du.data() + r * H;
        for (size_t j = 0; j < H; ++j) {
          dur[j] += dar * cache.h(t - 1, j);
          dh_next[j] += dar * ur[j];
        }
      }
    }
  }
  return g;
}

std::vector<double> MeanPool(const Mat& h, size_t valid_len) {
  if (valid_len == 0) ThrowModel("mean pool over zero positions");
  if (valid_len > h.rows) ThrowModel("mean pool valid_len exceeds sequence length");
  std::vector<double> e(h.cols, 0.0);
  for (size_t t = 0; t < valid_len; ++t) {
    for (size_t j = 0; j < h.cols; ++j) e[j] += h(t, j);
  }
  const double inv = 1.0 / static_cast<double>(valid_len);
  for (double& v : e) v *= inv;
  return e;
}

Mat MeanPoolBackward(size_t rows, size_t cols, size_t valid_len,
                     std::span<const double> de) {
  Expect(de.size() == cols, "mean pool gradient");
  Mat dh(rows, cols);
  const double inv = 1.0 / static_cast<double>(valid_len);
  for (size_t t = 0; t < valid_len; ++t) {
    for (size_t j = 0; j < cols; ++j) dh(t, j) = de[j] * inv;
  }
  return dh;
}

std::vector<double> Affine(std::span<const double> x, std::span<const double> w,
                           std::span<const double> b) {
  const size_t out = b.size();
  const size_t in = x.size();
  Expect(w.size() == out * in, "affine weights");
  std::vector<double> z(b.begin(), b.end());
  for (size_t r = 0; r < out; ++r) {
    const double* wr = w.data() + r * in;
    double s = 0.0;
    for (size_t j = 0; j < in; ++j) s += wr[j] * x[j];
    z[r] += s;
  }
  return z;
}

std::vector<double> DenseForward(std::span<const double> x,
                                 std::span<const double> w,
                                 std::span<const double> b, Activation act) {
  std::vector<double> y = Affine(x, w, b);
  for (double& v : y) v = Act(v, act);
  return y;
}

DenseGrads DenseBackward(std::span<const double> x, std::span<const double> w,
                         std::span<const double> y, std::span<const double> dy,
                         Activation act) {
  const size_t out = y.size();
  const size_t in = x.size();
  Expect(w.size() == out * in && dy.size() == out, "dense backward");
  DenseGrads g;
  g.dx.assign(in, 0.0);
  g.dw.assign(w.size(), 0.0);
  g.db.assign(out, 0.0);
  for (size_t r = 0; r < out; ++r) {
    const double dz = dy[r] * ActGrad(y[r], act);
    g.db[r] = dz;
    if (dz == 0.0) continue;
    const double* wr = w.data() + r * in;
    double* dwr = g.dw.data() + r * in;
    for (size_t j = 0; j < in; ++j) {
      dwr[j] = dz * x[j];
      g.dx[j] += dz * wr[j];
    }
  }
  return g;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    s += p[i];
  }
  for (double& v : p) v /= s;
  return p;
}

double SoftmaxCrossEntropy(std::span<const double> logits, size_t target,
                           std::vector<double>* dlogits) {
  Expect(target < logits.size(), "softmax target");
  const double m = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double z : logits) s += std::exp(z - m);
  const double log_z = m + std::log(s);
  if (dlogits) {
    dlogits->resize(logits.size());
    for (size_t i = 0; i < logits.size(); ++i)
      (*dlogits)[i] = std::exp(logits[i] - log_z) - (i == target ? 1.0 : 0.0);
  }
  return log_z - logits[target];
}

}  // namespace cmlyrics
