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

// Dense kernels with hand-written backward passes for the sequence models.
// Everything is double precision, row-major.

#ifndef CMLYRICS_NEURAL_KERNELS_H_
#define CMLYRICS_NEURAL_KERNELS_H_

#include <span>
#include <vector>

namespace cmlyrics {

struct Mat {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  std::span<double> Row(size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> Row(size_t r) const { return {data.data() + r * cols, cols}; }
};

enum class Activation { kRelu, kTanh };

const char* ActivationName(Activation a);

// Width-3 convolution over time with one zero frame of padding on each side,
// followed by relu:
//   out[t][f] = relu(bias[f] + sum_{k=-1..1} sum_j x[t+k][j] * w[k+1][j][f])
// filters holds 3 * x.cols * n_filters values in [k][j][f] order.
// Throws Error(kModel) on a size mismatch.
Mat Conv1dForward(const Mat& x, std::span<const double> filters,
                  std::span<const double> bias);

struct Conv1dGrads {
  Mat dx;
  std::vector<double> dfilters;
  std::vector<double> dbias;
};
Conv1dGrads Conv1dBackward(const Mat& x, std::span<const double> filters,
                           const Mat& out, const Mat& dout);

// LSTM with gates packed as [input, forget, output, candidate]:
//   a_t = W x_t + U h_{t-1} + b,  W: 4H x d,  U: 4H x H,  b: 4H
//   c_t = f * c_{t-1} + i * g,    h_t = o * tanh(c_t),  h_0 = c_0 = 0.
struct LstmCache {
  Mat gates;  // L x 4H, post-nonlinearity
  Mat c;      // L x H
  Mat h;      // L x H
};
LstmCache LstmForward(const Mat& x, std::span<const double> w,
                      std::span<const double> u, std::span<const double> b,
                      size_t hidden);

struct LstmGrads {
  Mat dx;
  std::vector<double> dw;
  std::vector<double> du;
  std::vector<double> db;
};
// Backpropagation through time for dL/dh_t given in dh (L x H).
LstmGrads LstmBackward(const Mat& x, std::span<const double> w,
                       std::span<const double> u, const LstmCache& cache,
                       const Mat& dh);

// Mean of the first valid_len rows. Throws Error(kModel) if valid_len is 0 or
// exceeds the row count.
std::vector<double> MeanPool(const Mat& h, size_t valid_len);
Mat MeanPoolBackward(size_t rows, size_t cols, size_t valid_len,
                     std::span<const double> de);

// y = act(W x + b) with W: out x in.
std::vector<double> DenseForward(std::span<const double> x,
                                 std::span<const double> w,
                                 std::span<const double> b, Activation act);
struct DenseGrads {
  std::vector<double> dx;
  std::vector<double> dw;
  std::vector<double> db;
};
DenseGrads DenseBackward(std::span<const double> x, std::span<const double> w,
                         std::span<const double> y, std::span<const double> dy,
                         Activation act);

// z = W x + b.
std::vector<double> Affine(std::span<const double> x, std::span<const double> w,
                           std::span<const double> b);

std::vector<double> Softmax(std::span<const double> logits);
// Returns -log p[target]; dlogits receives p - onehot(target).
double SoftmaxCrossEntropy(std::span<const double> logits, size_t target,
                           std::vector<double>* dlogits);

}  // namespace cmlyrics

#endif  // CMLYRICS_NEURAL_KERNELS_H_
