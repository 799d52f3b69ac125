// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Softmax regression and the multilayer perceptron: forward passes,
// vector-Jacobian products and gradient-descent training.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "training.hpp"

namespace shs::detail {

namespace {

constexpr int kClasses = static_cast<int>(kNumStates);

double activate(Activation a, double v) {
  return a == Activation::kRelu ? (v > 0.0 ? v : 0.0) : std::tanh(v);
}

// Derivative expressed through the activation output.
double activate_grad(Activation a, double pre, double post) {
  if (a == Activation::kRelu) return pre > 0.0 ? 1.0 : 0.0;
  return 1.0 - post * post;
}

void forward_layer(const DenseLayer& layer, std::span<const double> in, double* out) {
  for (int o = 0; o < layer.out; ++o) {
    const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
    double acc = layer.bias[o];
    for (int i = 0; i < layer.in; ++i) acc += w[i] * in[i];
    out[o] = acc;
  }
}

// Cross-entropy of softmax(logits) at `label`, and p - onehot written to `delta`.
double softmax_xent(const double* logits, int label, double* delta) {
  double mx = logits[0];
  for (int k = 1; k < kClasses; ++k) mx = std::max(mx, logits[k]);
  double sum = 0.0;
  for (int k = 0; k < kClasses; ++k) {
    delta[k] = std::exp(logits[k] - mx);
    sum += delta[k];
  }
  for (int k = 0; k < kClasses; ++k) delta[k] /= sum;
  const double loss = -std::log(std::max(delta[label], 1e-300));
  delta[label] -= 1.0;
  return loss;
}

// Per-sample activations for one forward pass.
struct Trace {
  std::vector<std::vector<double>> pre;   // per layer pre-activation
  std::vector<std::vector<double>> post;  // per layer output (input to next)
};

void forward_trace(const MlpModel& m, std::span<const double> z, Trace& t) {
  const std::size_t L = m.layers.size();
  t.pre.resize(L);
  t.post.resize(L);
  std::span<const double> in = z;
  for (std::size_t l = 0; l < L; ++l) {
    const DenseLayer& layer = m.layers[l];
    t.pre[l].resize(layer.out);
    t.post[l].resize(layer.out);
    forward_layer(layer, in, t.pre[l].data());
    const bool last = l + 1 == L;
    for (int o = 0; o < layer.out; ++o)
      t.post[l][o] = last ? t.pre[l][o] : activate(m.activation, t.pre[l][o]);
    in = t.post[l];
  }
}

// Backpropagates `delta` (d loss / d logits) to the input; accumulates
// parameter gradients when `grads` is non-null.
std::vector<double> backward(const MlpModel& m, std::span<const double> z, const Trace& t,
                             std::vector<double> delta, std::vector<DenseLayer>* grads) {
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const DenseLayer& layer = m.layers[l];
    std::span<const double> in = l == 0 ? z : std::span<const double>(t.post[l - 1]);
    if (grads) {
      DenseLayer& g = (*grads)[l];
      for (int o = 0; o < layer.out; ++o) {
        g.bias[o] += delta[o];
        double* gw = g.weights.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) gw[i] += delta[o] * in[i];
      }
    }
    std::vector<double> prev(layer.in, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) prev[i] += w[i] * delta[o];
    }
    if (l > 0) {
      for (int i = 0; i < layer.in; ++i)
        prev[i] *= activate_grad(m.activation, t.pre[l - 1][i], t.post[l - 1][i]);
    }
    delta = std::move(prev);
  }
  return delta;
}

}  // namespace

ClassScores linear_logits(const LinearModel& m, std::span<const double> z) {
  ClassScores out;
  for (int k = 0; k < kClasses; ++k) {
    const double* w = m.weights.data() + static_cast<std::size_t>(k) * kNumFeatures;
    double acc = m.bias[k];
    for (std::size_t f = 0; f < kNumFeatures; ++f) acc += w[f] * z[f];
    out[k] = acc;
  }
  return out;
}

LinearModel fit_logistic(const Matrix& data, const LogisticHyper& hyper) {
  LinearModel m;
  m.weights.assign(kNumStates * kNumFeatures, 0.0);
  m.bias.assign(kNumStates, 0.0);
  const std::size_t n = data.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> gw(m.weights.size());
  std::vector<double> gb(kNumStates);
  std::array<double, kNumStates> delta;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = data.row(i);
      const ClassScores logits = linear_logits(m, z);
      loss += softmax_xent(logits.data(), data.labels[i], delta.data());
      for (int k = 0; k < kClasses; ++k) {
        gb[k] += delta[k];
        double* g = gw.data() + static_cast<std::size_t>(k) * kNumFeatures;
        for (std::size_t f = 0; f < kNumFeatures; ++f) g[f] += delta[k] * z[f];
      }
    }
    if (!std::isfinite(loss))
      throw Error(ErrorCode::kTraining,
                  "logistic regression diverged (non-finite loss) at epoch " +
                      std::to_string(epoch));
    for (std::size_t j = 0; j < m.weights.size(); ++j)
      m.weights[j] -= hyper.learning_rate * (gw[j] * inv_n + hyper.l2 * m.weights[j]);
    for (int k = 0; k < kClasses; ++k) m.bias[k] -= hyper.learning_rate * gb[k] * inv_n;
  }
  return m;
}

ClassScores mlp_logits(const MlpModel& m, std::span<const double> z) {
  Trace t;
  forward_trace(m, z, t);
  ClassScores out;
  std::copy_n(t.post.back().begin(), kNumStates, out.begin());
  return out;
}

std::vector<double> mlp_vjp(const MlpModel& m, std::span<const double> z,
                            const ClassScores& cotangent) {
  Trace t;
  forward_trace(m, z, t);
  return backward(m, z, t, std::vector<double>(cotangent.begin(), cotangent.end()), nullptr);
}

MlpModel fit_mlp(const Matrix& data, const NeuralNetHyper& hyper, Rng& rng) {
  MlpModel m;
  m.activation = hyper.activation;
  std::vector<int> widths = {static_cast<int>(kNumFeatures)};
  widths.insert(widths.end(), hyper.hidden.begin(), hyper.hidden.end());
  widths.push_back(kClasses);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
    for (auto& w : layer.weights) w = uniform(rng, -limit, limit);
    layer.bias.assign(layer.out, 0.0);
    m.layers.push_back(std::move(layer));
  }

  std::vector<DenseLayer> grads = m.layers;
  const std::size_t n = data.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Trace t;
  std::vector<double> delta(kClasses);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss = 0.0;
    for (std::size_t start = 0; start < n; start += hyper.batch_size) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(hyper.batch_size));
      for (auto& g : grads) {
        std::fill(g.weights.begin(), g.weights.end(), 0.0);
        std::fill(g.bias.begin(), g.bias.end(), 0.0);
      }
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        const auto z = data.row(i);
        forward_trace(m, z, t);
        loss += softmax_xent(t.post.back().data(), data.labels[i], delta.data());
        backward(m, z, t, delta, &grads);
      }
      const double scale = hyper.learning_rate / static_cast<double>(end - start);
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        for (std::size_t j = 0; j < m.layers[l].weights.size(); ++j)
          m.layers[l].weights[j] -= scale * grads[l].weights[j];
        for (std::size_t j = 0; j < m.layers[l].bias.size(); ++j)
          m.layers[l].bias[j] -= scale * grads[l].bias[j];
      }
    }
    if (!std::isfinite(loss))
      throw Error(ErrorCode::kTraining,
                  "neural net training diverged (non-finite loss) at epoch " +
                      std::to_string(epoch));
  }
  return m;
}

}  // namespace shs::detail
