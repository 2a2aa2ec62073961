/*
 * Copyright 2026 The Lancelot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lancelot/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lancelot/errors.hpp"

namespace lancelot {

void Dataset::validate() const {
  if (dim == 0 || classes < 2) throw ShapeError("dataset needs dim >= 1 and classes >= 2");
  if (features.size() != labels.size() * dim) {
    throw ShapeError("feature matrix does not match label count");
  }
  for (std::int32_t y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw DataError("label outside the class range");
    }
  }
}

std::size_t ModelSpec::parameter_count() const {
  if (kind == ModelKind::logistic) return classes * (input_dim + 1);
  return hidden * (input_dim + 1) + classes * (hidden + 1);
}

void ModelSpec::validate() const {
  if (input_dim == 0 || classes < 2) {
    throw ParameterError("model needs input_dim >= 1 and classes >= 2");
  }
  if (kind == ModelKind::mlp && hidden == 0) {
    throw ParameterError("mlp needs a hidden width");
  }
}

WeightVector init_weights(const ModelSpec& spec, Sampler& rng) {
  spec.validate();
  WeightVector w(spec.parameter_count());
  for (double& v : w) v = (rng.uniform_real() * 2.0 - 1.0) * 0.05;
  return w;
}

namespace {

void softmax_inplace(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

void logistic_logits(const ModelSpec& spec, const WeightVector& w,
                     const float* x, std::vector<double>& z) {
  const std::size_t d = spec.input_dim;
  z.assign(spec.classes, 0.0);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const double* row = w.data() + c * (d + 1);
    double acc = row[d];
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
    z[c] = acc;
  }
}

struct MlpLayout {
  std::size_t w1, b1, w2, b2;
};

MlpLayout mlp_layout(const ModelSpec& spec) {
  const std::size_t hd = spec.hidden * spec.input_dim;
  return {0, hd, hd + spec.hidden, hd + spec.hidden + spec.classes * spec.hidden};
}

void mlp_forward(const ModelSpec& spec, const WeightVector& w, const float* x,
                 std::vector<double>& hidden, std::vector<double>& z) {
  const MlpLayout at = mlp_layout(spec);
  const std::size_t d = spec.input_dim;
  hidden.assign(spec.hidden, 0.0);
  for (std::size_t h = 0; h < spec.hidden; ++h) {
    double acc = w[at.b1 + h];
    const double* row = w.data() + at.w1 + h * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
    hidden[h] = std::tanh(acc);
  }
  z.assign(spec.classes, 0.0);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double acc = w[at.b2 + c];
    const double* row = w.data() + at.w2 + c * spec.hidden;
    for (std::size_t h = 0; h < spec.hidden; ++h) acc += row[h] * hidden[h];
    z[c] = acc;
  }
}

void class_probabilities(const ModelSpec& spec, const WeightVector& w,
                         const float* x, std::vector<double>& scratch_hidden,
                         std::vector<double>& probs) {
  if (spec.kind == ModelKind::logistic) {
    logistic_logits(spec, w, x, probs);
  } else {
    mlp_forward(spec, w, x, scratch_hidden, probs);
  }
  softmax_inplace(probs);
}

}  // namespace

void batch_gradient(const ModelSpec& spec, const WeightVector& w,
                    const Dataset& data, const std::vector<std::size_t>& order,
                    std::size_t begin, std::size_t end, WeightVector& grad) {
  grad.assign(w.size(), 0.0);
  if (begin >= end) return;
  const std::size_t d = spec.input_dim;
  const double inv = 1.0 / static_cast<double>(end - begin);
  std::vector<double> probs, hidden, dhidden;
  for (std::size_t pos = begin; pos < end; ++pos) {
    const std::size_t i = order[pos];
    const float* x = data.row(i);
    const std::size_t y = static_cast<std::size_t>(data.labels[i]);
    class_probabilities(spec, w, x, hidden, probs);
    probs[y] -= 1.0;
    if (spec.kind == ModelKind::logistic) {
      for (std::size_t c = 0; c < spec.classes; ++c) {
        const double g = probs[c] * inv;
        double* row = grad.data() + c * (d + 1);
        for (std::size_t j = 0; j < d; ++j) row[j] += g * x[j];
        row[d] += g;
      }
    } else {
      const MlpLayout at = mlp_layout(spec);
      dhidden.assign(spec.hidden, 0.0);
      for (std::size_t c = 0; c < spec.classes; ++c) {
        const double g = probs[c] * inv;
        double* row = grad.data() + at.w2 + c * spec.hidden;
        const double* wrow = w.data() + at.w2 + c * spec.hidden;
        for (std::size_t h = 0; h < spec.hidden; ++h) {
          row[h] += g * hidden[h];
          dhidden[h] += g * wrow[h];
        }
        grad[at.b2 + c] += g;
      }
      for (std::size_t h = 0; h < spec.hidden; ++h) {
        const double g = dhidden[h] * (1.0 - hidden[h] * hidden[h]);
        double* row = grad.data() + at.w1 + h * d;
        for (std::size_t j = 0; j < d; ++j) row[j] += g * x[j];
        grad[at.b1 + h] += g;
      }
    }
  }
}

WeightVector sgd_train(const ModelSpec& spec, const WeightVector& start,
                       const Dataset& data, double learning_rate,
                       std::size_t batch_size, std::size_t epochs,
                       Sampler& rng) {
  spec.validate();
  data.validate();
  if (data.size() == 0) throw DataError("cannot train on an empty dataset");
  if (start.size() != spec.parameter_count()) {
    throw ShapeError("weight vector does not match the model layout");
  }
  if (learning_rate < 0.0 || batch_size == 0) {
    throw ParameterError("learning rate must be >= 0 and batch size >= 1");
  }

  WeightVector w = start;
  WeightVector grad;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_below(i)]);
    }
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      batch_gradient(spec, w, data, order, begin, end, grad);
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] -= learning_rate * grad[j];
      }
    }
  }
  return w;
}

std::int32_t predict_class(const ModelSpec& spec, const WeightVector& w,
                           const float* x) {
  std::vector<double> probs, hidden;
  if (spec.kind == ModelKind::logistic) {
    logistic_logits(spec, w, x, probs);
  } else {
    mlp_forward(spec, w, x, hidden, probs);
  }
  return static_cast<std::int32_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double accuracy(const ModelSpec& spec, const WeightVector& w,
                const Dataset& data) {
  if (data.size() == 0) throw DataError("accuracy of an empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict_class(spec, w, data.row(i)) == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

double mean_cross_entropy(const ModelSpec& spec, const WeightVector& w,
                          const Dataset& data) {
  if (data.size() == 0) throw DataError("loss of an empty dataset");
  std::vector<double> probs, hidden;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    class_probabilities(spec, w, data.row(i), hidden, probs);
    const double p = probs[static_cast<std::size_t>(data.labels[i])];
    total += -std::log(std::max(p, 1e-300));
  }
  return total / static_cast<double>(data.size());
}

}  // namespace lancelot
