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

// Small classification models trained with plain mini-batch SGD. The
// federated pipeline treats a model as a flat weight vector so that the
// same bytes can be packed into ciphertext slots without reshaping.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lancelot/sampling.hpp"

namespace lancelot {

using WeightVector = std::vector<double>;

struct Dataset {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<float> features;  // row-major, size() * dim entries
  std::vector<std::int32_t> labels;

  std::size_t size() const { return labels.size(); }
  const float* row(std::size_t i) const { return features.data() + i * dim; }
  void validate() const;
};

enum class ModelKind { logistic, mlp };

// Flat layouts:
//   logistic: per class c, dim weights then one bias.
//   mlp:      W1 (hidden x dim), b1, W2 (classes x hidden), b2, tanh hidden.
struct ModelSpec {
  ModelKind kind = ModelKind::logistic;
  std::size_t input_dim = 0;
  std::size_t classes = 2;
  std::size_t hidden = 0;  // mlp only

  std::size_t parameter_count() const;
  void validate() const;
};

WeightVector init_weights(const ModelSpec& spec, Sampler& rng);

// Mean cross-entropy gradient over [begin, end) of `order`; used by the
// trainer and exposed for analytic-gradient checks.
void batch_gradient(const ModelSpec& spec, const WeightVector& w,
                    const Dataset& data, const std::vector<std::size_t>& order,
                    std::size_t begin, std::size_t end, WeightVector& grad);

// `epochs` full passes of shuffled mini-batch SGD. Deterministic under the
// sampler state; the caller seeds per (round, client).
WeightVector sgd_train(const ModelSpec& spec, const WeightVector& start,
                       const Dataset& data, double learning_rate,
                       std::size_t batch_size, std::size_t epochs,
                       Sampler& rng);

std::int32_t predict_class(const ModelSpec& spec, const WeightVector& w,
                           const float* x);
double accuracy(const ModelSpec& spec, const WeightVector& w,
                const Dataset& data);
double mean_cross_entropy(const ModelSpec& spec, const WeightVector& w,
                          const Dataset& data);

}  // namespace lancelot
