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

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lancelot/model.hpp"
#include "lancelot/sampling.hpp"

namespace lancelot {

// Seeded Gaussian-mixture classification data. Class c is centred on
// separation * e_{c mod dim} with per-component noise, so any separation
// comfortably above the noise makes the task linearly separable. Rows are
// shuffled so contiguous splits stay class-balanced.
Dataset make_gaussian_mixture(std::size_t dim, std::size_t classes,
                              std::size_t samples, double separation,
                              double noise, Sampler& rng);

// Splits rows into client shards whose sizes follow (i+1)^(-skew),
// normalised; skew 0 gives equal shards. Every shard gets at least one row.
std::vector<Dataset> partition_quantity_skew(const Dataset& data,
                                             std::size_t clients, double skew,
                                             Sampler& rng);

std::pair<Dataset, Dataset> train_validation_split(const Dataset& data,
                                                   double validation_fraction,
                                                   Sampler& rng);

// Reads the classic big-endian IDX pair (0x803 images, 0x801 labels);
// pixels are scaled to [0, 1].
Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path);

}  // namespace lancelot
