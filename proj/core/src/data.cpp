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

#include "lancelot/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "lancelot/errors.hpp"

namespace lancelot {

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows,
                  std::size_t begin, std::size_t end) {
  Dataset out;
  out.dim = data.dim;
  out.classes = data.classes;
  out.features.reserve((end - begin) * data.dim);
  out.labels.reserve(end - begin);
  for (std::size_t pos = begin; pos < end; ++pos) {
    const float* src = data.row(rows[pos]);
    out.features.insert(out.features.end(), src, src + data.dim);
    out.labels.push_back(data.labels[rows[pos]]);
  }
  return out;
}

std::vector<std::size_t> shuffled_rows(std::size_t n, Sampler& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(rows[i - 1], rows[rng.uniform_below(i)]);
  }
  return rows;
}

}  // namespace

Dataset make_gaussian_mixture(std::size_t dim, std::size_t classes,
                              std::size_t samples, double separation,
                              double noise, Sampler& rng) {
  if (dim == 0 || classes < 2 || samples < classes) {
    throw ParameterError("mixture needs dim >= 1, classes >= 2, samples >= classes");
  }
  if (noise < 0.0 || separation < 0.0) {
    throw ParameterError("separation and noise must be non-negative");
  }

  Dataset data;
  data.dim = dim;
  data.classes = classes;
  data.features.resize(samples * dim);
  data.labels.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t c = i % classes;
    data.labels[i] = static_cast<std::int32_t>(c);
    float* row = data.features.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      double v = noise * rng.normal();
      if (j == c % dim) v += separation;
      row[j] = static_cast<float>(v);
    }
  }

  const std::vector<std::size_t> rows = shuffled_rows(samples, rng);
  return take_rows(data, rows, 0, samples);
}

std::vector<Dataset> partition_quantity_skew(const Dataset& data,
                                             std::size_t clients, double skew,
                                             Sampler& rng) {
  data.validate();
  if (clients == 0) throw ParameterError("need at least one client");
  if (skew < 0.0) throw ParameterError("skew must be non-negative");
  if (data.size() < clients) {
    throw DataError("fewer rows than clients");
  }

  std::vector<double> weight(clients);
  double total = 0.0;
  for (std::size_t i = 0; i < clients; ++i) {
    weight[i] = std::pow(static_cast<double>(i + 1), -skew);
    total += weight[i];
  }

  // Largest shard absorbs the rounding remainder; every shard keeps >= 1 row.
  std::vector<std::size_t> sizes(clients);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < clients; ++i) {
    sizes[i] = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::floor(weight[i] / total * static_cast<double>(data.size()))));
    assigned += sizes[i];
  }
  while (assigned > data.size()) {
    const std::size_t i =
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin();
    if (sizes[i] <= 1) throw DataError("fewer rows than clients");
    --sizes[i];
    --assigned;
  }
  sizes[0] += data.size() - assigned;

  const std::vector<std::size_t> rows = shuffled_rows(data.size(), rng);
  std::vector<Dataset> shards;
  shards.reserve(clients);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < clients; ++i) {
    shards.push_back(take_rows(data, rows, begin, begin + sizes[i]));
    begin += sizes[i];
  }
  return shards;
}

std::pair<Dataset, Dataset> train_validation_split(const Dataset& data,
                                                   double validation_fraction,
                                                   Sampler& rng) {
  data.validate();
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
    throw ParameterError("validation fraction must lie in (0, 1)");
  }
  std::size_t val = static_cast<std::size_t>(
      std::llround(validation_fraction * static_cast<double>(data.size())));
  val = std::min(std::max<std::size_t>(val, 1), data.size() - 1);
  const std::vector<std::size_t> rows = shuffled_rows(data.size(), rng);
  return {take_rows(data, rows, val, data.size()),
          take_rows(data, rows, 0, val)};
}

namespace {

std::uint32_t read_be32(std::ifstream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError(std::string("truncated idx header: ") + what);
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw DataError("cannot open image file: " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw DataError("cannot open label file: " + labels_path);

  if (read_be32(img, "image magic") != 0x00000803u) {
    throw DataError("image file magic is not 0x803");
  }
  const std::uint32_t count = read_be32(img, "image count");
  const std::uint32_t rows = read_be32(img, "rows");
  const std::uint32_t cols = read_be32(img, "cols");

  if (read_be32(lab, "label magic") != 0x00000801u) {
    throw DataError("label file magic is not 0x801");
  }
  if (read_be32(lab, "label count") != count) {
    throw DataError("image and label counts disagree");
  }
  if (count == 0 || rows == 0 || cols == 0) {
    throw DataError("empty idx file");
  }

  Dataset data;
  data.dim = static_cast<std::size_t>(rows) * cols;
  data.features.resize(static_cast<std::size_t>(count) * data.dim);
  data.labels.resize(count);

  std::vector<unsigned char> pixel(data.dim);
  std::int32_t top = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!img.read(reinterpret_cast<char*>(pixel.data()),
                  static_cast<std::streamsize>(pixel.size()))) {
      throw DataError("truncated image payload");
    }
    float* row = data.features.data() + static_cast<std::size_t>(i) * data.dim;
    for (std::size_t j = 0; j < data.dim; ++j) {
      row[j] = static_cast<float>(pixel[j]) / 255.0f;
    }
    char y = 0;
    if (!lab.read(&y, 1)) throw DataError("truncated label payload");
    data.labels[i] = static_cast<std::int32_t>(static_cast<unsigned char>(y));
    top = std::max(top, data.labels[i]);
  }
  data.classes = static_cast<std::size_t>(top) + 1;
  if (data.classes < 2) data.classes = 2;
  data.validate();
  return data;
}

}  // namespace lancelot
