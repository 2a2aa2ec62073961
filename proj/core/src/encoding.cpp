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

#include "lancelot/encoding.hpp"

#include <bit>
#include <numbers>

namespace lancelot {

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

Embedding::Embedding(std::size_t degree) : degree_(degree) {
  if (degree < 8 || (degree & (degree - 1)) != 0) {
    throw ParameterError("embedding degree must be a power of two >= 8");
  }
  const std::size_t h = degree / 2;
  log_slots_ = std::countr_zero(h);

  twist_.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    const double angle = std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(degree);
    twist_[i] = std::polar(1.0, angle);
  }
  roots_.resize(h / 2);
  for (std::size_t k = 0; k < h / 2; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(h);
    roots_[k] = std::polar(1.0, angle);
  }
  // 5^j mod 2N enumerates one representative per conjugate pair; the
  // matching classical FFT bucket is (5^j - 1)/4.
  slot_index_.resize(h);
  const std::size_t two_n = 2 * degree;
  std::size_t g = 1;
  for (std::size_t j = 0; j < h; ++j) {
    slot_index_[j] = static_cast<std::uint32_t>((g - 1) / 4);
    g = (g * 5) % two_n;
  }
  bitrev_.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    bitrev_[i] = static_cast<std::uint32_t>(bit_reverse(i, log_slots_));
  }
}

// Iterative radix-2 transform with positive-exponent convention:
// forward computes X_k = sum_j x_j e^{+2 pi i jk/h}; inverse undoes it.
void Embedding::fft(std::vector<std::complex<double>>& a, bool inverse) const {
  const std::size_t h = a.size();
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  for (std::size_t len = 2; len <= h; len <<= 1) {
    const std::size_t stride = h / len;
    for (std::size_t start = 0; start < h; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> w = roots_[k * stride];
        if (inverse) w = std::conj(w);
        const auto u = a[start + k];
        const auto v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(h);
    for (auto& x : a) x *= s;
  }
}

std::vector<double> Embedding::slots_to_coeffs(
    const std::vector<double>& values) const {
  const std::size_t h = degree_ / 2;
  if (values.size() > h) {
    throw CapacityError("more slot values than available slots");
  }
  std::vector<std::complex<double>> buckets(h, 0.0);
  for (std::size_t j = 0; j < values.size(); ++j) {
    buckets[slot_index_[j]] = values[j];
  }
  fft(buckets, true);
  std::vector<double> coeffs(degree_);
  for (std::size_t i = 0; i < h; ++i) {
    const std::complex<double> d = buckets[i] * std::conj(twist_[i]);
    coeffs[i] = d.real();
    coeffs[i + h] = d.imag();
  }
  return coeffs;
}

std::vector<double> Embedding::coeffs_to_slots(
    const std::vector<double>& coeffs) const {
  const std::size_t h = degree_ / 2;
  if (coeffs.size() != degree_) {
    throw ShapeError("coefficient vector must have length N");
  }
  std::vector<std::complex<double>> buckets(h);
  for (std::size_t i = 0; i < h; ++i) {
    buckets[i] = std::complex<double>(coeffs[i], coeffs[i + h]) * twist_[i];
  }
  fft(buckets, false);
  std::vector<double> slots(h);
  for (std::size_t j = 0; j < h; ++j) {
    slots[j] = buckets[slot_index_[j]].real();
  }
  return slots;
}

}  // namespace lancelot
