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

#include "lancelot/sampling.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace lancelot {

u64 derive_seed(u64 root, u64 tag) {
  // splitmix64 finalizer over the combined state.
  u64 z = root + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

u64 Sampler::uniform_below(u64 bound) {
  if (bound == 0) throw ParameterError("uniform bound must be positive");
  if ((bound & (bound - 1)) == 0) return raw() & (bound - 1);
  const u64 limit = ~u64{0} - (~u64{0} % bound) - 1;
  u64 x = raw();
  while (x > limit) x = raw();
  return x % bound;
}

double Sampler::uniform_real() {
  return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double Sampler::normal() {
  double u1 = uniform_real();
  while (u1 <= 0.0) u1 = uniform_real();
  const double u2 = uniform_real();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

void Sampler::uniform_poly(PolyRns& out) {
  if (out.domain() != Domain::evaluation) {
    throw DomainError("uniform ring elements are drawn in evaluation domain");
  }
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    const u64 q = out.row_modulus(i).value;
    for (u64& v : out.row(i)) v = uniform_below(q);
  }
}

void Sampler::set_coeff(PolyRns& out, std::size_t j, long v) {
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    const Modulus& q = out.row_modulus(i);
    out.row(i)[j] =
        v >= 0 ? static_cast<u64>(v) : q.value - static_cast<u64>(-v);
  }
}

void Sampler::ternary_poly(PolyRns& out) {
  if (out.domain() != Domain::coefficient) {
    throw DomainError("small samples are drawn in coefficient domain");
  }
  for (std::size_t j = 0; j < out.degree(); ++j) {
    const u64 u = uniform_below(3);
    set_coeff(out, j, static_cast<long>(u) - 1);
  }
}

void Sampler::sparse_ternary_poly(PolyRns& out, std::size_t weight) {
  if (out.domain() != Domain::coefficient) {
    throw DomainError("small samples are drawn in coefficient domain");
  }
  const std::size_t n = out.degree();
  if (weight > n) throw ParameterError("hamming weight exceeds degree");
  for (std::size_t i = 0; i < out.row_count(); ++i) {
    std::fill(out.row(i).begin(), out.row(i).end(), 0);
  }
  // Partial Fisher-Yates over the index range.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < weight; ++i) {
    const std::size_t k = i + uniform_below(n - i);
    std::swap(idx[i], idx[k]);
    const long sign = uniform_below(2) == 0 ? 1 : -1;
    set_coeff(out, idx[i], sign);
  }
}

void Sampler::cbd_poly(PolyRns& out, int eta) {
  if (out.domain() != Domain::coefficient) {
    throw DomainError("small samples are drawn in coefficient domain");
  }
  if (eta < 1 || eta > 32) throw ParameterError("cbd eta must lie in [1, 32]");
  const u64 mask = (eta == 32) ? ~u64{0} >> 32 : (u64{1} << eta) - 1;
  for (std::size_t j = 0; j < out.degree(); ++j) {
    const u64 bits = raw();
    const int a = std::popcount(bits & mask);
    const int b = std::popcount((bits >> eta) & mask);
    set_coeff(out, j, a - b);
  }
}

}  // namespace lancelot
