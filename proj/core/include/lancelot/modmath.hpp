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

#ifndef LANCELOT_MODMATH_HPP
#define LANCELOT_MODMATH_HPP

#include <cstdint>
#include <vector>

#include "lancelot/errors.hpp"

namespace lancelot {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// A word-sized prime modulus with its Barrett constant floor(2^128 / value).
// Values are capped at 62 bits so a single conditional correction suffices
// after Barrett reduction.
struct Modulus {
  u64 value = 0;
  u64 ratio_lo = 0;
  u64 ratio_hi = 0;
  int bits = 0;

  Modulus() = default;
  explicit Modulus(u64 q);

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.value == b.value;
  }
};

inline u64 add_mod(u64 a, u64 b, const Modulus& m) {
  u64 s = a + b;
  if (s >= m.value) s -= m.value;
  return s;
}

inline u64 sub_mod(u64 a, u64 b, const Modulus& m) {
  return a >= b ? a - b : a + m.value - b;
}

inline u64 negate_mod(u64 a, const Modulus& m) {
  return a == 0 ? 0 : m.value - a;
}

// Reduces a 128-bit value modulo m. Exact for any 128-bit input.
inline u64 barrett_reduce_128(u128 x, const Modulus& m) {
  const u64 x0 = static_cast<u64>(x);
  const u64 x1 = static_cast<u64>(x >> 64);
  const u128 c0 = static_cast<u128>(x0) * m.ratio_lo;
  const u128 c1 = static_cast<u128>(x0) * m.ratio_hi + static_cast<u64>(c0 >> 64);
  const u128 c2 = static_cast<u128>(x1) * m.ratio_lo + static_cast<u64>(c1);
  const u64 q_hat = x1 * m.ratio_hi + static_cast<u64>(c1 >> 64) +
                    static_cast<u64>(c2 >> 64);
  u64 r = x0 - q_hat * m.value;
  if (r >= m.value) r -= m.value;
  return r;
}

inline u64 reduce_mod(u64 a, const Modulus& m) {
  return barrett_reduce_128(static_cast<u128>(a), m);
}

inline u64 mul_mod(u64 a, u64 b, const Modulus& m) {
  return barrett_reduce_128(static_cast<u128>(a) * b, m);
}

// Precomputed Shoup constant floor(w * 2^64 / q) for a fixed multiplicand w.
inline u64 shoup_precompute(u64 w, const Modulus& m) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / m.value);
}

// Multiplies a by the fixed w given its Shoup constant. Requires a < 2^64,
// w < q; the result is exact in [0, q).
inline u64 mul_mod_shoup(u64 a, u64 w, u64 w_shoup, const Modulus& m) {
  const u64 hi = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - hi * m.value;
  if (r >= m.value) r -= m.value;
  return r;
}

u64 pow_mod(u64 base, u64 exp, const Modulus& m);

// Inverse of a modulo the prime m. Throws ParameterError when a == 0.
u64 inv_mod(u64 a, const Modulus& m);

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(u64 n);

// Generates `count` distinct primes of exactly `bit_size` bits congruent to
// 1 mod 2*degree, scanning downward from 2^bit_size. Primes listed in
// `avoid` are skipped. Throws ParameterError when the range is exhausted.
std::vector<u64> generate_ntt_primes(int bit_size, std::size_t degree,
                                     std::size_t count,
                                     const std::vector<u64>& avoid = {});

// Smallest-witness primitive 2n-th root of unity modulo q (n a power of
// two, q = 1 mod 2n). Deterministic for a given modulus.
u64 primitive_root_2n(std::size_t n, const Modulus& q);

}  // namespace lancelot

#endif  // LANCELOT_MODMATH_HPP
