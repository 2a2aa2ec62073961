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

#include "lancelot/modmath.hpp"

#include <algorithm>
#include <bit>

namespace lancelot {

Modulus::Modulus(u64 q) {
  if (q < 2 || q >= (u64{1} << 62)) {
    throw ParameterError("modulus must lie in [2, 2^62)");
  }
  value = q;
  const u128 ratio = ~static_cast<u128>(0) / q;  // floor(2^128 / q), q odd
  ratio_lo = static_cast<u64>(ratio);
  ratio_hi = static_cast<u64>(ratio >> 64);
  bits = 64 - std::countl_zero(q);
}

u64 pow_mod(u64 base, u64 exp, const Modulus& m) {
  u64 r = 1;
  u64 b = reduce_mod(base, m);
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, const Modulus& m) {
  a = reduce_mod(a, m);
  if (a == 0) throw ParameterError("zero has no modular inverse");
  return pow_mod(a, m.value - 2, m);
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int r, const Modulus& m) {
  u64 x = pow_mod(a, d, m);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, m);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  const Modulus m(n);
  // This witness set decides primality for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (!miller_rabin_witness(n, a, d, r, m)) return false;
  }
  return true;
}

std::vector<u64> generate_ntt_primes(int bit_size, std::size_t degree,
                                     std::size_t count,
                                     const std::vector<u64>& avoid) {
  if (bit_size < 20 || bit_size > 61) {
    throw ParameterError("prime bit size must lie in [20, 61]");
  }
  if (degree == 0 || (degree & (degree - 1)) != 0) {
    throw ParameterError("ring degree must be a power of two");
  }
  const u64 step = 2 * static_cast<u64>(degree);
  const u64 hi = u64{1} << bit_size;
  const u64 lo = u64{1} << (bit_size - 1);
  // Largest candidate below 2^bit_size congruent to 1 mod 2*degree.
  u64 candidate = hi - step + 1;
  std::vector<u64> out;
  while (out.size() < count && candidate > lo) {
    if (is_prime(candidate) &&
        std::find(avoid.begin(), avoid.end(), candidate) == avoid.end() &&
        std::find(out.begin(), out.end(), candidate) == out.end()) {
      out.push_back(candidate);
    }
    candidate -= step;
  }
  if (out.size() < count) {
    throw ParameterError("prime search exhausted the requested bit range");
  }
  return out;
}

u64 primitive_root_2n(std::size_t n, const Modulus& q) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw ParameterError("root order must be a power of two");
  }
  const u64 order = 2 * static_cast<u64>(n);
  if ((q.value - 1) % order != 0) {
    throw ParameterError("modulus does not admit a 2n-th root of unity");
  }
  const u64 quotient = (q.value - 1) / order;
  for (u64 g = 2; g < q.value; ++g) {
    const u64 r = pow_mod(g, quotient, q);
    // r has order dividing 2n, a power of two; r^n == -1 pins it at 2n.
    if (pow_mod(r, n, q) == q.value - 1) return r;
  }
  throw ParameterError("no primitive root found");
}

}  // namespace lancelot
