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

#ifndef LANCELOT_SAMPLING_HPP
#define LANCELOT_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "lancelot/rns.hpp"

namespace lancelot {

// Derives an independent stream seed from a root seed and a tag. Used so
// every entity and round draws from its own deterministic stream.
u64 derive_seed(u64 root, u64 tag);

// Deterministic sampler over a fixed 64-bit engine. All bounded draws use
// rejection sampling so the byte stream is identical across platforms.
class Sampler {
 public:
  explicit Sampler(u64 seed) : engine_(seed) {}

  u64 raw() { return engine_(); }

  // Uniform in [0, bound).
  u64 uniform_below(u64 bound);

  double uniform_real();  // [0, 1)

  // Standard normal via Box-Muller on uniform_real draws.
  double normal();

  // Fills an evaluation-domain polynomial with independent uniform
  // residues per prime row (a uniform ring element).
  void uniform_poly(PolyRns& out);

  // Dense ternary coefficients, each of {-1, 0, 1} with probability 1/3.
  // Output polynomial must be in coefficient domain.
  void ternary_poly(PolyRns& out);

  // Ternary coefficients with exactly `weight` nonzero entries.
  void sparse_ternary_poly(PolyRns& out, std::size_t weight);

  // Centered binomial with parameter eta (variance eta/2), eta <= 32.
  void cbd_poly(PolyRns& out, int eta);

 private:
  void set_coeff(PolyRns& out, std::size_t j, long v);
  std::mt19937_64 engine_;
};

}  // namespace lancelot

#endif  // LANCELOT_SAMPLING_HPP
