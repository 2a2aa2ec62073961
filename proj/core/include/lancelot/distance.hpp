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

#ifndef LANCELOT_DISTANCE_HPP
#define LANCELOT_DISTANCE_HPP

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "lancelot/ckks.hpp"

namespace lancelot {

// A flat weight vector packed into ceil(P / slot_count) ciphertext chunks.
// The last chunk is zero padded. Every value was multiplied by `prescale`
// before encryption; decrypt_weights divides it back out.
struct PackedWeights {
  std::vector<Ciphertext> chunks;
  std::size_t dimension = 0;
  double prescale = 1.0;

  std::size_t chunk_count() const { return chunks.size(); }
};

std::size_t chunk_count_for(std::size_t dimension, std::size_t slot_count);

// Prescale factor for squared-distance pipelines: 1/sqrt(P) once the
// accumulated squared norm could crowd the decoding headroom, 1 otherwise.
// The squared distance then shrinks by 1/P and the decrypting side
// multiplies it back.
double distance_prescale(std::size_t dimension, double message_bound);

PackedWeights pack_and_encrypt(const CkksContext& ctx,
                               const std::vector<double>& w,
                               const PublicKey& pk, Sampler& rng,
                               double prescale = 1.0);

std::vector<double> decrypt_weights(const CkksContext& ctx,
                                    const PackedWeights& pw,
                                    const SecretKey& sk);

// ||a - b||^2 spread across slots: per chunk, square the difference, then
// accumulate every chunk into one ciphertext whose slot-sum is the squared
// distance. lazy=true keeps the products in ternary form and relinearizes
// once; lazy=false relinearizes every chunk. Output sits one level below
// the inputs.
Ciphertext encrypted_pairwise_distance(const CkksContext& ctx,
                                       const PackedWeights& a,
                                       const PackedWeights& b,
                                       const RelinKey& rk, bool lazy = true);

// Rotation-tree execution plan: the first k-1 tree levels run as a single
// hoisted batch (one decomposition), the remaining log2(n)-(k-1) levels
// run iteratively.
struct HoistPlan {
  std::size_t k = 1;
  double t_hoist = 0.0;
  double t_decompose = 0.0;
  double m_cipher = 0.0;
  double m_budget = 0.0;
  std::size_t n = 1;
  double cost = 0.0;
};

enum class HoistMode { off, full, dynamic_lp };

// Minimizes (log2(n) - k + 1)*T_H + (k-1)*T_D over integer k subject to
// k*M_c <= M_B and k <= log2(n) + 1, ties toward the smallest k. The
// feasible set has at most log2(n)+1 points, so exhaustive evaluation is
// exact.
HoistPlan plan_unfold(double t_hoist, double t_decompose, double m_cipher,
                      double m_budget, std::size_t n);

// Plan for a fixed mode: off pins k=1, full pins k=log2(n)+1.
HoistPlan fixed_plan(HoistMode mode, std::size_t n);

// Rotation steps slot_reduce needs under the plan: 1..2^(k-1)-1 for the
// hoisted batch plus the remaining power-of-two tree steps.
std::vector<std::size_t> slot_reduce_steps(std::size_t n, std::size_t k);

// Sums the first plan.n slots into slot 0 (the partial sums land in every
// slot of the prefix). Width must be a power of two <= slot_count.
Ciphertext slot_reduce(const CkksContext& ctx, const Ciphertext& a,
                       const HoistPlan& plan, const RotationKeySet& keys);

enum class DistanceMode { per_pair, row_sums };

// per_pair holds the n(n-1)/2 upper-triangle entries keyed (i,j), i<j.
// row_sums holds n entries keyed (i,i), entry i being the sum over j of
// the pair ciphertexts. `reduced` records whether slot_reduce already ran
// (value in slot 0) or the decryptor must sum slots itself. True distances
// are the decrypted values divided by value_scale (the squared prescale).
struct EncryptedDistanceMatrix {
  DistanceMode mode = DistanceMode::per_pair;
  std::size_t n = 0;
  bool reduced = true;
  double value_scale = 1.0;
  std::map<std::pair<std::size_t, std::size_t>, Ciphertext> entries;
};

struct DistanceOptions {
  bool lazy_relin = true;
  bool reduce_on_server = true;
};

// Pairwise distances for all i<j, parallel across pairs, merged by a
// single writer.
EncryptedDistanceMatrix build_distance_matrix(
    const CkksContext& ctx, const std::vector<PackedWeights>& all,
    const RelinKey& rk, const HoistPlan& plan, DistanceMode mode,
    const RotationKeySet& keys, const DistanceOptions& options);

}  // namespace lancelot

#endif  // LANCELOT_DISTANCE_HPP
