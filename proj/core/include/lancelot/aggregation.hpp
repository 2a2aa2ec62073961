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

#ifndef LANCELOT_AGGREGATION_HPP
#define LANCELOT_AGGREGATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "lancelot/ckks.hpp"
#include "lancelot/distance.hpp"

namespace lancelot {

// Plaintext pairwise squared distances, symmetric with a zero diagonal.
struct DistanceTable {
  std::size_t n = 0;
  std::vector<std::vector<double>> d;

  void validate() const;
};

enum class SelectionRule { krum, multi_krum, median };

std::string rule_name(SelectionRule rule);

struct SelectionResult {
  SelectionRule rule = SelectionRule::krum;
  std::vector<std::size_t> selected;
  std::size_t l = 1;
};

// Score of client i: sum of its n-c-2 smallest distances to other clients.
std::vector<double> krum_scores(const DistanceTable& t, std::size_t c);

// Client indices ranked by total distance ascending, ties toward the
// smaller index.
std::vector<std::size_t> rank_by_total(const DistanceTable& t);

// argmin of the Krum score; requires c < (n-2)/2. Ties toward the
// smallest index.
SelectionResult krum_select(const DistanceTable& t, std::size_t c);

// Iterative Krum: pick the best-scoring client, remove it, rescore the
// remainder; l picks total. Requires n - l > 2c + 2.
SelectionResult multi_krum_select(const DistanceTable& t, std::size_t c,
                                  std::size_t l);

// The client at 1-based rank (n+1)/2 (odd n) or n/2 (even n) by total
// distance.
SelectionResult median_select(const DistanceTable& t);

// Compatibility ranking from row totals only: the rule's l smallest
// totals (median keeps its rank formula). Used when the matrix carries
// row sums instead of pairs.
SelectionResult select_by_totals(const std::vector<double>& totals,
                                 SelectionRule rule, std::size_t l);

// The encrypted selection artifact sent back to the server. rank_rows[r]
// decrypts to the basis vector of the r-th selected client for r < l and
// to zero above; client_selectors[i] broadcasts client i's 0/1 selection
// bit into every slot so aggregation is a plain slot-wise multiply.
struct SelectionMask {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<Ciphertext> rank_rows;
  std::vector<Ciphertext> client_selectors;
};

SelectionMask build_mask(const CkksContext& ctx, const SelectionResult& sel,
                         std::size_t n, const PublicKey& pk, Sampler& rng);

// Sum over clients of chunk * selector, relinearized once per chunk; the
// mean of the l selected clients when averaged (rule multi_krum with
// l > 1). Consumes one level, or two when averaging.
PackedWeights masked_aggregate(const CkksContext& ctx,
                               const std::vector<PackedWeights>& weights,
                               const SelectionMask& mask, SelectionRule rule,
                               const RelinKey& rk);

// Distances decrypted out of a per-pair matrix (values divided by the
// matrix value_scale, clamped at zero).
DistanceTable table_from_matrix(const CkksContext& ctx,
                                const EncryptedDistanceMatrix& m,
                                const SecretKey& sk);

// Row totals decrypted from either matrix mode.
std::vector<double> totals_from_matrix(const CkksContext& ctx,
                                       const EncryptedDistanceMatrix& m,
                                       const SecretKey& sk);

struct SortRoundOptions {
  SelectionRule rule = SelectionRule::krum;
  std::size_t c = 0;
  std::size_t l = 1;
  // Rank by decrypted row totals instead of the rule's own score.
  bool sumdis_score = false;
};

struct SortRoundResult {
  SelectionMask mask;
  SelectionResult selection;
  // Filled in per-pair mode; empty (n=0) when only totals were available.
  DistanceTable table;
  std::vector<double> totals;
};

// The key holder's transaction: decrypt the distance matrix, run the
// selection rule, encrypt the mask. The mask is the only artifact meant
// to travel back.
SortRoundResult masked_sort_round(const CkksContext& ctx,
                                  const EncryptedDistanceMatrix& m,
                                  const SecretKey& sk, const PublicKey& pk,
                                  Sampler& rng,
                                  const SortRoundOptions& options);

}  // namespace lancelot

#endif  // LANCELOT_AGGREGATION_HPP
