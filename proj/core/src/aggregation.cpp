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

#include "lancelot/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lancelot/errors.hpp"
#include "lancelot/threading.hpp"

namespace lancelot {

void DistanceTable::validate() const {
  if (d.size() != n) throw ShapeError("distance table is not n by n");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) throw ShapeError("distance table is not n by n");
    if (d[i][i] != 0.0) throw DataError("distance table diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(d[i][j]) || d[i][j] < 0.0) {
        throw DataError("distances must be finite and non-negative");
      }
      if (d[i][j] != d[j][i]) {
        throw DataError("distance table must be symmetric");
      }
    }
  }
}

std::string rule_name(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::krum:
      return "krum";
    case SelectionRule::multi_krum:
      return "multi-krum";
    case SelectionRule::median:
      return "median";
  }
  return "unknown";
}

std::vector<double> krum_scores(const DistanceTable& t, std::size_t c) {
  t.validate();
  if (t.n < c + 3) {
    throw ParameterError("score needs n-c-2 >= 1 neighbors");
  }
  const std::size_t phi = t.n - c - 2;
  std::vector<double> scores(t.n);
  std::vector<double> row;
  for (std::size_t i = 0; i < t.n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < t.n; ++j) {
      if (j != i) row.push_back(t.d[i][j]);
    }
    std::sort(row.begin(), row.end());
    scores[i] = std::accumulate(row.begin(), row.begin() + phi, 0.0);
  }
  return scores;
}

std::vector<std::size_t> rank_by_total(const DistanceTable& t) {
  std::vector<double> totals(t.n, 0.0);
  for (std::size_t i = 0; i < t.n; ++i) {
    totals[i] = std::accumulate(t.d[i].begin(), t.d[i].end(), 0.0);
  }
  std::vector<std::size_t> order(t.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return totals[a] < totals[b];
  });
  return order;
}

SelectionResult krum_select(const DistanceTable& t, std::size_t c) {
  const std::vector<double> scores = krum_scores(t, c);
  const std::size_t best =
      std::min_element(scores.begin(), scores.end()) - scores.begin();
  return {SelectionRule::krum, {best}, 1};
}

SelectionResult multi_krum_select(const DistanceTable& t, std::size_t c,
                                  std::size_t l) {
  t.validate();
  if (l < 1 || l > t.n) throw ParameterError("selection size outside 1..n");
  if (t.n - l <= 2 * c + 2) {
    throw ParameterError("multi-krum needs n - l > 2c + 2");
  }

  std::vector<std::size_t> remaining(t.n);
  std::iota(remaining.begin(), remaining.end(), 0);
  SelectionResult result{SelectionRule::multi_krum, {}, l};
  while (result.selected.size() < l) {
    DistanceTable sub;
    sub.n = remaining.size();
    sub.d.assign(sub.n, std::vector<double>(sub.n, 0.0));
    for (std::size_t a = 0; a < sub.n; ++a) {
      for (std::size_t b = 0; b < sub.n; ++b) {
        sub.d[a][b] = t.d[remaining[a]][remaining[b]];
      }
    }
    const std::vector<double> scores = krum_scores(sub, c);
    const std::size_t best =
        std::min_element(scores.begin(), scores.end()) - scores.begin();
    result.selected.push_back(remaining[best]);
    remaining.erase(remaining.begin() + best);
  }
  return result;
}

SelectionResult median_select(const DistanceTable& t) {
  t.validate();
  if (t.n == 0) throw ParameterError("empty distance table");
  const std::vector<std::size_t> order = rank_by_total(t);
  const std::size_t rank = (t.n % 2 == 0) ? t.n / 2 : (t.n + 1) / 2;
  return {SelectionRule::median, {order[rank - 1]}, 1};
}

SelectionResult select_by_totals(const std::vector<double>& totals,
                                 SelectionRule rule, std::size_t l) {
  const std::size_t n = totals.size();
  if (n == 0) throw ParameterError("empty totals");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return totals[a] < totals[b];
  });
  switch (rule) {
    case SelectionRule::krum:
      return {rule, {order[0]}, 1};
    case SelectionRule::median: {
      const std::size_t rank = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
      return {rule, {order[rank - 1]}, 1};
    }
    case SelectionRule::multi_krum: {
      if (l < 1 || l > n) throw ParameterError("selection size outside 1..n");
      return {rule, {order.begin(), order.begin() + l}, l};
    }
  }
  throw ParameterError("unknown selection rule");
}

SelectionMask build_mask(const CkksContext& ctx, const SelectionResult& sel,
                         std::size_t n, const PublicKey& pk, Sampler& rng) {
  if (n > ctx.slot_count()) {
    throw CapacityError("more clients than mask slots");
  }
  for (std::size_t idx : sel.selected) {
    if (idx >= n) throw ShapeError("selected index outside the client range");
  }

  SelectionMask mask;
  mask.n = n;
  mask.l = sel.selected.size();
  mask.rank_rows.reserve(n);
  mask.client_selectors.reserve(n);

  std::vector<double> basis(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::fill(basis.begin(), basis.end(), 0.0);
    if (r < mask.l) basis[sel.selected[r]] = 1.0;
    mask.rank_rows.push_back(ctx.encrypt(ctx.encode(basis), pk, rng));
  }

  std::vector<bool> chosen(n, false);
  for (std::size_t idx : sel.selected) chosen[idx] = true;
  std::vector<double> broadcast(ctx.slot_count());
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(broadcast.begin(), broadcast.end(), chosen[i] ? 1.0 : 0.0);
    mask.client_selectors.push_back(ctx.encrypt(ctx.encode(broadcast), pk, rng));
  }
  return mask;
}

PackedWeights masked_aggregate(const CkksContext& ctx,
                               const std::vector<PackedWeights>& weights,
                               const SelectionMask& mask, SelectionRule rule,
                               const RelinKey& rk) {
  if (weights.empty()) throw ShapeError("no client weights to aggregate");
  if (weights.size() != mask.n ||
      mask.client_selectors.size() != mask.n) {
    throw ShapeError("mask rows do not match the client count");
  }
  for (const PackedWeights& pw : weights) {
    if (pw.dimension != weights[0].dimension ||
        pw.chunk_count() != weights[0].chunk_count() ||
        pw.prescale != weights[0].prescale) {
      throw ShapeError("client weights disagree in shape");
    }
  }

  const bool average = rule == SelectionRule::multi_krum && mask.l > 1;
  PackedWeights out;
  out.dimension = weights[0].dimension;
  out.prescale = weights[0].prescale;
  out.chunks.resize(weights[0].chunk_count());

  parallel_for(out.chunks.size(), [&](std::size_t ch) {
    TernaryCiphertext acc =
        ctx.hmult_triple(weights[0].chunks[ch], mask.client_selectors[0]);
    for (std::size_t i = 1; i < weights.size(); ++i) {
      ctx.lazy_accumulate(
          acc, ctx.hmult_triple(weights[i].chunks[ch],
                                mask.client_selectors[i]));
    }
    Ciphertext ct = ctx.rescale(ctx.relinearize(acc, rk));
    if (average) {
      const std::vector<double> inv_l(ctx.slot_count(),
                                      1.0 / static_cast<double>(mask.l));
      const Plaintext pt = ctx.encode(inv_l, ctx.scale(), ct.level());
      ct = ctx.rescale(ctx.mult_plain(ct, pt));
    }
    out.chunks[ch] = std::move(ct);
  });
  return out;
}

namespace {

double entry_value(const CkksContext& ctx, const Ciphertext& ct,
                   const SecretKey& sk, bool reduced) {
  const std::vector<double> slots = ctx.decrypt_values(ct, sk);
  if (reduced) return slots[0];
  return std::accumulate(slots.begin(), slots.end(), 0.0);
}

}  // namespace

DistanceTable table_from_matrix(const CkksContext& ctx,
                                const EncryptedDistanceMatrix& m,
                                const SecretKey& sk) {
  if (m.mode != DistanceMode::per_pair) {
    throw UsageError("pair entries required to rebuild the full table");
  }
  DistanceTable t;
  t.n = m.n;
  t.d.assign(m.n, std::vector<double>(m.n, 0.0));
  for (const auto& [key, ct] : m.entries) {
    const double v = std::max(
        0.0, entry_value(ctx, ct, sk, m.reduced) / m.value_scale);
    t.d[key.first][key.second] = v;
    t.d[key.second][key.first] = v;
  }
  return t;
}

std::vector<double> totals_from_matrix(const CkksContext& ctx,
                                       const EncryptedDistanceMatrix& m,
                                       const SecretKey& sk) {
  if (m.mode == DistanceMode::per_pair) {
    const DistanceTable t = table_from_matrix(ctx, m, sk);
    std::vector<double> totals(t.n, 0.0);
    for (std::size_t i = 0; i < t.n; ++i) {
      totals[i] = std::accumulate(t.d[i].begin(), t.d[i].end(), 0.0);
    }
    return totals;
  }
  std::vector<double> totals(m.n, 0.0);
  for (const auto& [key, ct] : m.entries) {
    totals[key.first] = std::max(
        0.0, entry_value(ctx, ct, sk, m.reduced) / m.value_scale);
  }
  return totals;
}

SortRoundResult masked_sort_round(const CkksContext& ctx,
                                  const EncryptedDistanceMatrix& m,
                                  const SecretKey& sk, const PublicKey& pk,
                                  Sampler& rng,
                                  const SortRoundOptions& options) {
  SortRoundResult result;
  if (m.mode == DistanceMode::per_pair) {
    result.table = table_from_matrix(ctx, m, sk);
    result.totals.assign(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
      result.totals[i] = std::accumulate(result.table.d[i].begin(),
                                         result.table.d[i].end(), 0.0);
    }
    if (options.sumdis_score) {
      result.selection =
          select_by_totals(result.totals, options.rule, options.l);
    } else {
      switch (options.rule) {
        case SelectionRule::krum:
          result.selection = krum_select(result.table, options.c);
          break;
        case SelectionRule::multi_krum:
          result.selection =
              multi_krum_select(result.table, options.c, options.l);
          break;
        case SelectionRule::median:
          result.selection = median_select(result.table);
          break;
      }
    }
  } else {
    if (!options.sumdis_score && options.rule != SelectionRule::median) {
      throw UsageError("row sums cannot express the neighbor-restricted score");
    }
    result.totals = totals_from_matrix(ctx, m, sk);
    result.selection = select_by_totals(result.totals, options.rule, options.l);
  }
  result.mask = build_mask(ctx, result.selection, m.n, pk, rng);
  return result;
}

}  // namespace lancelot
