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

#include "lancelot/distance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "lancelot/errors.hpp"
#include "lancelot/threading.hpp"

namespace lancelot {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_width(std::size_t n) {
  if (!is_pow2(n)) {
    throw WidthError("reduction width must be a power of two");
  }
}

void require_same_shape(const PackedWeights& a, const PackedWeights& b) {
  if (a.dimension != b.dimension || a.chunk_count() != b.chunk_count() ||
      a.prescale != b.prescale) {
    throw ShapeError("packed weights disagree in length, chunking or prescale");
  }
}

}  // namespace

std::size_t chunk_count_for(std::size_t dimension, std::size_t slot_count) {
  if (dimension == 0 || slot_count == 0) {
    throw ShapeError("empty weight vector or slotless context");
  }
  return (dimension + slot_count - 1) / slot_count;
}

double distance_prescale(std::size_t dimension, double message_bound) {
  // Worst-case squared distance grows with P times the squared coordinate
  // range; past this line the decode headroom gets tight and 1/sqrt(P)
  // buys it back at the cost of one plaintext multiply at the decryptor.
  if (static_cast<double>(dimension) * message_bound > std::ldexp(1.0, 42)) {
    return 1.0 / std::sqrt(static_cast<double>(dimension));
  }
  return 1.0;
}

PackedWeights pack_and_encrypt(const CkksContext& ctx,
                               const std::vector<double>& w,
                               const PublicKey& pk, Sampler& rng,
                               double prescale) {
  if (w.empty()) throw ShapeError("empty weight vector");
  if (!(prescale > 0.0) || !std::isfinite(prescale)) {
    throw ParameterError("prescale must be positive and finite");
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw DataError("weights must be finite");
  }

  const std::size_t slots = ctx.slot_count();
  PackedWeights pw;
  pw.dimension = w.size();
  pw.prescale = prescale;
  const std::size_t chunks = chunk_count_for(w.size(), slots);
  pw.chunks.reserve(chunks);
  std::vector<double> buf;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * slots;
    const std::size_t hi = std::min(lo + slots, w.size());
    buf.assign(w.begin() + lo, w.begin() + hi);
    for (double& v : buf) v *= prescale;
    pw.chunks.push_back(ctx.encrypt(ctx.encode(buf), pk, rng));
  }
  return pw;
}

std::vector<double> decrypt_weights(const CkksContext& ctx,
                                    const PackedWeights& pw,
                                    const SecretKey& sk) {
  std::vector<double> out;
  out.reserve(pw.chunks.size() * ctx.slot_count());
  for (const Ciphertext& ct : pw.chunks) {
    const std::vector<double> slots = ctx.decrypt_values(ct, sk);
    out.insert(out.end(), slots.begin(), slots.end());
  }
  out.resize(pw.dimension);
  for (double& v : out) v /= pw.prescale;
  return out;
}

Ciphertext encrypted_pairwise_distance(const CkksContext& ctx,
                                       const PackedWeights& a,
                                       const PackedWeights& b,
                                       const RelinKey& rk, bool lazy) {
  require_same_shape(a, b);

  if (lazy) {
    TernaryCiphertext acc;
    bool first = true;
    for (std::size_t c = 0; c < a.chunk_count(); ++c) {
      TernaryCiphertext t =
          ctx.hsquare(ctx.hsub(a.chunks[c], b.chunks[c]));
      if (first) {
        acc = std::move(t);
        first = false;
      } else {
        ctx.lazy_accumulate(acc, t);
      }
    }
    return ctx.rescale(ctx.relinearize(acc, rk));
  }

  Ciphertext sum;
  bool first = true;
  for (std::size_t c = 0; c < a.chunk_count(); ++c) {
    Ciphertext part = ctx.rescale(
        ctx.relinearize(ctx.hsquare(ctx.hsub(a.chunks[c], b.chunks[c])), rk));
    if (first) {
      sum = std::move(part);
      first = false;
    } else {
      sum = ctx.hadd(sum, part);
    }
  }
  return sum;
}

HoistPlan plan_unfold(double t_hoist, double t_decompose, double m_cipher,
                      double m_budget, std::size_t n) {
  if (!(t_hoist > 0.0) || !(t_decompose > 0.0) || !(m_cipher > 0.0) ||
      !(m_budget > 0.0)) {
    throw ParameterError("plan inputs must all be positive");
  }
  require_width(n);
  if (m_cipher > m_budget) {
    throw InfeasibleError("one ciphertext already exceeds the memory budget");
  }

  const std::size_t levels = static_cast<std::size_t>(std::countr_zero(n));
  const double mem_cap = std::floor(m_budget / m_cipher);
  std::size_t k_max = levels + 1;
  if (mem_cap < static_cast<double>(k_max)) {
    k_max = static_cast<std::size_t>(mem_cap);
  }

  HoistPlan plan;
  plan.t_hoist = t_hoist;
  plan.t_decompose = t_decompose;
  plan.m_cipher = m_cipher;
  plan.m_budget = m_budget;
  plan.n = n;
  plan.k = 1;
  plan.cost = static_cast<double>(levels) * t_hoist;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const double cost = static_cast<double>(levels - k + 1) * t_hoist +
                        static_cast<double>(k - 1) * t_decompose;
    if (cost < plan.cost) {
      plan.cost = cost;
      plan.k = k;
    }
  }
  return plan;
}

HoistPlan fixed_plan(HoistMode mode, std::size_t n) {
  require_width(n);
  const std::size_t levels = static_cast<std::size_t>(std::countr_zero(n));
  HoistPlan plan;
  plan.n = n;
  switch (mode) {
    case HoistMode::off:
      plan.k = 1;
      return plan;
    case HoistMode::full:
      plan.k = levels + 1;
      return plan;
    case HoistMode::dynamic_lp:
      throw UsageError("dynamic plans come from plan_unfold with calibration");
  }
  throw UsageError("unknown hoist mode");
}

std::vector<std::size_t> slot_reduce_steps(std::size_t n, std::size_t k) {
  require_width(n);
  if (k == 0) throw ParameterError("unfold factor starts at 1");
  const std::size_t levels = static_cast<std::size_t>(std::countr_zero(n));
  const std::size_t unfolded = std::min(k - 1, levels);
  std::vector<std::size_t> steps;
  for (std::size_t u = 1; u < (std::size_t{1} << unfolded); ++u) {
    steps.push_back(u);
  }
  for (std::size_t j = unfolded; j < levels; ++j) {
    steps.push_back(std::size_t{1} << j);
  }
  return steps;
}

Ciphertext slot_reduce(const CkksContext& ctx, const Ciphertext& a,
                       const HoistPlan& plan, const RotationKeySet& keys) {
  require_width(plan.n);
  if (plan.n > ctx.slot_count()) {
    throw WidthError("reduction width exceeds the slot count");
  }
  if (plan.k == 0) throw ParameterError("unfold factor starts at 1");
  if (plan.n == 1) return a;

  const std::size_t levels = static_cast<std::size_t>(std::countr_zero(plan.n));
  const std::size_t unfolded = std::min(plan.k - 1, levels);

  Ciphertext acc = a;
  if (unfolded >= 1) {
    std::vector<std::size_t> batch;
    for (std::size_t u = 1; u < (std::size_t{1} << unfolded); ++u) {
      batch.push_back(u);
    }
    const std::vector<Ciphertext> rotated =
        ctx.hoisted_rotations(a, batch, keys);
    for (const Ciphertext& r : rotated) acc = ctx.hadd(acc, r);
  }
  for (std::size_t j = unfolded; j < levels; ++j) {
    acc = ctx.hadd(acc, ctx.rotate(acc, std::size_t{1} << j, keys));
  }
  return acc;
}

EncryptedDistanceMatrix build_distance_matrix(
    const CkksContext& ctx, const std::vector<PackedWeights>& all,
    const RelinKey& rk, const HoistPlan& plan, DistanceMode mode,
    const RotationKeySet& keys, const DistanceOptions& options) {
  const std::size_t n = all.size();
  if (n < 2) throw ShapeError("pairwise distances need at least two clients");
  for (const PackedWeights& pw : all) require_same_shape(all[0], pw);

  if (options.reduce_on_server) {
    const std::size_t needed = std::min(all[0].dimension, ctx.slot_count());
    if (plan.n < std::bit_ceil(needed)) {
      throw WidthError("plan width misses populated slots");
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  const bool reduce_pairs =
      options.reduce_on_server && mode == DistanceMode::per_pair;
  std::vector<Ciphertext> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    Ciphertext d = encrypted_pairwise_distance(
        ctx, all[pairs[p].first], all[pairs[p].second], rk,
        options.lazy_relin);
    if (reduce_pairs) d = slot_reduce(ctx, d, plan, keys);
    results[p] = std::move(d);
  });

  EncryptedDistanceMatrix m;
  m.mode = mode;
  m.n = n;
  m.reduced = options.reduce_on_server;
  m.value_scale = all[0].prescale * all[0].prescale;

  if (mode == DistanceMode::per_pair) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      m.entries.emplace(pairs[p], std::move(results[p]));
    }
    return m;
  }

  // Row sums: add the pair ciphertexts per row, then reduce once per row.
  for (std::size_t i = 0; i < n; ++i) {
    Ciphertext row;
    bool first = true;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (pairs[p].first != i && pairs[p].second != i) continue;
      row = first ? results[p] : ctx.hadd(row, results[p]);
      first = false;
    }
    if (options.reduce_on_server) row = slot_reduce(ctx, row, plan, keys);
    m.entries.emplace(std::make_pair(i, i), std::move(row));
  }
  return m;
}

}  // namespace lancelot
