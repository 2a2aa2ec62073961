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

#include "lancelot/selftest.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

#include "lancelot/aggregation.hpp"
#include "lancelot/ckks.hpp"
#include "lancelot/distance.hpp"
#include "lancelot/protocol.hpp"

namespace lancelot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CheckOutcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::vector<double> random_slots(Sampler& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform_real() * 2.0 - 1.0;
  return v;
}

double max_abs_diff(const std::vector<double>& got,
                    const std::vector<double>& expect) {
  double worst = 0.0;
  const std::size_t n = std::min(got.size(), expect.size());
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(got[i] - expect[i]));
  }
  return worst;
}

double relative_error(const std::vector<double>& got,
                      const std::vector<double>& expect, double floor) {
  double top = floor;
  for (double v : expect) top = std::max(top, std::abs(v));
  return max_abs_diff(got, expect) / top;
}

// One context at the production parameter set, shared by the checks that
// need real 128-bit material. Rotation steps cover the iterative slot
// reduction over 4096 slots plus the odd step used by the scheme check.
struct BigFixture {
  CkksParams params;
  std::unique_ptr<CkksContext> ctx;
  KeyBundle keys;
};

const BigFixture& big_fixture() {
  static const BigFixture fixture = [] {
    BigFixture f;
    f.ctx = std::make_unique<CkksContext>(f.params);
    std::vector<std::size_t> steps = {3};
    for (std::size_t s = 1; s < f.ctx->slot_count(); s <<= 1) steps.push_back(s);
    Sampler rng(0xF1A7u);
    f.keys = f.ctx->generate_keys(rng, steps);
    return f;
  }();
  return fixture;
}

CkksParams tiny_params(std::size_t degree) {
  CkksParams p;
  p.ring_degree = degree;
  p.security = SecurityLevel::none;
  return p;
}

std::vector<double> rotate_left(const std::vector<double>& v, std::size_t s) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[(i + s) % v.size()];
  return out;
}

// ---------------------------------------------------------------------------
// 1. Scheme correctness: roundtrip, one-level homomorphisms, depth-3 chain.

CheckOutcome criterion_ckks_correctness() {
  const BigFixture& f = big_fixture();
  const CkksContext& ctx = *f.ctx;
  const std::size_t slots = ctx.slot_count();
  const double kRoundtripBound = std::ldexp(1.0, -25);
  const double kHomomorphismBound = std::ldexp(1.0, -20);
  const double kChainBound = std::ldexp(1.0, -15);

  Sampler rng(101);
  double worst_roundtrip = 0.0, worst_hom = 0.0, worst_chain = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> u = random_slots(rng, slots);
    const std::vector<double> v = random_slots(rng, slots);
    const Ciphertext a = ctx.encrypt(ctx.encode(u), f.keys.pk, rng);
    const Ciphertext b = ctx.encrypt(ctx.encode(v), f.keys.pk, rng);

    worst_roundtrip =
        std::max(worst_roundtrip, max_abs_diff(ctx.decrypt_values(a, f.keys.sk), u));

    std::vector<double> expect(slots);
    for (std::size_t i = 0; i < slots; ++i) expect[i] = u[i] + v[i];
    worst_hom = std::max(worst_hom,
                         relative_error(ctx.decrypt_values(ctx.hadd(a, b), f.keys.sk),
                                        expect, 0.125));
    for (std::size_t i = 0; i < slots; ++i) expect[i] = u[i] - v[i];
    worst_hom = std::max(worst_hom,
                         relative_error(ctx.decrypt_values(ctx.hsub(a, b), f.keys.sk),
                                        expect, 0.125));
    for (std::size_t i = 0; i < slots; ++i) expect[i] = u[i] * v[i];
    const Ciphertext prod =
        ctx.rescale(ctx.relinearize(ctx.hmult_triple(a, b), f.keys.relin));
    worst_hom = std::max(
        worst_hom,
        relative_error(ctx.decrypt_values(prod, f.keys.sk), expect, 0.125));
    for (std::size_t i = 0; i < slots; ++i) expect[i] = u[i] * u[i];
    const Ciphertext sq =
        ctx.rescale(ctx.relinearize(ctx.hsquare(a), f.keys.relin));
    worst_hom = std::max(
        worst_hom,
        relative_error(ctx.decrypt_values(sq, f.keys.sk), expect, 0.125));

    const std::size_t step = (trial % 2) ? 3 : 1;
    worst_hom = std::max(
        worst_hom,
        relative_error(
            ctx.decrypt_values(ctx.rotate(a, step, f.keys.rotations), f.keys.sk),
            rotate_left(u, step), 0.125));

    // x -> x^2 -> x^4 -> x^8 burns the full depth-3 budget.
    Ciphertext chain = sq;
    chain = ctx.rescale(ctx.relinearize(ctx.hsquare(chain), f.keys.relin));
    chain = ctx.rescale(ctx.relinearize(ctx.hsquare(chain), f.keys.relin));
    for (std::size_t i = 0; i < slots; ++i) {
      const double x2 = u[i] * u[i];
      expect[i] = x2 * x2 * x2 * x2;
    }
    worst_chain = std::max(
        worst_chain, max_abs_diff(ctx.decrypt_values(chain, f.keys.sk), expect));
  }

  CheckOutcome out;
  out.passed = worst_roundtrip < kRoundtripBound &&
               worst_hom < kHomomorphismBound && worst_chain < kChainBound;
  out.detail = "roundtrip " + fmt(worst_roundtrip) + " (bound " +
               fmt(kRoundtripBound) + "), one-level " + fmt(worst_hom) +
               " (bound " + fmt(kHomomorphismBound) + "), depth-3 " +
               fmt(worst_chain) + " (bound " + fmt(kChainBound) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Lazy relinearization: one key switch per 16-chunk distance, not 16.

CheckOutcome criterion_lazy_relin() {
  const BigFixture& f = big_fixture();
  const CkksContext& ctx = *f.ctx;
  const std::size_t dimension = 61706;

  Sampler rng(202);
  WeightVector w1(dimension), w2(dimension);
  for (double& x : w1) x = rng.uniform_real() - 0.5;
  for (double& x : w2) x = rng.uniform_real() - 0.5;
  const PackedWeights a = pack_and_encrypt(ctx, w1, f.keys.pk, rng);
  const PackedWeights b = pack_and_encrypt(ctx, w2, f.keys.pk, rng);
  if (a.chunk_count() != 16) {
    return {false, "expected a 16-chunk packing, got " +
                       std::to_string(a.chunk_count())};
  }

  const auto run = [&](bool lazy, double& seconds) {
    const OpCounts before = ctx.counters().snapshot();
    const auto start = Clock::now();
    const Ciphertext d = encrypted_pairwise_distance(ctx, a, b, f.keys.relin, lazy);
    seconds = seconds_since(start);
    const OpCounts delta = ctx.counters().snapshot() - before;
    const std::vector<double> slots = ctx.decrypt_values(d, f.keys.sk);
    return std::make_pair(delta.relinearizations,
                          std::accumulate(slots.begin(), slots.end(), 0.0));
  };
  double t_lazy = 0.0, t_eager = 0.0;
  const auto [relin_lazy, dist_lazy] = run(true, t_lazy);
  const auto [relin_eager, dist_eager] = run(false, t_eager);

  double exact = 0.0;
  for (std::size_t i = 0; i < dimension; ++i) {
    const double diff = w1[i] - w2[i];
    exact += diff * diff;
  }
  const double agreement =
      std::abs(dist_lazy - dist_eager) / std::max(std::abs(dist_eager), 1e-12);
  const double vs_exact =
      std::abs(dist_lazy - exact) / std::max(std::abs(exact), 1e-12);

  CheckOutcome out;
  out.passed = relin_lazy == 1 && relin_eager == 16 && agreement < 1e-4;
  out.detail = "relin " + std::to_string(relin_lazy) + " vs " +
               std::to_string(relin_eager) + ", mode agreement " +
               fmt(agreement) + ", vs exact " + fmt(vs_exact) +
               ", wall ratio eager/lazy " + fmt(t_eager / std::max(t_lazy, 1e-12));
  return out;
}

// ---------------------------------------------------------------------------
// 3. Hoisting: shared-decomposition rotations match one-at-a-time rotations,
//    a batch pays one decomposition, and the unfold planner is optimal.

CheckOutcome criterion_hoisting() {
  CkksContext ctx(tiny_params(1024));
  std::vector<std::size_t> steps;
  for (std::size_t s = 1; s <= 15; ++s) steps.push_back(s);
  Sampler rng(303);
  const KeyBundle keys = ctx.generate_keys(rng, steps);
  const double kRotationBound = std::ldexp(1.0, -22);

  const std::vector<double> u = random_slots(rng, ctx.slot_count());
  const Ciphertext a = ctx.encrypt(ctx.encode(u), keys.pk, rng);

  double worst = 0.0;
  const std::vector<Ciphertext> hoisted =
      ctx.hoisted_rotations(a, steps, keys.rotations);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Ciphertext seq = ctx.rotate(a, steps[i], keys.rotations);
    worst = std::max(worst, max_abs_diff(ctx.decrypt_values(hoisted[i], keys.sk),
                                         ctx.decrypt_values(seq, keys.sk)));
  }

  const std::vector<std::size_t> batch = {1, 2, 4, 8};
  const OpCounts before_batch = ctx.counters().snapshot();
  (void)ctx.hoisted_rotations(a, batch, keys.rotations);
  const std::uint64_t modups_batch =
      (ctx.counters().snapshot() - before_batch).mod_ups;
  const OpCounts before_seq = ctx.counters().snapshot();
  for (std::size_t s : batch) (void)ctx.rotate(a, s, keys.rotations);
  const std::uint64_t modups_seq =
      (ctx.counters().snapshot() - before_seq).mod_ups;

  // Unfold planner versus exhaustive enumeration of the same objective.
  Sampler lp_rng(404);
  std::size_t planner_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    const double th = 0.1 + lp_rng.uniform_real() * 9.9;
    const double td = 0.1 + lp_rng.uniform_real() * 9.9;
    const double mc = 1.0 + lp_rng.uniform_real() * 99.0;
    const double mb = mc * (1.0 + lp_rng.uniform_real() * 15.0);
    const std::size_t n = std::size_t(1) << (1 + lp_rng.uniform_below(10));
    const HoistPlan plan = plan_unfold(th, td, mc, mb, n);

    const std::size_t levels = static_cast<std::size_t>(std::countr_zero(n));
    const std::size_t k_mem = static_cast<std::size_t>(mb / mc);
    const std::size_t k_max = std::min(k_mem, levels + 1);
    std::size_t best_k = 1;
    double best_cost = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const double cost = (static_cast<double>(levels) - k + 1.0) * th +
                          (static_cast<double>(k) - 1.0) * td;
      if (k == 1 || cost < best_cost) {
        best_cost = cost;
        best_k = k;
      }
    }
    if (plan.k != best_k || std::abs(plan.cost - best_cost) > 1e-9) {
      ++planner_mismatch;
    }
  }

  CheckOutcome out;
  out.passed = worst < kRotationBound && modups_batch == 1 &&
               modups_seq == batch.size() && planner_mismatch == 0;
  out.detail = "rotation gap " + fmt(worst) + " (bound " + fmt(kRotationBound) +
               "), batch decompositions " + std::to_string(modups_batch) +
               " vs sequential " + std::to_string(modups_seq) +
               ", planner mismatches " + std::to_string(planner_mismatch) + "/1000";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Selection equivalence: encrypted distances drive the same choices as
//    brute-force rules on exact plaintext tables, on 100 generic cases.

namespace oracle {

std::vector<double> scores(const std::vector<std::vector<double>>& d,
                           std::size_t c) {
  const std::size_t n = d.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(d[i][j]);
    }
    std::sort(row.begin(), row.end());
    const std::size_t take = n - c - 2;
    for (std::size_t k = 0; k < take; ++k) out[i] += row[k];
  }
  return out;
}

std::size_t argmin(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

std::size_t krum(const std::vector<std::vector<double>>& d, std::size_t c) {
  return argmin(scores(d, c));
}

std::vector<std::size_t> multi_krum(std::vector<std::vector<double>> d,
                                    std::size_t c, std::size_t l) {
  std::vector<std::size_t> names(d.size());
  std::iota(names.begin(), names.end(), 0);
  std::vector<std::size_t> picked;
  while (picked.size() < l) {
    const std::size_t local = argmin(scores(d, c));
    picked.push_back(names[local]);
    names.erase(names.begin() + local);
    d.erase(d.begin() + local);
    for (auto& row : d) row.erase(row.begin() + local);
  }
  return picked;
}

std::size_t median(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  std::vector<std::pair<double, std::size_t>> totals(n);
  for (std::size_t i = 0; i < n; ++i) {
    totals[i] = {std::accumulate(d[i].begin(), d[i].end(), 0.0), i};
  }
  std::sort(totals.begin(), totals.end());
  const std::size_t rank = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  return totals[rank - 1].second;
}

}  // namespace oracle

CheckOutcome criterion_selection_equivalence() {
  const BigFixture& f = big_fixture();
  const CkksContext& ctx = *f.ctx;
  Sampler rng(505);
  const std::size_t dim = 24;
  DistanceOptions options;
  options.reduce_on_server = false;  // slot totals read off at decryption
  const HoistPlan plan = fixed_plan(HoistMode::off, 32);

  std::size_t mismatches = 0;
  for (int scenario = 0; scenario < 100; ++scenario) {
    const std::size_t n = 5 + rng.uniform_below(4);
    const std::size_t c = rng.uniform_below((n - 5) / 2 + 1);
    const std::size_t l = 1 + rng.uniform_below(std::min<std::size_t>(3, n - 2 * c - 3));

    std::vector<WeightVector> w(n, WeightVector(dim));
    for (auto& v : w) {
      for (double& x : v) x = rng.uniform_real() * 2.0 - 1.0;
    }
    std::vector<PackedWeights> packed(n);
    for (std::size_t i = 0; i < n; ++i) {
      packed[i] = pack_and_encrypt(ctx, w[i], f.keys.pk, rng);
    }
    const EncryptedDistanceMatrix matrix =
        build_distance_matrix(ctx, packed, f.keys.relin, plan,
                              DistanceMode::per_pair, f.keys.rotations, options);
    const DistanceTable table = table_from_matrix(ctx, matrix, f.keys.sk);

    std::vector<std::vector<double>> exact(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double diff = w[i][k] - w[j][k];
          acc += diff * diff;
        }
        exact[i][j] = exact[j][i] = acc;
      }
    }

    if (krum_select(table, c).selected[0] != oracle::krum(exact, c)) ++mismatches;
    if (multi_krum_select(table, c, l).selected != oracle::multi_krum(exact, c, l)) {
      ++mismatches;
    }
    if (median_select(table).selected[0] != oracle::median(exact)) ++mismatches;
  }

  CheckOutcome out;
  out.passed = mismatches == 0;
  out.detail = "rule mismatches " + std::to_string(mismatches) +
               "/300 across 100 scenarios";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Pipeline equivalence: encrypted and plaintext federated runs land on
//    the same weights at a 62k-parameter logistic model.

CheckOutcome criterion_model_equivalence() {
  ExperimentConfig cfg;
  cfg.model_kind = ModelKind::logistic;
  cfg.data_dim = 6199;
  cfg.data_classes = 10;
  cfg.samples = 1200;
  cfg.separation = 4.0;
  cfg.noise = 1.0;
  cfg.clients = 10;
  cfg.byzantine = 0;
  cfg.rule = SelectionRule::krum;
  cfg.hoisting = HoistMode::off;
  cfg.slot_sum_at_kgc = true;
  cfg.training.max_rounds = 20;
  cfg.training.patience = 100;
  cfg.training.seed = 42;

  const ModelSpec spec{ModelKind::logistic, cfg.data_dim, cfg.data_classes, 0};
  const std::size_t parameters = spec.parameter_count();

  const ExperimentResult enc = run_experiment(cfg, false);
  const PlainResult plain =
      run_plaintext_experiment(cfg, PlainAggregate::rule_based);

  bool selections_match = enc.rounds == plain.rounds_run;
  for (std::size_t t = 0; selections_match && t < enc.transcripts.size(); ++t) {
    selections_match = enc.transcripts[t].selected == plain.rounds[t].selected;
  }
  double gap = 0.0;
  for (std::size_t j = 0; j < enc.final_weights.size(); ++j) {
    gap = std::max(gap, std::abs(enc.final_weights[j] - plain.weights[j]));
  }

  CheckOutcome out;
  out.passed = selections_match && gap < 1e-3 && enc.rounds == 20;
  out.detail = std::to_string(parameters) + " parameters, " +
               std::to_string(enc.rounds) + " rounds, weight gap " + fmt(gap) +
               " (bound 0.001), selections " +
               (selections_match ? "identical" : "DIVERGED") +
               ", accuracy enc " + fmt(enc.final_accuracy) + " plain " +
               fmt(plain.accuracy);
  return out;
}

// ---------------------------------------------------------------------------
// 6. Robustness: one scaled attacker cannot move krum, but wrecks the mean.

CheckOutcome criterion_robustness() {
  ExperimentConfig base;
  base.data_dim = 20;
  base.data_classes = 2;
  base.samples = 2000;
  base.separation = 3.0;
  base.noise = 1.0;
  base.clients = 10;
  base.rule = SelectionRule::krum;
  base.hoisting = HoistMode::off;
  base.slot_sum_at_kgc = true;
  base.training.max_rounds = 10;
  base.training.patience = 100;

  double clean_sum = 0.0, krum_sum = 0.0, mean_sum = 0.0;
  std::size_t attacker_selected = 0, selections = 0;
  const int kSeeds = 20;
  for (int s = 0; s < kSeeds; ++s) {
    ExperimentConfig clean = base;
    clean.training.seed = 1000 + s;
    clean_sum += run_plaintext_experiment(clean, PlainAggregate::rule_based).accuracy;

    ExperimentConfig attacked = clean;
    attacked.byzantine = 1;
    attacked.attack.kind = AttackKind::untargeted_scale;
    attacked.attack.lambda = 10.0;
    attacked.attack.ratio = 0.1;
    const ExperimentResult enc = run_experiment(attacked, false);
    krum_sum += enc.final_accuracy;
    for (const RoundTranscript& tr : enc.transcripts) {
      for (std::size_t idx : tr.selected) {
        ++selections;
        if (enc.malicious[idx]) ++attacker_selected;
      }
    }
    mean_sum += run_plaintext_experiment(attacked, PlainAggregate::mean_all).accuracy;
  }
  const double clean = clean_sum / kSeeds;
  const double krum = krum_sum / kSeeds;
  const double mean = mean_sum / kSeeds;

  CheckOutcome out;
  out.passed = std::abs(krum - clean) <= 0.02 && krum - mean >= 0.15 &&
               attacker_selected == 0;
  out.detail = "mean accuracy over 20 seeds: clean " + fmt(clean) +
               ", krum under attack " + fmt(krum) + ", mean-aggregation under attack " +
               fmt(mean) + "; attacker picked " + std::to_string(attacker_selected) +
               "/" + std::to_string(selections) + " times";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Packing structure: chunk counts follow ceil(P / slots) and shrink as
//    the ring grows.

CheckOutcome criterion_packing() {
  const std::size_t P = 61706;
  const std::size_t degrees[] = {8192, 16384, 32768};
  std::string listing;
  bool ok = true;
  std::size_t previous = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    CkksParams params;
    params.ring_degree = degrees[i];
    params.validate();  // must clear the security budget at depth 3
    const std::size_t slots = degrees[i] / 2;
    const std::size_t chunks = chunk_count_for(P, slots);
    if (chunks != (P + slots - 1) / slots) ok = false;
    if (i > 0 && chunks >= previous) ok = false;
    previous = chunks;
    if (i) listing += ", ";
    listing += "N=" + std::to_string(degrees[i]) + " -> " + std::to_string(chunks);
  }
  return {ok, "P=61706 chunk counts strictly decrease: " + listing};
}

// ---------------------------------------------------------------------------
// 8. Privacy shape: everything addressed to the server is ciphertext, and
//    the auditor actually catches a plaintext leak.

CheckOutcome criterion_privacy_shape() {
  static_assert(is_encrypted_payload_v<ClientUpdateMsg>);
  static_assert(is_encrypted_payload_v<DistanceMatrixMsg>);
  static_assert(is_encrypted_payload_v<MaskMsg>);
  static_assert(is_encrypted_payload_v<AggregateMsg>);
  static_assert(!is_encrypted_payload_v<GlobalModelMsg>);

  ExperimentConfig cfg;
  cfg.params = tiny_params(2048);
  cfg.data_dim = 8;
  cfg.data_classes = 2;
  cfg.samples = 200;
  cfg.clients = 4;
  cfg.byzantine = 0;
  cfg.rule = SelectionRule::krum;
  cfg.hoisting = HoistMode::off;
  cfg.training.max_rounds = 2;
  cfg.training.patience = 100;
  cfg.training.seed = 7;

  const ExperimentResult res = run_experiment(cfg, false);
  const std::vector<std::string> clean = audit_privacy(res.log);

  std::size_t to_server = 0, encrypted_to_server = 0;
  for (const MessageRecord& r : res.log.records()) {
    if (r.to == Party::server) {
      ++to_server;
      if (r.encrypted_payload) ++encrypted_to_server;
    }
  }

  MessageLog tampered = res.log;
  tampered.record({Party::client, Party::server, "raw-weights", false, 64});
  const std::vector<std::string> caught = audit_privacy(tampered);

  CheckOutcome out;
  out.passed = clean.empty() && to_server > 0 &&
               encrypted_to_server == to_server && caught.size() == 1;
  out.detail = std::to_string(to_server) + " server-bound messages, all ciphertext; " +
               "clean audit " + (clean.empty() ? "empty" : "NON-EMPTY") +
               "; injected plaintext leak flagged " + std::to_string(caught.size()) +
               " time(s)";
  return out;
}

}  // namespace

std::vector<CriterionResult> run_selftest(const std::vector<int>& only) {
  struct Entry {
    int index;
    const char* name;
    CheckOutcome (*fn)();
  };
  const Entry entries[] = {
      {1, "scheme-correctness", criterion_ckks_correctness},
      {2, "lazy-relinearization", criterion_lazy_relin},
      {3, "rotation-hoisting", criterion_hoisting},
      {4, "selection-equivalence", criterion_selection_equivalence},
      {5, "pipeline-equivalence", criterion_model_equivalence},
      {6, "byzantine-robustness", criterion_robustness},
      {7, "packing-structure", criterion_packing},
      {8, "privacy-shape", criterion_privacy_shape},
  };

  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), e.index) == only.end()) {
      continue;
    }
    CriterionResult r;
    r.index = e.index;
    r.name = e.name;
    const auto start = Clock::now();
    try {
      const CheckOutcome outcome = e.fn();
      r.passed = outcome.passed;
      r.detail = outcome.detail;
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = seconds_since(start);
    results.push_back(std::move(r));
  }
  return results;
}

int selftest_main(const std::vector<int>& only) {
  const std::vector<CriterionResult> results = run_selftest(only);
  bool all = !results.empty();
  for (const CriterionResult& r : results) {
    std::printf("[%s] criterion %d: %s (%.1fs) %s\n",
                r.passed ? "PASS" : "FAIL", r.index, r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.passed) all = false;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}

}  // namespace lancelot
