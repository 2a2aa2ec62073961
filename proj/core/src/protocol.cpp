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

#include "lancelot/protocol.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "lancelot/errors.hpp"
#include "lancelot/threading.hpp"

namespace lancelot {

static_assert(is_encrypted_payload_v<ClientUpdateMsg>);
static_assert(is_encrypted_payload_v<DistanceMatrixMsg>);
static_assert(is_encrypted_payload_v<MaskMsg>);
static_assert(is_encrypted_payload_v<AggregateMsg>);
static_assert(!is_encrypted_payload_v<GlobalModelMsg>,
              "decrypted weights must never look like a server-safe payload");

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

// Seed derivation tags; disjoint high nibbles keep streams independent.
constexpr std::uint64_t kTagData = 1;
constexpr std::uint64_t kTagSplit = 2;
constexpr std::uint64_t kTagShards = 3;
constexpr std::uint64_t kTagInit = 4;
constexpr std::uint64_t kTagKeys = 5;
constexpr std::uint64_t kTagTmpKeys = 6;
constexpr std::uint64_t kTagCalib = 7;

std::uint64_t update_tag(std::size_t round, std::size_t client) {
  return 0x1000000000000000ULL + round * 65536ULL + client;
}
std::uint64_t encrypt_tag(std::size_t round, std::size_t client) {
  return 0x2000000000000000ULL + round * 65536ULL + client;
}
std::uint64_t mask_tag(std::size_t round) {
  return 0x3000000000000000ULL + round;
}

std::size_t payload_bytes(const std::vector<std::vector<std::uint8_t>>& v) {
  std::size_t total = 0;
  for (const auto& b : v) total += b.size();
  return total;
}

}  // namespace

std::string party_name(Party p) {
  switch (p) {
    case Party::client:
      return "client";
    case Party::server:
      return "server";
    case Party::kgc:
      return "kgc";
  }
  return "unknown";
}

std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::none:
      return "none";
    case AttackKind::label_flip:
      return "label-flip";
    case AttackKind::untargeted_scale:
      return "untargeted";
    case AttackKind::targeted:
      return "targeted";
  }
  return "unknown";
}

void AttackConfig::validate() const {
  if (ratio < 0.0 || ratio >= 0.5) {
    throw ParameterError("byzantine ratio must lie in [0, 1/2)");
  }
  if (lambda < 0.0) throw ParameterError("attack scale must be non-negative");
  if (source_class < 0 || target_class < 0) {
    throw ParameterError("attack classes must be non-negative");
  }
  if (kind == AttackKind::targeted && source_class == target_class) {
    throw ParameterError("targeted attack needs distinct classes");
  }
}

void TrainingConfig::validate() const {
  if (learning_rate <= 0.0) throw ParameterError("learning rate must be positive");
  if (batch_size == 0 || local_epochs == 0 || max_rounds == 0) {
    throw ParameterError("batch size, epochs and rounds must be positive");
  }
  if (divergence_tolerance <= 0.0) {
    throw ParameterError("divergence tolerance must be positive");
  }
}

void validate_rule(SelectionRule rule, std::size_t n, std::size_t c,
                   std::size_t l) {
  if (n < 3) throw ParameterError("need at least three clients");
  switch (rule) {
    case SelectionRule::krum:
      if (n <= 2 * c + 2) throw ParameterError("krum needs n >= 2c + 3");
      break;
    case SelectionRule::multi_krum:
      if (l < 1 || l > n) throw ParameterError("selection size outside 1..n");
      if (n - l <= 2 * c + 2) {
        throw ParameterError("multi-krum needs n - l > 2c + 2");
      }
      break;
    case SelectionRule::median:
      break;
  }
}

void ExperimentConfig::validate() const {
  params.validate();
  training.validate();
  attack.validate();
  if (clients < 3) throw ParameterError("need at least three clients");
  if (2 * byzantine >= clients) {
    throw ParameterError("byzantine count must stay below half the clients");
  }
  validate_rule(rule, clients, byzantine, l);
  if (idx_images.empty() != idx_labels.empty()) {
    throw ParameterError("idx data needs both an image and a label file");
  }
  if (idx_images.empty()) {
    if (data_dim == 0 || data_classes < 2 || samples < clients) {
      throw ParameterError("synthetic data needs dim >= 1, classes >= 2, samples >= clients");
    }
  }
  if (model_kind == ModelKind::mlp && hidden == 0) {
    throw ParameterError("mlp needs a hidden width");
  }
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
    throw ParameterError("validation fraction must lie in (0, 1)");
  }
  if (memory_budget_mb <= 0.0) {
    throw ParameterError("memory budget must be positive");
  }
}

std::vector<std::string> audit_privacy(const MessageLog& log) {
  std::vector<std::string> violations;
  for (const MessageRecord& r : log.records()) {
    if (r.to == Party::server && !r.encrypted_payload) {
      violations.push_back("plaintext payload '" + r.kind + "' from " +
                           party_name(r.from) + " reached the server");
    }
  }
  return violations;
}

ExperimentSetup make_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t seed = cfg.training.seed;

  Dataset all;
  if (!cfg.idx_images.empty()) {
    all = load_idx(cfg.idx_images, cfg.idx_labels);
  } else {
    Sampler data_rng(derive_seed(seed, kTagData));
    all = make_gaussian_mixture(cfg.data_dim, cfg.data_classes, cfg.samples,
                                cfg.separation, cfg.noise, data_rng);
  }
  if (cfg.attack.kind == AttackKind::targeted &&
      (static_cast<std::size_t>(cfg.attack.source_class) >= all.classes ||
       static_cast<std::size_t>(cfg.attack.target_class) >= all.classes)) {
    throw ParameterError("attack classes outside the label range");
  }

  ExperimentSetup setup;
  Sampler split_rng(derive_seed(seed, kTagSplit));
  std::tie(setup.train, setup.validation) =
      train_validation_split(all, cfg.validation_fraction, split_rng);

  Sampler shard_rng(derive_seed(seed, kTagShards));
  setup.shards =
      partition_quantity_skew(setup.train, cfg.clients, cfg.skew, shard_rng);

  setup.spec.kind = cfg.model_kind;
  setup.spec.input_dim = all.dim;
  setup.spec.classes = all.classes;
  setup.spec.hidden = cfg.hidden;
  setup.spec.validate();

  Sampler init_rng(derive_seed(seed, kTagInit));
  setup.w0 = init_weights(setup.spec, init_rng);

  setup.malicious.assign(cfg.clients, false);
  for (std::size_t i = cfg.clients - cfg.byzantine; i < cfg.clients; ++i) {
    setup.malicious[i] = true;
  }
  return setup;
}

Calibration calibrate(const CkksContext& ctx, const KeyBundle& keys,
                      Sampler& rng) {
  if (!keys.rotations.has_step(1) || !keys.rotations.has_step(2)) {
    throw KeyError("calibration needs rotation keys for steps 1 and 2");
  }
  std::vector<double> values(ctx.slot_count(), 0.5);
  const Ciphertext ct = ctx.encrypt(ctx.encode(values), keys.pk, rng);

  auto median_time = [&](const std::vector<std::size_t>& steps) {
    std::vector<double> times;
    times.reserve(11);
    for (int rep = 0; rep < 11; ++rep) {
      const auto a = Clock::now();
      (void)ctx.hoisted_rotations(ct, steps, keys.rotations);
      times.push_back(seconds_between(a, Clock::now()));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };

  // One-step batch prices decompose + one application; the two-step batch
  // adds exactly one more application on the shared decomposition.
  const double t1 = median_time({1});
  const double t2 = median_time({1, 2});
  Calibration out;
  out.t_hoist = std::max(t1, 1e-9);
  out.t_decompose = std::max(t2 - t1, 1e-9);
  out.m_cipher = static_cast<double>(ct.size_bytes());
  return out;
}

FlSystem make_system(const ExperimentConfig& cfg,
                     std::size_t parameter_count) {
  if (parameter_count == 0) throw ParameterError("empty model");
  FlSystem sys;
  sys.ctx = std::make_unique<CkksContext>(cfg.params);
  const std::size_t width =
      std::bit_ceil(std::min(parameter_count, sys.ctx->slot_count()));
  const std::uint64_t seed = cfg.training.seed;

  if (cfg.hoisting == HoistMode::dynamic_lp) {
    Sampler tmp_rng(derive_seed(seed, kTagTmpKeys));
    const KeyBundle probe = sys.ctx->generate_keys(tmp_rng, {1, 2});
    Sampler calib_rng(derive_seed(seed, kTagCalib));
    sys.calibration = calibrate(*sys.ctx, probe, calib_rng);
    sys.plan = plan_unfold(sys.calibration.t_hoist, sys.calibration.t_decompose,
                           sys.calibration.m_cipher,
                           cfg.memory_budget_mb * 1048576.0, width);
  } else {
    sys.plan = fixed_plan(cfg.hoisting, width);
  }

  std::vector<std::size_t> steps;
  if (!cfg.slot_sum_at_kgc) steps = slot_reduce_steps(width, sys.plan.k);
  if (steps.size() > 512) {
    throw CapacityError(
        "unfold plan needs " + std::to_string(steps.size()) +
        " rotation keys; use a smaller unfold, iterative reduction, or a "
        "tighter memory budget");
  }
  Sampler key_rng(derive_seed(seed, kTagKeys));
  sys.keys = sys.ctx->generate_keys(key_rng, steps);
  return sys;
}

WeightVector client_local_update(const ClientState& c,
                                 const WeightVector& global,
                                 const ModelSpec& spec,
                                 const TrainingConfig& cfg,
                                 std::uint64_t update_seed) {
  if (c.data.size() == 0) throw DataError("client has no training data");
  Sampler rng(update_seed);
  return sgd_train(spec, global, c.data, cfg.learning_rate, cfg.batch_size,
                   cfg.local_epochs, rng);
}

namespace {

Dataset relabel(const Dataset& data, AttackKind kind, std::int32_t source,
                std::int32_t target) {
  Dataset out = data;
  for (std::int32_t& y : out.labels) {
    if (kind == AttackKind::label_flip) {
      y = static_cast<std::int32_t>((y + 1) % static_cast<std::int32_t>(out.classes));
    } else if (y == source) {
      y = target;
    }
  }
  return out;
}

}  // namespace

WeightVector inject_attack(const ClientState& c, const AttackConfig& atk,
                           const WeightVector& honest_update,
                           const ModelSpec& spec, const TrainingConfig& cfg,
                           std::uint64_t update_seed) {
  switch (atk.kind) {
    case AttackKind::none:
      return honest_update;
    case AttackKind::untargeted_scale: {
      // Walk away from the honest direction, scaled from the global model.
      WeightVector w(c.weights.size());
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = c.weights[j] - atk.lambda * (honest_update[j] - c.weights[j]);
      }
      return w;
    }
    case AttackKind::label_flip:
    case AttackKind::targeted: {
      const Dataset poisoned =
          relabel(c.data, atk.kind, atk.source_class, atk.target_class);
      Sampler rng(update_seed);
      return sgd_train(spec, c.weights, poisoned, cfg.learning_rate,
                       cfg.batch_size, cfg.local_epochs, rng);
    }
  }
  throw ParameterError("unknown attack kind");
}

namespace {

void dump_round_ciphertexts(const std::string& dir, std::size_t round,
                            const std::vector<ClientUpdateMsg>& msgs) {
  std::filesystem::create_directories(dir);
  char name[96];
  for (const ClientUpdateMsg& m : msgs) {
    for (std::size_t ch = 0; ch < m.chunks.size(); ++ch) {
      std::snprintf(name, sizeof(name), "round_%03zu_client_%02zu_chunk_%03zu.lclt",
                    round, m.client_id, ch);
      std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
      if (!out) throw DataError("cannot write ciphertext dump");
      out.write(reinterpret_cast<const char*>(m.chunks[ch].data()),
                static_cast<std::streamsize>(m.chunks[ch].size()));
    }
  }
}

}  // namespace

RoundTranscript run_round(std::vector<ClientState>& clients,
                          ServerState& server, KgcState& kgc,
                          const FlSystem& system, const ExperimentConfig& cfg,
                          const ModelSpec& spec, const Dataset& validation,
                          std::size_t round, MessageLog& log) {
  if (clients.size() < 3) throw ParameterError("need at least three clients");
  const CkksContext& ctx = *system.ctx;
  const std::size_t n = clients.size();
  const std::uint64_t seed = cfg.training.seed;

  RoundTranscript tr;
  tr.round = round;
  const OpCounts before = ctx.counters().snapshot();
  MessageLog staged;  // spliced into `log` only when the round commits

  // Steps 1 and 2: local training (with any attack), then pack and encrypt.
  const auto t_start = Clock::now();
  std::vector<WeightVector> updates(n);
  parallel_for(n, [&](std::size_t i) {
    const std::uint64_t us = derive_seed(seed, update_tag(round, i));
    WeightVector honest =
        client_local_update(clients[i], clients[i].weights, spec,
                            cfg.training, us);
    updates[i] = clients[i].malicious
                     ? inject_attack(clients[i], cfg.attack, honest, spec,
                                     cfg.training, us)
                     : std::move(honest);
  });
  const auto t_trained = Clock::now();
  tr.seconds.train = seconds_between(t_start, t_trained);

  const double prescale =
      distance_prescale(spec.parameter_count(), ctx.params().message_bound);
  std::vector<ClientUpdateMsg> msgs(n);
  parallel_for(n, [&](std::size_t i) {
    Sampler enc_rng(derive_seed(seed, encrypt_tag(round, i)));
    const PackedWeights pw =
        pack_and_encrypt(ctx, updates[i], clients[i].pk, enc_rng, prescale);
    ClientUpdateMsg m;
    m.client_id = i;
    m.dimension = pw.dimension;
    m.prescale = pw.prescale;
    m.chunks.reserve(pw.chunks.size());
    for (const Ciphertext& ct : pw.chunks) m.chunks.push_back(ctx.serialize(ct));
    msgs[i] = std::move(m);
  });
  const auto t_encrypted = Clock::now();
  tr.seconds.encrypt = seconds_between(t_trained, t_encrypted);
  for (const ClientUpdateMsg& m : msgs) {
    log_send_to_server<ClientUpdateMsg>(staged, Party::client, "client-update",
                                        payload_bytes(m.chunks));
  }
  if (!cfg.dump_dir.empty()) dump_round_ciphertexts(cfg.dump_dir, round, msgs);

  // Step 3: the server rebuilds ciphertexts and evaluates pairwise distances.
  std::vector<PackedWeights> received(n);
  for (std::size_t i = 0; i < n; ++i) {
    PackedWeights pw;
    pw.dimension = msgs[i].dimension;
    pw.prescale = msgs[i].prescale;
    pw.chunks.reserve(msgs[i].chunks.size());
    for (const auto& bytes : msgs[i].chunks) {
      pw.chunks.push_back(ctx.deserialize(bytes.data(), bytes.size()));
    }
    received[i] = std::move(pw);
  }
  EncryptedDistanceMatrix matrix =
      build_distance_matrix(ctx, received, server.evk, server.plan,
                            server.mode, server.rotations, server.options);
  const auto t_distance = Clock::now();
  tr.seconds.distance = seconds_between(t_encrypted, t_distance);

  // Step 4: matrix travels to the key holder.
  DistanceMatrixMsg dm;
  dm.mode = matrix.mode;
  dm.n = matrix.n;
  dm.reduced = matrix.reduced;
  dm.value_scale = matrix.value_scale;
  std::size_t dm_bytes = 0;
  for (const auto& [key, ct] : matrix.entries) {
    std::vector<std::uint8_t> bytes = ctx.serialize(ct);
    dm_bytes += bytes.size();
    dm.entries.emplace_back(static_cast<std::uint32_t>(key.first),
                            static_cast<std::uint32_t>(key.second),
                            std::move(bytes));
  }
  log_send<DistanceMatrixMsg>(staged, Party::server, Party::kgc,
                              "distance-matrix", dm_bytes);

  // Steps 5 to 7: decrypt, sort, select and answer with an encrypted mask.
  EncryptedDistanceMatrix at_kgc;
  at_kgc.mode = dm.mode;
  at_kgc.n = dm.n;
  at_kgc.reduced = dm.reduced;
  at_kgc.value_scale = dm.value_scale;
  for (const auto& [i, j, bytes] : dm.entries) {
    at_kgc.entries.emplace(std::make_pair(i, j),
                           ctx.deserialize(bytes.data(), bytes.size()));
  }
  Sampler mask_rng(derive_seed(seed, mask_tag(round)));
  const SortRoundResult sorted =
      masked_sort_round(ctx, at_kgc, kgc.sk, kgc.pk, mask_rng, kgc.rule);
  const auto t_sorted = Clock::now();
  tr.seconds.sort = seconds_between(t_distance, t_sorted);

  MaskMsg mm;
  mm.n = sorted.mask.n;
  mm.l = sorted.mask.l;
  for (const Ciphertext& ct : sorted.mask.rank_rows) {
    mm.rank_rows.push_back(ctx.serialize(ct));
  }
  for (const Ciphertext& ct : sorted.mask.client_selectors) {
    mm.client_selectors.push_back(ctx.serialize(ct));
  }
  log_send_to_server<MaskMsg>(
      staged, Party::kgc, "selection-mask",
      payload_bytes(mm.rank_rows) + payload_bytes(mm.client_selectors));

  // Step 8: masked aggregation on the server, result back to the key holder.
  SelectionMask mask;
  mask.n = mm.n;
  mask.l = mm.l;
  for (const auto& bytes : mm.rank_rows) {
    mask.rank_rows.push_back(ctx.deserialize(bytes.data(), bytes.size()));
  }
  for (const auto& bytes : mm.client_selectors) {
    mask.client_selectors.push_back(ctx.deserialize(bytes.data(), bytes.size()));
  }
  const PackedWeights aggregated =
      masked_aggregate(ctx, received, mask, cfg.rule, server.evk);
  AggregateMsg am;
  am.dimension = aggregated.dimension;
  am.prescale = aggregated.prescale;
  for (const Ciphertext& ct : aggregated.chunks) {
    am.chunks.push_back(ctx.serialize(ct));
  }
  log_send<AggregateMsg>(staged, Party::server, Party::kgc, "masked-aggregate",
                         payload_bytes(am.chunks));
  const auto t_aggregated = Clock::now();
  tr.seconds.aggregate = seconds_between(t_sorted, t_aggregated);

  // Step 9: the key holder decrypts and broadcasts the new global model.
  PackedWeights agg_at_kgc;
  agg_at_kgc.dimension = am.dimension;
  agg_at_kgc.prescale = am.prescale;
  for (const auto& bytes : am.chunks) {
    agg_at_kgc.chunks.push_back(ctx.deserialize(bytes.data(), bytes.size()));
  }
  WeightVector global = decrypt_weights(ctx, agg_at_kgc, kgc.sk);
  const auto t_decrypted = Clock::now();
  tr.seconds.decrypt = seconds_between(t_aggregated, t_decrypted);
  for (std::size_t i = 0; i < n; ++i) {
    log_send<GlobalModelMsg>(staged, Party::kgc, Party::client, "global-model",
                             global.size() * sizeof(double));
  }

  // Commit: no entity state changed before this point.
  for (ClientState& c : clients) c.weights = global;
  server.received = std::move(received);
  server.pending = std::move(matrix);
  for (const MessageRecord& r : staged.records()) log.record(r);

  tr.selected = sorted.selection.selected;
  if (!cfg.redact_kgc) {
    tr.kgc_table = sorted.table;
    tr.kgc_totals = sorted.totals;
  }
  tr.validation_accuracy = accuracy(spec, global, validation);
  tr.ops = ctx.counters().snapshot() - before;
  return tr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool run_plaintext_twin) {
  cfg.validate();
  const ExperimentSetup setup = make_setup(cfg);
  const FlSystem system = make_system(cfg, setup.spec.parameter_count());

  std::vector<ClientState> clients(cfg.clients);
  for (std::size_t i = 0; i < cfg.clients; ++i) {
    clients[i].id = i;
    clients[i].data = setup.shards[i];
    clients[i].weights = setup.w0;
    clients[i].malicious = setup.malicious[i];
    clients[i].pk = system.keys.pk;
  }
  ServerState server;
  server.evk = system.keys.relin;
  server.rotations = system.keys.rotations;
  server.plan = system.plan;
  server.options.lazy_relin = cfg.lazy_relin;
  server.options.reduce_on_server = !cfg.slot_sum_at_kgc;
  server.mode = cfg.distance_mode;
  KgcState kgc;
  kgc.sk = system.keys.sk;
  kgc.pk = system.keys.pk;
  kgc.rule.rule = cfg.rule;
  kgc.rule.c = cfg.byzantine;
  kgc.rule.l = cfg.l;
  kgc.rule.sumdis_score = cfg.sumdis_score;

  ExperimentResult res;
  res.malicious = setup.malicious;
  double best = -1.0;
  std::size_t stall = 0;
  for (std::size_t t = 0; t < cfg.training.max_rounds; ++t) {
    RoundTranscript tr = run_round(clients, server, kgc, system, cfg,
                                   setup.spec, setup.validation, t, res.log);
    const double acc = tr.validation_accuracy;
    res.transcripts.push_back(std::move(tr));
    ++res.rounds;
    if (acc > best + 1e-12) {
      best = acc;
      stall = 0;
    } else if (++stall >= cfg.training.patience) {
      res.early_stopped = true;
      break;
    }
  }
  res.final_weights = clients[0].weights;
  res.final_accuracy = res.transcripts.back().validation_accuracy;

  if (run_plaintext_twin) {
    const PlainResult plain =
        run_plaintext_experiment(cfg, PlainAggregate::rule_based);
    res.plaintext_weights = plain.weights;
    res.plaintext_accuracy = plain.accuracy;
    double gap = 0.0;
    for (std::size_t j = 0; j < res.final_weights.size(); ++j) {
      gap = std::max(gap, std::abs(res.final_weights[j] - plain.weights[j]));
    }
    res.divergence = gap;
  }
  return res;
}

PlainResult run_plaintext_experiment(const ExperimentConfig& cfg,
                                     PlainAggregate aggregate) {
  cfg.validate();
  const ExperimentSetup setup = make_setup(cfg);
  const std::size_t n = cfg.clients;
  const std::uint64_t seed = cfg.training.seed;

  PlainResult res;
  res.malicious = setup.malicious;
  WeightVector global = setup.w0;
  double best = -1.0;
  std::size_t stall = 0;

  std::vector<ClientState> shims(n);
  for (std::size_t i = 0; i < n; ++i) {
    shims[i].id = i;
    shims[i].data = setup.shards[i];
    shims[i].malicious = setup.malicious[i];
  }

  for (std::size_t t = 0; t < cfg.training.max_rounds; ++t) {
    std::vector<WeightVector> updates(n);
    parallel_for(n, [&](std::size_t i) {
      shims[i].weights = global;
      const std::uint64_t us = derive_seed(seed, update_tag(t, i));
      WeightVector honest = client_local_update(shims[i], global, setup.spec,
                                                cfg.training, us);
      updates[i] = shims[i].malicious
                       ? inject_attack(shims[i], cfg.attack, honest,
                                       setup.spec, cfg.training, us)
                       : std::move(honest);
    });

    PlainRound round;
    round.round = t;
    if (aggregate == PlainAggregate::mean_all) {
      WeightVector mean(updates[0].size(), 0.0);
      for (const WeightVector& u : updates) {
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += u[j];
      }
      for (double& v : mean) v /= static_cast<double>(n);
      global = std::move(mean);
    } else {
      DistanceTable table;
      table.n = n;
      table.d.assign(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double acc = 0.0;
          for (std::size_t k = 0; k < updates[i].size(); ++k) {
            const double diff = updates[i][k] - updates[j][k];
            acc += diff * diff;
          }
          table.d[i][j] = table.d[j][i] = acc;
        }
      }
      SelectionResult sel;
      if (cfg.sumdis_score || cfg.distance_mode == DistanceMode::row_sums) {
        std::vector<double> totals(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          totals[i] = std::accumulate(table.d[i].begin(), table.d[i].end(), 0.0);
        }
        sel = select_by_totals(totals, cfg.rule, cfg.l);
      } else if (cfg.rule == SelectionRule::krum) {
        sel = krum_select(table, cfg.byzantine);
      } else if (cfg.rule == SelectionRule::multi_krum) {
        sel = multi_krum_select(table, cfg.byzantine, cfg.l);
      } else {
        sel = median_select(table);
      }
      WeightVector next(updates[0].size(), 0.0);
      for (std::size_t idx : sel.selected) {
        for (std::size_t j = 0; j < next.size(); ++j) next[j] += updates[idx][j];
      }
      for (double& v : next) v /= static_cast<double>(sel.selected.size());
      global = std::move(next);
      round.selected = sel.selected;
      round.table = std::move(table);
    }

    round.validation_accuracy = accuracy(setup.spec, global, setup.validation);
    const double acc = round.validation_accuracy;
    res.rounds.push_back(std::move(round));
    ++res.rounds_run;
    if (acc > best + 1e-12) {
      best = acc;
      stall = 0;
    } else if (++stall >= cfg.training.patience) {
      res.early_stopped = true;
      break;
    }
  }
  res.weights = std::move(global);
  res.accuracy = res.rounds.back().validation_accuracy;
  return res;
}

}  // namespace lancelot
