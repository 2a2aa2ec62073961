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

// Three-entity federated round engine. Clients train and encrypt; the
// server computes encrypted pairwise distances and the masked aggregate;
// the key holder (KGC) decrypts distances, selects, and returns an
// encrypted mask. Everything that crosses an entity boundary is a message
// below, and everything addressed to the server is ciphertext-only.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "lancelot/aggregation.hpp"
#include "lancelot/ckks.hpp"
#include "lancelot/data.hpp"
#include "lancelot/distance.hpp"
#include "lancelot/model.hpp"

namespace lancelot {

enum class Party { client, server, kgc };
std::string party_name(Party p);

enum class AttackKind { none, label_flip, untargeted_scale, targeted };
std::string attack_name(AttackKind kind);

struct AttackConfig {
  AttackKind kind = AttackKind::none;
  double ratio = 0.0;  // byzantine fraction, must stay below 1/2
  double lambda = 10.0;
  std::int32_t source_class = 0;
  std::int32_t target_class = 1;
  void validate() const;
};

struct TrainingConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  std::size_t local_epochs = 5;
  std::size_t max_rounds = 200;
  std::size_t patience = 8;
  std::uint64_t seed = 1;
  double divergence_tolerance = 1e-3;
  void validate() const;
};

struct ExperimentConfig {
  CkksParams params;

  ModelKind model_kind = ModelKind::logistic;
  std::size_t hidden = 32;  // mlp only

  std::size_t clients = 10;
  std::size_t byzantine = 0;
  SelectionRule rule = SelectionRule::krum;
  std::size_t l = 1;

  AttackConfig attack;
  TrainingConfig training;

  HoistMode hoisting = HoistMode::off;
  bool lazy_relin = true;
  DistanceMode distance_mode = DistanceMode::per_pair;
  bool sumdis_score = false;
  bool slot_sum_at_kgc = false;  // leave slot totals for the key holder
  bool redact_kgc = false;       // drop KGC-side plaintext from transcripts
  double memory_budget_mb = 1024.0;

  std::size_t data_dim = 20;
  std::size_t data_classes = 2;
  std::size_t samples = 2000;
  double separation = 3.0;
  double noise = 1.0;
  double skew = 0.0;
  double validation_fraction = 0.2;
  std::string idx_images;  // optional on-disk data pair
  std::string idx_labels;

  std::string dump_dir;  // optional ciphertext dump directory

  void validate() const;
};

// Rejects rule/population pairs outside the convergence preconditions:
// krum and multi-krum need n >= 2c + 3, multi-krum additionally n - l > 2c + 2.
void validate_rule(SelectionRule rule, std::size_t n, std::size_t c,
                   std::size_t l);

// ---------------------------------------------------------------------------
// Messages. The payload of every server-bound message is serialized
// ciphertext bytes; the trait below is what the privacy checks key on.

struct ClientUpdateMsg {
  std::size_t client_id = 0;
  std::size_t dimension = 0;
  double prescale = 1.0;
  std::vector<std::vector<std::uint8_t>> chunks;
};

struct DistanceMatrixMsg {
  DistanceMode mode = DistanceMode::per_pair;
  std::size_t n = 0;
  bool reduced = true;
  double value_scale = 1.0;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint8_t>>>
      entries;
};

struct MaskMsg {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<std::vector<std::uint8_t>> rank_rows;
  std::vector<std::vector<std::uint8_t>> client_selectors;
};

struct AggregateMsg {
  std::size_t dimension = 0;
  double prescale = 1.0;
  std::vector<std::vector<std::uint8_t>> chunks;
};

struct GlobalModelMsg {
  WeightVector weights;
};

template <typename T>
struct is_encrypted_payload : std::false_type {};
template <>
struct is_encrypted_payload<ClientUpdateMsg> : std::true_type {};
template <>
struct is_encrypted_payload<DistanceMatrixMsg> : std::true_type {};
template <>
struct is_encrypted_payload<MaskMsg> : std::true_type {};
template <>
struct is_encrypted_payload<AggregateMsg> : std::true_type {};
template <typename T>
inline constexpr bool is_encrypted_payload_v = is_encrypted_payload<T>::value;

struct MessageRecord {
  Party from;
  Party to;
  std::string kind;
  bool encrypted_payload = false;
  std::size_t bytes = 0;
};

class MessageLog {
 public:
  void record(MessageRecord r) { records_.push_back(std::move(r)); }
  const std::vector<MessageRecord>& records() const { return records_; }
  void clear() { records_.clear(); }

 private:
  std::vector<MessageRecord> records_;
};

// Compile-time guard: a plaintext-payload message type addressed to the
// server does not build.
template <typename Msg>
void log_send_to_server(MessageLog& log, Party from, const char* kind,
                        std::size_t bytes) {
  static_assert(is_encrypted_payload_v<Msg>,
                "the server may only receive ciphertext payloads");
  log.record({from, Party::server, kind, true, bytes});
}

template <typename Msg>
void log_send(MessageLog& log, Party from, Party to, const char* kind,
              std::size_t bytes) {
  log.record({from, to, kind, is_encrypted_payload_v<Msg>, bytes});
}

// Runtime audit: one violation string per message that breaks the
// information-flow rules (plaintext payload delivered to the server).
std::vector<std::string> audit_privacy(const MessageLog& log);

// ---------------------------------------------------------------------------
// Entity states. The key holder is the only state carrying sk.

struct ClientState {
  std::size_t id = 0;
  Dataset data;
  WeightVector weights;
  bool malicious = false;
  PublicKey pk;
};

struct ServerState {
  RelinKey evk;
  RotationKeySet rotations;
  HoistPlan plan;
  DistanceOptions options;
  DistanceMode mode = DistanceMode::per_pair;
  std::vector<PackedWeights> received;
  EncryptedDistanceMatrix pending;
};

struct KgcState {
  SecretKey sk;
  PublicKey pk;
  SortRoundOptions rule;
};

struct PhaseTimes {
  double train = 0.0;
  double encrypt = 0.0;
  double distance = 0.0;
  double sort = 0.0;
  double aggregate = 0.0;
  double decrypt = 0.0;
};

struct RoundTranscript {
  std::size_t round = 0;
  std::vector<std::size_t> selected;
  PhaseTimes seconds;
  OpCounts ops;
  double validation_accuracy = 0.0;
  DistanceTable kgc_table;          // empty when redacted or unavailable
  std::vector<double> kgc_totals;   // empty when redacted
};

// Data, shards, model shape and the shared initial weights; both the
// encrypted pipeline and its plaintext twin consume the same setup.
struct ExperimentSetup {
  Dataset train;
  Dataset validation;
  std::vector<Dataset> shards;
  ModelSpec spec;
  WeightVector w0;
  std::vector<bool> malicious;
};

ExperimentSetup make_setup(const ExperimentConfig& cfg);

struct Calibration {
  double t_hoist = 0.0;      // marginal seconds per extra hoisted rotation
  double t_decompose = 0.0;  // seconds per decompose + first rotation
  double m_cipher = 0.0;     // bytes per ciphertext
};

Calibration calibrate(const CkksContext& ctx, const KeyBundle& keys,
                      Sampler& rng);

struct FlSystem {
  std::unique_ptr<CkksContext> ctx;
  KeyBundle keys;
  HoistPlan plan;
  Calibration calibration;  // filled when hoisting is chosen dynamically
};

// Builds the context, plans the rotation unfold for the given weight count
// and distributes key material (calibrating first in dynamic mode).
FlSystem make_system(const ExperimentConfig& cfg, std::size_t parameter_count);

WeightVector client_local_update(const ClientState& c,
                                 const WeightVector& global,
                                 const ModelSpec& spec,
                                 const TrainingConfig& cfg,
                                 std::uint64_t update_seed);

WeightVector inject_attack(const ClientState& c, const AttackConfig& atk,
                           const WeightVector& honest_update,
                           const ModelSpec& spec, const TrainingConfig& cfg,
                           std::uint64_t update_seed);

// One full round, steps 1 through 9. Entity states are only mutated on
// success; any typed error leaves clients, server and kgc untouched.
RoundTranscript run_round(std::vector<ClientState>& clients,
                          ServerState& server, KgcState& kgc,
                          const FlSystem& system, const ExperimentConfig& cfg,
                          const ModelSpec& spec, const Dataset& validation,
                          std::size_t round, MessageLog& log);

struct ExperimentResult {
  std::vector<RoundTranscript> transcripts;
  WeightVector final_weights;
  double final_accuracy = 0.0;
  WeightVector plaintext_weights;
  double plaintext_accuracy = 0.0;
  double divergence = 0.0;  // max-norm gap to the plaintext twin
  std::size_t rounds = 0;
  bool early_stopped = false;
  std::vector<bool> malicious;
  MessageLog log;
};

// Runs rounds until max_rounds or the early-stop patience trips, then runs
// the plaintext twin on the identical setup and reports the weight gap.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool run_plaintext_twin = true);

// ---------------------------------------------------------------------------
// Plaintext twin: same data, seeds, updates and rules, no encryption.

enum class PlainAggregate { rule_based, mean_all };

struct PlainRound {
  std::size_t round = 0;
  std::vector<std::size_t> selected;
  double validation_accuracy = 0.0;
  DistanceTable table;
};

struct PlainResult {
  std::vector<PlainRound> rounds;
  WeightVector weights;
  double accuracy = 0.0;
  std::size_t rounds_run = 0;
  bool early_stopped = false;
  std::vector<bool> malicious;
};

PlainResult run_plaintext_experiment(const ExperimentConfig& cfg,
                                     PlainAggregate aggregate);

}  // namespace lancelot
