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

#include "lancelot/cli.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lancelot/errors.hpp"
#include "lancelot/protocol.hpp"
#include "lancelot/report.hpp"
#include "lancelot/selftest.hpp"

namespace lancelot {

namespace {

struct CliOptions {
  std::string rule = "krum";
  std::size_t clients = 10;
  std::size_t byzantine = 0;
  std::size_t l = 1;
  std::string attack = "none";
  double lambda = 10.0;
  std::int32_t source_class = 0;
  std::int32_t target_class = 1;

  std::size_t ring_degree = 8192;
  std::size_t depth = 3;
  std::size_t scale_bits = 40;
  std::string lazy = "on";
  std::string hoisting = "off";
  double memory_budget = 1024.0;

  std::size_t rounds = 20;
  std::uint64_t seed = 1;
  std::string report_path;
  std::string format = "csv";
  bool slot_sum_at_kgc = false;
  bool sumdis_score = false;
  bool redact_kgc = false;
  bool row_sums = false;
  std::string dump_dir;
  std::string config_path;

  std::string model = "logistic";
  std::size_t hidden = 32;
  std::size_t data_dim = 20;
  std::size_t data_classes = 2;
  std::size_t samples = 2000;
  double separation = 3.0;
  double noise = 1.0;
  double skew = 0.0;
  double validation_fraction = 0.2;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  std::size_t local_epochs = 5;
  std::size_t patience = 8;
  std::string idx_images;
  std::string idx_labels;

  std::string toggle;                // ablate
  std::size_t repetitions = 3;       // ablate
  std::size_t dimension = 61706;     // ablate and calibrate workload size
  std::vector<std::size_t> degrees;  // ablate ring sweep
  std::vector<int> only;             // selftest filter
};

SelectionRule rule_from_name(const std::string& name) {
  if (name == "krum") return SelectionRule::krum;
  if (name == "multi-krum") return SelectionRule::multi_krum;
  if (name == "median") return SelectionRule::median;
  throw UsageError("unknown rule: " + name);
}

AttackKind attack_from_name(const std::string& name) {
  if (name == "none") return AttackKind::none;
  if (name == "label-flip") return AttackKind::label_flip;
  if (name == "untargeted") return AttackKind::untargeted_scale;
  if (name == "targeted") return AttackKind::targeted;
  throw UsageError("unknown attack: " + name);
}

HoistMode hoist_from_name(const std::string& name) {
  if (name == "off") return HoistMode::off;
  if (name == "full") return HoistMode::full;
  if (name == "dynamic") return HoistMode::dynamic_lp;
  throw UsageError("unknown hoisting mode: " + name);
}

std::string hoist_name(HoistMode mode) {
  switch (mode) {
    case HoistMode::off:
      return "off";
    case HoistMode::full:
      return "full";
    case HoistMode::dynamic_lp:
      return "dynamic";
  }
  return "unknown";
}

ExperimentConfig to_config(const CliOptions& o) {
  ExperimentConfig cfg;
  cfg.params.ring_degree = o.ring_degree;
  cfg.params.depth = o.depth;
  cfg.params.scale_bits = o.scale_bits;

  cfg.model_kind = o.model == "mlp" ? ModelKind::mlp : ModelKind::logistic;
  if (o.model != "mlp" && o.model != "logistic") {
    throw UsageError("unknown model: " + o.model);
  }
  cfg.hidden = o.hidden;

  cfg.clients = o.clients;
  cfg.byzantine = o.byzantine;
  cfg.rule = rule_from_name(o.rule);
  cfg.l = o.l;

  cfg.attack.kind = attack_from_name(o.attack);
  cfg.attack.ratio = o.clients ? static_cast<double>(o.byzantine) / o.clients : 0.0;
  cfg.attack.lambda = o.lambda;
  cfg.attack.source_class = o.source_class;
  cfg.attack.target_class = o.target_class;

  cfg.training.learning_rate = o.learning_rate;
  cfg.training.batch_size = o.batch_size;
  cfg.training.local_epochs = o.local_epochs;
  cfg.training.max_rounds = o.rounds;
  cfg.training.patience = o.patience;
  cfg.training.seed = o.seed;

  cfg.hoisting = hoist_from_name(o.hoisting);
  cfg.lazy_relin = o.lazy == "on";
  cfg.distance_mode = o.row_sums ? DistanceMode::row_sums : DistanceMode::per_pair;
  cfg.sumdis_score = o.sumdis_score;
  cfg.slot_sum_at_kgc = o.slot_sum_at_kgc;
  cfg.redact_kgc = o.redact_kgc;
  cfg.memory_budget_mb = o.memory_budget;

  cfg.data_dim = o.data_dim;
  cfg.data_classes = o.data_classes;
  cfg.samples = o.samples;
  cfg.separation = o.separation;
  cfg.noise = o.noise;
  cfg.skew = o.skew;
  cfg.validation_fraction = o.validation_fraction;
  cfg.idx_images = o.idx_images;
  cfg.idx_labels = o.idx_labels;
  cfg.dump_dir = o.dump_dir;
  return cfg;
}

void apply_json_config(const std::string& path, CliOptions& o) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config file: " + std::string(e.what()));
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "rule") o.rule = value.get<std::string>();
      else if (key == "clients") o.clients = value.get<std::size_t>();
      else if (key == "byzantine") o.byzantine = value.get<std::size_t>();
      else if (key == "l") o.l = value.get<std::size_t>();
      else if (key == "attack") o.attack = value.get<std::string>();
      else if (key == "lambda") o.lambda = value.get<double>();
      else if (key == "source_class") o.source_class = value.get<std::int32_t>();
      else if (key == "target_class") o.target_class = value.get<std::int32_t>();
      else if (key == "ring_degree") o.ring_degree = value.get<std::size_t>();
      else if (key == "depth") o.depth = value.get<std::size_t>();
      else if (key == "scale_bits") o.scale_bits = value.get<std::size_t>();
      else if (key == "lazy_relin") o.lazy = value.get<bool>() ? "on" : "off";
      else if (key == "hoisting") o.hoisting = value.get<std::string>();
      else if (key == "memory_budget_mb") o.memory_budget = value.get<double>();
      else if (key == "rounds") o.rounds = value.get<std::size_t>();
      else if (key == "seed") o.seed = value.get<std::uint64_t>();
      else if (key == "slot_sum_at_kgc") o.slot_sum_at_kgc = value.get<bool>();
      else if (key == "sumdis_score") o.sumdis_score = value.get<bool>();
      else if (key == "redact_kgc") o.redact_kgc = value.get<bool>();
      else if (key == "row_sums") o.row_sums = value.get<bool>();
      else if (key == "dump_ciphertexts") o.dump_dir = value.get<std::string>();
      else if (key == "model") o.model = value.get<std::string>();
      else if (key == "hidden") o.hidden = value.get<std::size_t>();
      else if (key == "data_dim") o.data_dim = value.get<std::size_t>();
      else if (key == "data_classes") o.data_classes = value.get<std::size_t>();
      else if (key == "samples") o.samples = value.get<std::size_t>();
      else if (key == "separation") o.separation = value.get<double>();
      else if (key == "noise") o.noise = value.get<double>();
      else if (key == "skew") o.skew = value.get<double>();
      else if (key == "validation_fraction") o.validation_fraction = value.get<double>();
      else if (key == "learning_rate") o.learning_rate = value.get<double>();
      else if (key == "batch_size") o.batch_size = value.get<std::size_t>();
      else if (key == "local_epochs") o.local_epochs = value.get<std::size_t>();
      else if (key == "patience") o.patience = value.get<std::size_t>();
      else if (key == "idx_images") o.idx_images = value.get<std::string>();
      else if (key == "idx_labels") o.idx_labels = value.get<std::string>();
      else if (key == "report") o.report_path = value.get<std::string>();
      else if (key == "format") o.format = value.get<std::string>();
      else throw UsageError("unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config value: " + std::string(e.what()));
  }
}

std::string config_fingerprint(const ExperimentConfig& cfg,
                               std::size_t dimension) {
  std::string fp;
  fp += "N=" + std::to_string(cfg.params.ring_degree);
  fp += ";depth=" + std::to_string(cfg.params.depth);
  fp += ";scale=" + std::to_string(cfg.params.scale_bits);
  fp += ";rule=" + rule_name(cfg.rule);
  fp += ";clients=" + std::to_string(cfg.clients);
  fp += ";byzantine=" + std::to_string(cfg.byzantine);
  fp += ";l=" + std::to_string(cfg.l);
  fp += ";attack=" + attack_name(cfg.attack.kind);
  fp += ";lazy=" + std::string(cfg.lazy_relin ? "on" : "off");
  fp += ";hoist=" + hoist_name(cfg.hoisting);
  fp += ";budget=" + format_double(cfg.memory_budget_mb);
  fp += ";dim=" + std::to_string(dimension);
  fp += ";seed=" + std::to_string(cfg.training.seed);
  return fp;
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

int cmd_experiment(const CliOptions& o) {
  const ExperimentConfig cfg = to_config(o);
  const ExperimentResult res = run_experiment(cfg, true);

  Report rep;
  rep.columns = {"round",       "selected",        "accuracy",
                 "t_train",     "t_encrypt",       "t_distance",
                 "t_sort",      "t_aggregate",     "t_decrypt",
                 "encryptions", "additions",       "multiplications",
                 "relinearizations", "rescales",   "rotations",
                 "mod_ups"};
  for (const RoundTranscript& tr : res.transcripts) {
    rep.add_row({std::to_string(tr.round), join_indices(tr.selected),
                 format_double(tr.validation_accuracy),
                 format_double(tr.seconds.train), format_double(tr.seconds.encrypt),
                 format_double(tr.seconds.distance), format_double(tr.seconds.sort),
                 format_double(tr.seconds.aggregate), format_double(tr.seconds.decrypt),
                 std::to_string(tr.ops.encryptions), std::to_string(tr.ops.additions),
                 std::to_string(tr.ops.multiplications),
                 std::to_string(tr.ops.relinearizations),
                 std::to_string(tr.ops.rescales), std::to_string(tr.ops.rotations),
                 std::to_string(tr.ops.mod_ups)});
    std::printf("round %zu: accuracy %.4f selected [%s]\n", tr.round,
                tr.validation_accuracy, join_indices(tr.selected).c_str());
  }
  std::printf(
      "final: rounds=%zu accuracy=%.4f plaintext_accuracy=%.4f "
      "divergence=%.3g early_stop=%s\n",
      res.rounds, res.final_accuracy, res.plaintext_accuracy, res.divergence,
      res.early_stopped ? "yes" : "no");
  if (!o.report_path.empty()) {
    write_report(rep, o.report_path, report_format_from_name(o.format));
    std::printf("report written to %s\n", o.report_path.c_str());
  }
  return 0;
}

struct AblationRow {
  std::string variant;
  ExperimentConfig cfg;
  std::size_t plan_k = 0;
  Calibration calibration;
  bool calibrated = false;
  double median_seconds = 0.0;
  OpCounts ops;
  std::size_t chunks = 0;
};

AblationRow measure_distance_phase(const ExperimentConfig& cfg,
                                   const std::string& variant,
                                   std::size_t dimension, std::size_t clients,
                                   std::size_t repetitions) {
  AblationRow row;
  row.variant = variant;
  row.cfg = cfg;

  const FlSystem sys = make_system(cfg, dimension);
  const CkksContext& ctx = *sys.ctx;
  row.plan_k = sys.plan.k;
  row.calibration = sys.calibration;
  row.calibrated = cfg.hoisting == HoistMode::dynamic_lp;

  Sampler rng(derive_seed(cfg.training.seed, 0xAB1A7Eu));
  std::vector<PackedWeights> packed(clients);
  for (std::size_t i = 0; i < clients; ++i) {
    WeightVector w(dimension);
    for (double& x : w) x = rng.uniform_real() - 0.5;
    packed[i] = pack_and_encrypt(ctx, w, sys.keys.pk, rng);
  }
  row.chunks = packed[0].chunk_count();

  DistanceOptions options;
  options.lazy_relin = cfg.lazy_relin;
  options.reduce_on_server = true;

  std::vector<double> times;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const OpCounts before = ctx.counters().snapshot();
    const auto start = std::chrono::steady_clock::now();
    (void)build_distance_matrix(ctx, packed, sys.keys.relin, sys.plan,
                                DistanceMode::per_pair, sys.keys.rotations,
                                options);
    times.push_back(std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count());
    if (rep == 0) row.ops = ctx.counters().snapshot() - before;
  }
  std::sort(times.begin(), times.end());
  row.median_seconds = times[times.size() / 2];
  return row;
}

int cmd_ablate(const CliOptions& o) {
  if (o.repetitions == 0) throw UsageError("need at least one repetition");
  const ExperimentConfig base = to_config(o);
  std::vector<AblationRow> rows;

  if (o.toggle == "lazy-relin") {
    for (const bool lazy : {false, true}) {
      ExperimentConfig cfg = base;
      cfg.lazy_relin = lazy;
      rows.push_back(measure_distance_phase(cfg, lazy ? "on" : "off",
                                            o.dimension, o.clients,
                                            o.repetitions));
    }
  } else if (o.toggle == "hoisting") {
    for (const HoistMode mode :
         {HoistMode::off, HoistMode::full, HoistMode::dynamic_lp}) {
      ExperimentConfig cfg = base;
      cfg.hoisting = mode;
      rows.push_back(measure_distance_phase(cfg, hoist_name(mode), o.dimension,
                                            o.clients, o.repetitions));
    }
  } else if (o.toggle == "ring-degree") {
    std::vector<std::size_t> degrees = o.degrees;
    if (degrees.empty()) degrees = {8192, 16384, 32768};
    for (const std::size_t degree : degrees) {
      ExperimentConfig cfg = base;
      cfg.params.ring_degree = degree;
      cfg.params.validate();
      rows.push_back(measure_distance_phase(cfg, std::to_string(degree),
                                            o.dimension, o.clients,
                                            o.repetitions));
    }
  } else {
    throw UsageError("unknown toggle: " + o.toggle);
  }

  Report rep;
  rep.columns = {"toggle",       "variant",     "fingerprint",
                 "dimension",    "chunks",      "clients",
                 "plan_k",       "t_hoist",     "t_decompose",
                 "m_cipher",     "median_seconds", "speedup",
                 "encryptions",  "additions",   "multiplications",
                 "relinearizations", "rescales", "rotations",
                 "mod_ups"};
  const double baseline = rows.front().median_seconds;
  for (const AblationRow& row : rows) {
    rep.add_row({o.toggle, row.variant,
                 config_fingerprint(row.cfg, o.dimension),
                 std::to_string(o.dimension), std::to_string(row.chunks),
                 std::to_string(o.clients), std::to_string(row.plan_k),
                 row.calibrated ? format_double(row.calibration.t_hoist) : "",
                 row.calibrated ? format_double(row.calibration.t_decompose) : "",
                 row.calibrated ? format_double(row.calibration.m_cipher) : "",
                 format_double(row.median_seconds),
                 format_double(baseline / std::max(row.median_seconds, 1e-12)),
                 std::to_string(row.ops.encryptions),
                 std::to_string(row.ops.additions),
                 std::to_string(row.ops.multiplications),
                 std::to_string(row.ops.relinearizations),
                 std::to_string(row.ops.rescales),
                 std::to_string(row.ops.rotations),
                 std::to_string(row.ops.mod_ups)});
  }
  if (o.report_path.empty()) {
    std::fputs(render_csv(rep).c_str(), stdout);
  } else {
    write_report(rep, o.report_path, report_format_from_name(o.format));
    std::printf("report written to %s\n", o.report_path.c_str());
  }
  return 0;
}

int cmd_calibrate(const CliOptions& o) {
  CkksParams params;
  params.ring_degree = o.ring_degree;
  params.depth = o.depth;
  params.scale_bits = o.scale_bits;
  CkksContext ctx(params);

  Sampler key_rng(derive_seed(o.seed, 0xCA11Bu));
  const KeyBundle keys = ctx.generate_keys(key_rng, {1, 2});
  Sampler rng(derive_seed(o.seed, 0xCA11B2u));
  const Calibration c = calibrate(ctx, keys, rng);

  const std::size_t width =
      std::bit_ceil(std::min(o.dimension, ctx.slot_count()));
  const HoistPlan plan = plan_unfold(c.t_hoist, c.t_decompose, c.m_cipher,
                                     o.memory_budget * 1048576.0, width);

  std::printf("t_hoist=%.6g t_decompose=%.6g m_cipher=%.0f width=%zu "
              "chosen_k=%zu cost=%.6g\n",
              c.t_hoist, c.t_decompose, c.m_cipher, width, plan.k, plan.cost);
  if (!o.report_path.empty()) {
    Report rep;
    rep.columns = {"ring_degree", "depth",  "scale_bits", "t_hoist",
                   "t_decompose", "m_cipher", "memory_budget_mb", "width",
                   "chosen_k",    "cost"};
    rep.add_row({std::to_string(o.ring_degree), std::to_string(o.depth),
                 std::to_string(o.scale_bits), format_double(c.t_hoist),
                 format_double(c.t_decompose), format_double(c.m_cipher),
                 format_double(o.memory_budget), std::to_string(width),
                 std::to_string(plan.k), format_double(plan.cost)});
    write_report(rep, o.report_path, report_format_from_name(o.format));
    std::printf("report written to %s\n", o.report_path.c_str());
  }
  return 0;
}

void add_crypto_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--ring-degree", o.ring_degree, "polynomial ring degree");
  cmd->add_option("--depth", o.depth, "multiplicative depth");
  cmd->add_option("--scale-bits", o.scale_bits, "log2 of the encoding scale");
  cmd->add_option("--lazy-relin", o.lazy, "lazy relinearization")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--hoisting", o.hoisting, "rotation hoisting mode")
      ->check(CLI::IsMember({"off", "full", "dynamic"}));
  cmd->add_option("--memory-budget", o.memory_budget,
                  "hoisting memory budget in MiB");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--report", o.report_path, "write a report file here");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

void add_population_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--rule", o.rule, "aggregation rule")
      ->check(CLI::IsMember({"krum", "multi-krum", "median"}));
  cmd->add_option("--clients", o.clients, "client count");
  cmd->add_option("--byzantine", o.byzantine, "malicious client count");
  cmd->add_option("--l", o.l, "multi-krum selection size");
  cmd->add_option("--attack", o.attack, "poisoning attack")
      ->check(CLI::IsMember({"none", "label-flip", "untargeted", "targeted"}));
  cmd->add_option("--lambda", o.lambda, "untargeted attack scale");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CliOptions o;

  // The config file seeds the defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_json_config(argv[i + 1], o);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
      }
    }
  }

  CLI::App app{"privacy-preserving robust federated learning workbench"};
  app.require_subcommand(1);

  CLI::App* experiment =
      app.add_subcommand("experiment", "run a federated experiment");
  add_population_flags(experiment, o);
  add_crypto_flags(experiment, o);
  experiment->add_option("--rounds", o.rounds, "maximum global rounds");
  experiment->add_flag("--slot-sum-at-kgc", o.slot_sum_at_kgc,
                       "decrypt slot totals instead of rotating on the server");
  experiment->add_flag("--sumdis-score", o.sumdis_score,
                       "rank by row totals instead of nearest neighbors");
  experiment->add_flag("--redact-kgc", o.redact_kgc,
                       "drop key-holder plaintext from transcripts");
  experiment->add_flag("--row-sums", o.row_sums,
                       "aggregate distance rows before they leave the server");
  experiment->add_option("--dump-ciphertexts", o.dump_dir,
                         "write client update ciphertexts to this directory");
  experiment->add_option("--config", o.config_path,
                         "JSON config file (flags override it)");
  experiment->add_option("--model", o.model, "model family")
      ->check(CLI::IsMember({"logistic", "mlp"}));
  experiment->add_option("--hidden", o.hidden, "mlp hidden width");
  experiment->add_option("--data-dim", o.data_dim, "synthetic feature count");
  experiment->add_option("--data-classes", o.data_classes, "class count");
  experiment->add_option("--samples", o.samples, "synthetic sample count");
  experiment->add_option("--separation", o.separation, "class mean separation");
  experiment->add_option("--noise", o.noise, "per-feature noise");
  experiment->add_option("--skew", o.skew, "client quantity skew exponent");
  experiment->add_option("--learning-rate", o.learning_rate, "SGD step size");
  experiment->add_option("--batch", o.batch_size, "mini-batch size");
  experiment->add_option("--epochs", o.local_epochs, "local epochs per round");
  experiment->add_option("--patience", o.patience, "early-stop patience");
  experiment->add_option("--idx-images", o.idx_images, "IDX image file");
  experiment->add_option("--idx-labels", o.idx_labels, "IDX label file");

  CLI::App* ablate = app.add_subcommand("ablate", "toggle one optimization");
  add_population_flags(ablate, o);
  add_crypto_flags(ablate, o);
  ablate->add_option("--toggle", o.toggle, "dimension to ablate")
      ->required()
      ->check(CLI::IsMember({"lazy-relin", "hoisting", "ring-degree"}));
  ablate->add_option("--repetitions", o.repetitions, "timing repetitions");
  ablate->add_option("--dimension", o.dimension,
                     "weight vector length (use a small value with "
                     "--toggle hoisting to keep the key set small)");
  ablate
      ->add_option("--ring-degree-list", o.degrees,
                   "ring degrees for the ring-degree toggle")
      ->delimiter(',');

  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "measure hoisting constants on this host");
  add_crypto_flags(calibrate_cmd, o);
  calibrate_cmd->add_option("--dimension", o.dimension,
                            "weight vector length the plan is sized for");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the acceptance checks");
  selftest_cmd->add_option("--only", o.only, "run only these check numbers")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (experiment->parsed()) return cmd_experiment(o);
    if (ablate->parsed()) return cmd_ablate(o);
    if (calibrate_cmd->parsed()) return cmd_calibrate(o);
    if (selftest_cmd->parsed()) return selftest_main(o.only);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace lancelot
