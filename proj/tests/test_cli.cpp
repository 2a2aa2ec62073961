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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "lancelot/cli.hpp"

namespace lancelot {
namespace {

namespace fs = std::filesystem;

int run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv(args);
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  // Good enough for reports whose fields carry no commas or quotes.
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "lancelot_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

TEST_SUITE("cli") {

TEST_CASE("exit codes separate usage errors from failed runs") {
  CHECK(run({"lancelot", "--help"}) == 0);
  CHECK(run({"lancelot"}) == 2);                       // subcommand required
  CHECK(run({"lancelot", "transmogrify"}) == 2);       // unknown subcommand
  CHECK(run({"lancelot", "experiment", "--bogus"}) == 2);
  CHECK(run({"lancelot", "experiment", "--rule", "fastest"}) == 2);
  CHECK(run({"lancelot", "experiment", "--attack", "dos"}) == 2);
  CHECK(run({"lancelot", "experiment", "--hoisting", "sometimes"}) == 2);
  CHECK(run({"lancelot", "experiment", "--format", "xml"}) == 2);
  CHECK(run({"lancelot", "ablate"}) == 2);             // --toggle is required
  CHECK(run({"lancelot", "ablate", "--toggle", "everything"}) == 2);
  CHECK(run({"lancelot", "ablate", "--toggle", "lazy-relin", "--repetitions",
             "0"}) == 2);

  // Coherent flags whose run then fails report 1, not 2.
  CHECK(run({"lancelot", "experiment", "--clients", "3", "--byzantine",
             "1"}) == 1);
  CHECK(run({"lancelot", "calibrate", "--ring-degree", "3000"}) == 1);
}

TEST_CASE("selftest subcommand filters checks by number") {
  // Check 7 validates packing arithmetic only and stays cheap.
  CHECK(run({"lancelot", "selftest", "--only", "7"}) == 0);
  // An index that matches nothing runs nothing, which is a failure.
  CHECK(run({"lancelot", "selftest", "--only", "99"}) == 1);
  CHECK(run({"lancelot", "selftest", "--only", "7,99"}) == 0);
}

TEST_CASE("json config files seed the defaults and flags override them") {
  TempDir tmp;

  const fs::path bad_rule = tmp.path / "bad_rule.json";
  write_file(bad_rule, "{\"rule\": \"bogus\"}\n");
  CHECK(run({"lancelot", "experiment", "--config",
             bad_rule.string().c_str()}) == 2);
  // A flag rewrites the config's rule; the run then fails on population
  // bounds instead of flag parsing, proving the override took effect.
  CHECK(run({"lancelot", "experiment", "--config", bad_rule.string().c_str(),
             "--rule", "krum", "--clients", "2"}) == 1);

  const fs::path small = tmp.path / "small.json";
  write_file(small, "{\"clients\": 3, \"byzantine\": 1}\n");
  // krum rejects n = 3 with c = 1, so the config demonstrably loaded.
  CHECK(run({"lancelot", "experiment", "--config",
             small.string().c_str()}) == 1);

  const fs::path unknown = tmp.path / "unknown.json";
  write_file(unknown, "{\"warp_factor\": 9}\n");
  CHECK(run({"lancelot", "experiment", "--config",
             unknown.string().c_str()}) == 2);

  const fs::path mistyped = tmp.path / "mistyped.json";
  write_file(mistyped, "{\"clients\": \"three\"}\n");
  CHECK(run({"lancelot", "experiment", "--config",
             mistyped.string().c_str()}) == 2);

  const fs::path broken = tmp.path / "broken.json";
  write_file(broken, "{\"clients\": \n");
  CHECK(run({"lancelot", "experiment", "--config",
             broken.string().c_str()}) == 2);

  CHECK(run({"lancelot", "experiment", "--config", "/no/such/file.json"}) ==
        2);
}

TEST_CASE("experiment subcommand runs end to end and writes a jsonl report") {
  TempDir tmp;
  const fs::path report = tmp.path / "experiment.jsonl";

  CHECK(run({"lancelot", "experiment", "--clients", "3", "--data-dim", "4",
             "--samples", "60", "--rounds", "1", "--epochs", "1", "--batch",
             "8", "--learning-rate", "0.5", "--slot-sum-at-kgc", "--seed",
             "5", "--report", report.string().c_str(), "--format",
             "jsonl"}) == 0);

  const std::vector<std::string> lines = split_lines(slurp(report));
  REQUIRE(lines.size() == 1);
  const nlohmann::json row = nlohmann::json::parse(lines[0]);
  CHECK(row.at("round").get<std::string>() == "0");
  const double acc = std::stod(row.at("accuracy").get<std::string>());
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  CHECK_FALSE(row.at("selected").get<std::string>().empty());
  // Three updates, three rank rows (zero above l = 1), three selectors.
  CHECK(row.at("encryptions").get<std::string>() == "9");
  // Slot totals at the key holder never rotate on the server.
  CHECK(row.at("rotations").get<std::string>() == "0");
  for (const char* column :
       {"t_train", "t_encrypt", "t_distance", "t_sort", "t_aggregate",
        "t_decrypt", "additions", "multiplications", "relinearizations",
        "rescales", "mod_ups"}) {
    CHECK(row.contains(column));
  }
}

TEST_CASE("calibrate subcommand prices the unfold and reports the plan") {
  TempDir tmp;
  const fs::path report = tmp.path / "calibration.csv";

  CHECK(run({"lancelot", "calibrate", "--ring-degree", "8192", "--depth", "1",
             "--dimension", "4096", "--memory-budget", "64", "--seed", "3",
             "--report", report.string().c_str()}) == 0);

  const std::vector<std::string> lines = split_lines(slurp(report));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "ring_degree,depth,scale_bits,t_hoist,t_decompose,m_cipher,"
        "memory_budget_mb,width,chosen_k,cost");
  const std::vector<std::string> row = split_csv_row(lines[1]);
  REQUIRE(row.size() == 10);
  CHECK(row[0] == "8192");
  CHECK(row[1] == "1");
  CHECK(row[2] == "40");
  CHECK(std::stod(row[3]) > 0.0);
  CHECK(std::stod(row[4]) > 0.0);
  // Fresh depth-1 ciphertext: two polynomials over two primes.
  CHECK(row[5] == "262144");
  CHECK(row[6] == "64");
  CHECK(row[7] == "4096");
  const std::size_t k = std::stoul(row[8]);
  CHECK(k >= 1);
  CHECK(k <= 13);
  CHECK(std::stod(row[9]) > 0.0);
}

TEST_CASE("ablation reports quantify the lazy relinearization trade") {
  TempDir tmp;
  const fs::path report = tmp.path / "ablation.csv";

  CHECK(run({"lancelot", "ablate", "--toggle", "lazy-relin", "--dimension",
             "12288", "--clients", "4", "--depth", "2", "--repetitions", "1",
             "--seed", "11", "--report", report.string().c_str()}) == 0);

  const std::vector<std::string> lines = split_lines(slurp(report));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "toggle,variant,fingerprint,dimension,chunks,clients,plan_k,t_hoist,"
        "t_decompose,m_cipher,median_seconds,speedup,encryptions,additions,"
        "multiplications,relinearizations,rescales,rotations,mod_ups");

  const std::vector<std::string> off = split_csv_row(lines[1]);
  const std::vector<std::string> on = split_csv_row(lines[2]);
  REQUIRE(off.size() == 19);
  REQUIRE(on.size() == 19);
  CHECK(off[0] == "lazy-relin");
  CHECK(off[1] == "off");
  CHECK(on[1] == "on");
  for (const auto& row : {off, on}) {
    CHECK(row[3] == "12288");
    CHECK(row[4] == "3");   // ceil(12288 / 4096) chunks
    CHECK(row[5] == "4");
    CHECK(row[6] == "1");   // hoisting off pins k = 1
    CHECK(row[12] == "0");   // packing happens before the timed phase
    CHECK(row[14] == "18");  // 6 pairs x 3 chunk products
    CHECK(std::stod(row[10]) > 0.0);
  }
  // Eager relinearizes every chunk product; lazy once per pair.
  CHECK(off[15] == "18");
  CHECK(on[15] == "6");
  CHECK(off[11] == "1");  // the first row is its own speedup baseline
  CHECK(std::stod(on[11]) > 0.0);

  // The fingerprints differ in the toggled field alone.
  std::string normalized = off[2];
  const std::size_t at = normalized.find(";lazy=off");
  REQUIRE(at != std::string::npos);
  normalized.replace(at, 9, ";lazy=on");
  CHECK(normalized == on[2]);

  // No calibration columns outside dynamic hoisting.
  CHECK(off[7].empty());
  CHECK(off[8].empty());
  CHECK(off[9].empty());
}

}  // TEST_SUITE

}  // namespace
}  // namespace lancelot
