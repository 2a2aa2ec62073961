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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lancelot/errors.hpp"
#include "lancelot/report.hpp"

namespace lancelot {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Every quoting hazard in one table: commas, quotes, newlines, tabs,
// trailing spaces and empty cells.
Report sample_report() {
  Report r;
  r.columns = {"name", "value", "note"};
  r.add_row({"plain", "1", "simple"});
  r.add_row({"comma,field", "2", "with,commas"});
  r.add_row({"quote\"inner", "3", "say \"hi\""});
  r.add_row({"line\nbreak", "4", "multi\nline"});
  r.add_row({"tab\tfield", "5", "trailing space "});
  r.add_row({"", "6", ""});
  return r;
}

TEST_SUITE("report") {

TEST_CASE("format names") {
  CHECK(report_format_from_name("csv") == ReportFormat::csv);
  CHECK(report_format_from_name("jsonl") == ReportFormat::jsonl);
  CHECK_THROWS_AS(report_format_from_name("xml"), UsageError);
}

TEST_CASE("rows must match the header width") {
  Report r;
  r.columns = {"a", "b"};
  CHECK_NOTHROW(r.add_row({"1", "2"}));
  CHECK_THROWS_AS(r.add_row({"1"}), ShapeError);
  CHECK_THROWS_AS(r.add_row({"1", "2", "3"}), ShapeError);
}

TEST_CASE("csv bytes match the golden file") {
  const std::string got = render_csv(sample_report());
  const std::string want =
      slurp(std::filesystem::path(LANCELOT_TEST_GOLDEN_DIR) /
            "report_sample.csv");
  CHECK(got == want);
  // Byte stability: rendering twice gives identical output.
  CHECK(render_csv(sample_report()) == got);
}

TEST_CASE("jsonl bytes match the golden file") {
  const std::string got = render_jsonl(sample_report());
  const std::string want =
      slurp(std::filesystem::path(LANCELOT_TEST_GOLDEN_DIR) /
            "report_sample.jsonl");
  CHECK(got == want);
  CHECK(render_jsonl(sample_report()) == got);
}

TEST_CASE("empty reports never touch the filesystem") {
  Report empty;
  CHECK_THROWS_AS(render_csv(empty), DataError);
  CHECK_THROWS_AS(render_jsonl(empty), DataError);

  Report headers_only;
  headers_only.columns = {"a"};
  CHECK_THROWS_AS(render_csv(headers_only), DataError);

  const auto path =
      std::filesystem::temp_directory_path() / "lancelot-empty-report.csv";
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_report(headers_only, path.string(), ReportFormat::csv),
                  DataError);
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("reports write to disk byte for byte") {
  const auto path =
      std::filesystem::temp_directory_path() / "lancelot-report-roundtrip";
  write_report(sample_report(), path.string(), ReportFormat::csv);
  CHECK(slurp(path) == render_csv(sample_report()));
  write_report(sample_report(), path.string(), ReportFormat::jsonl);
  CHECK(slurp(path) == render_jsonl(sample_report()));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_report(sample_report(),
                               "/nonexistent-dir/report.csv",
                               ReportFormat::csv),
                  DataError);
}

TEST_CASE("number formatting is stable") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(1.0 / 3.0) == "0.333333333");
  CHECK(format_double(1e-10) == "1e-10");
  CHECK(format_double(123456789.0) == "123456789");
  CHECK(format_double(1234567891.0) == "1.23456789e+09");
  CHECK(format_double(0.0) == "0");
  CHECK(format_size(0) == "0");
  CHECK(format_size(61706) == "61706");
}

}  // TEST_SUITE

}  // namespace
}  // namespace lancelot
