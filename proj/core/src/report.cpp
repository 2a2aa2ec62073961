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

#include "lancelot/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lancelot/errors.hpp"

namespace lancelot {

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "jsonl") return ReportFormat::jsonl;
  throw UsageError("unknown report format: " + name);
}

void Report::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw ShapeError("report row width does not match the header");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string& field) {
  const bool needs_quote =
      field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void check_non_empty(const Report& report) {
  if (report.columns.empty()) throw DataError("report has no columns");
  if (report.rows.empty()) throw DataError("report has no rows");
}

std::string render_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  line += '\n';
  return line;
}

}  // namespace

std::string render_csv(const Report& report) {
  check_non_empty(report);
  std::string out = render_line(report.columns);
  for (const auto& row : report.rows) out += render_line(row);
  return out;
}

std::string render_jsonl(const Report& report) {
  check_non_empty(report);
  std::string out;
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      obj[report.columns[i]] = row[i];
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_report(const Report& report, const std::string& path,
                  ReportFormat format) {
  const std::string body =
      format == ReportFormat::csv ? render_csv(report) : render_jsonl(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open report file: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw DataError("failed writing report file: " + path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_size(std::size_t v) {
  return std::to_string(v);
}

}  // namespace lancelot
