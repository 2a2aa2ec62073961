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

#pragma once

#include <string>
#include <vector>

namespace lancelot {

enum class ReportFormat { csv, jsonl };
ReportFormat report_format_from_name(const std::string& name);

// Tabular run output. Cells are preformatted strings so renderings are
// byte-stable: the same rows always produce the same file.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

std::string render_csv(const Report& report);    // RFC-4180 quoting
std::string render_jsonl(const Report& report);  // one object per row

// Refuses to touch the filesystem for an empty report.
void write_report(const Report& report, const std::string& path,
                  ReportFormat format);

std::string format_double(double v);
std::string format_size(std::size_t v);

}  // namespace lancelot
