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

// Release gate: eight numbered end-to-end checks covering scheme
// correctness, the two evaluation optimizations, selection equivalence,
// pipeline equivalence, robustness under attack, packing structure and the
// protocol's privacy shape. `selftest_main` prints one line per check.

#pragma once

#include <string>
#include <vector>

namespace lancelot {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the numbered checks (all of them when `only` is empty). Exceptions
// inside a check are caught and reported as failures.
std::vector<CriterionResult> run_selftest(const std::vector<int>& only = {});

// Prints one PASS/FAIL line per check to stdout; returns 0 only if every
// executed check passed.
int selftest_main(const std::vector<int>& only = {});

}  // namespace lancelot
