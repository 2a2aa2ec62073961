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

#ifndef LANCELOT_THREADING_HPP
#define LANCELOT_THREADING_HPP

#include <cstddef>
#include <functional>

namespace lancelot {

// Worker pool width: the LANCELOT_THREADS environment variable when set,
// otherwise the hardware concurrency. Throws UsageError on a malformed
// override.
std::size_t worker_count();

// Runs fn(i) for every i in [0, count) across the worker pool with static
// block partitioning. Callers own output disjointness; the first exception
// thrown by any block is rethrown after all blocks finish.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace lancelot

#endif  // LANCELOT_THREADING_HPP
