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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lancelot/ckks.hpp"
#include "lancelot/sampling.hpp"

namespace lancelot::test {

// Undersized rings for fast tests; the security check is deliberately off.
inline CkksParams tiny_params(std::size_t degree, int depth = 3) {
  CkksParams p;
  p.ring_degree = degree;
  p.depth = depth;
  p.security = SecurityLevel::none;
  return p;
}

inline std::vector<double> random_slots(Sampler& rng, std::size_t n,
                                        double span = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = span * (2.0 * rng.uniform_real() - 1.0);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double slot_sum(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}

}  // namespace lancelot::test
