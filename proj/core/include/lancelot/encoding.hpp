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

#ifndef LANCELOT_ENCODING_HPP
#define LANCELOT_ENCODING_HPP

#include <complex>
#include <vector>

#include "lancelot/errors.hpp"

namespace lancelot {

// Canonical embedding transform for X^N + 1. Slot j corresponds to the
// primitive 2N-th root xi^(5^j); taking one root per conjugate pair makes
// the N real coefficients carry N/2 real slots exactly.
class Embedding {
 public:
  explicit Embedding(std::size_t degree);

  std::size_t degree() const { return degree_; }
  std::size_t slot_count() const { return degree_ / 2; }

  // sigma^{-1}: slot values -> real coefficient vector of length N
  // (unscaled; the caller rounds at its scale). values.size() <= N/2,
  // missing slots are zero.
  std::vector<double> slots_to_coeffs(const std::vector<double>& values) const;

  // sigma: real coefficient vector of length N -> N/2 slot values.
  std::vector<double> coeffs_to_slots(const std::vector<double>& coeffs) const;

 private:
  void fft(std::vector<std::complex<double>>& a, bool inverse) const;

  std::size_t degree_;
  int log_slots_;
  std::vector<std::complex<double>> twist_;      // xi^i, i < N/2
  std::vector<std::complex<double>> roots_;      // e^{2 pi i k / (N/2)}
  std::vector<std::uint32_t> slot_index_;        // t_j = (5^j - 1)/4
  std::vector<std::uint32_t> bitrev_;
};

}  // namespace lancelot

#endif  // LANCELOT_ENCODING_HPP
