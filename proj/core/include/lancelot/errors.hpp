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

#ifndef LANCELOT_ERRORS_HPP
#define LANCELOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lancelot {

// Base class for every failure this library raises on its own behalf.
// Callers that want to distinguish causes catch the concrete type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or insecure construction parameters (ring degree, prime sizes,
// security budget, flag values).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operands live in different RNS bases or at different levels.
class BasisMismatchError : public Error {
 public:
  using Error::Error;
};

// Operand polynomial is in the wrong domain (coefficient vs evaluation).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Ciphertext metadata (scale, level, degree) does not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// A required key (relinearization, rotation step) is missing or malformed.
class KeyError : public Error {
 public:
  using Error::Error;
};

// No rescale levels remain.
class DepthExhaustedError : public Error {
 public:
  using Error::Error;
};

// Too many values for the available slots, or a value exceeds the
// configured message bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix dimensions disagree with the declared shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Reduction width is not a power of two or exceeds the slot count.
class WidthError : public Error {
 public:
  using Error::Error;
};

// The unfold plan has no feasible point under the memory budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (serialized ciphertexts, IDX files, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Command line misuse: unknown flag, missing argument, bad combination.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace lancelot

#endif  // LANCELOT_ERRORS_HPP
