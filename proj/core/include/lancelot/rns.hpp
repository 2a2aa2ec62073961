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

#ifndef LANCELOT_RNS_HPP
#define LANCELOT_RNS_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "lancelot/modmath.hpp"

namespace lancelot {

enum class Domain { coefficient, evaluation };

enum class SecurityLevel { none, bits128 };

// Negacyclic NTT tables for one prime: psi^bitrev powers with Shoup
// companions, plus the inverse set and 1/n.
struct NttTables {
  u64 psi = 0;
  std::vector<u64> root_powers, root_powers_shoup;
  std::vector<u64> inv_root_powers, inv_root_powers_shoup;
  u64 n_inv = 0, n_inv_shoup = 0;
};

// An RNS basis over X^N + 1: ordered primes q_0..q_L plus one special
// prime used for key switching. All primes are NTT friendly (1 mod 2N).
//
// Construction validates the 128-bit R-LWE budget for (N, log2(Q*p))
// against the published parameter table unless SecurityLevel::none is
// requested (tests only).
class RnsBasis {
 public:
  RnsBasis(std::size_t degree, const std::vector<u64>& q_primes,
           u64 special_prime, SecurityLevel security);

  std::size_t degree() const { return degree_; }
  int log_degree() const { return log_degree_; }
  std::size_t prime_count() const { return primes_.size(); }
  const Modulus& prime(std::size_t i) const { return primes_[i]; }
  const Modulus& special() const { return special_; }
  const NttTables& tables(std::size_t i) const { return tables_[i]; }
  const NttTables& special_tables() const { return special_tables_; }
  SecurityLevel security() const { return security_; }
  double total_log_qp() const { return total_log_qp_; }

  // Modulus object for either a q prime (i < prime_count) or, at
  // i == prime_count, the special prime.
  const Modulus& prime_or_special(std::size_t i) const {
    return i == primes_.size() ? special_ : primes_[i];
  }
  const NttTables& tables_or_special(std::size_t i) const {
    return i == primes_.size() ? special_tables_ : tables_[i];
  }

  // inv_table(i, j) = q_i^{-1} mod q_j with the special prime addressed
  // as index prime_count.
  u64 prime_inverse(std::size_t i, std::size_t j) const {
    return inverses_[i * (primes_.size() + 1) + j];
  }

  void forward_ntt(u64* row, std::size_t prime_index) const;
  void inverse_ntt(u64* row, std::size_t prime_index) const;
  void forward_ntt_special(u64* row) const;
  void inverse_ntt_special(u64* row) const;

 private:
  void build_tables(const Modulus& q, NttTables* out) const;
  static void forward_ntt_impl(u64* a, std::size_t n, const Modulus& q,
                               const NttTables& t);
  static void inverse_ntt_impl(u64* a, std::size_t n, const Modulus& q,
                               const NttTables& t);

  std::size_t degree_;
  int log_degree_;
  std::vector<Modulus> primes_;
  Modulus special_;
  std::vector<NttTables> tables_;
  NttTables special_tables_;
  std::vector<u64> inverses_;
  SecurityLevel security_;
  double total_log_qp_;
};

// Maximum log2(Q*p) admissible at 128-bit classical security for ternary
// secrets, keyed by ring degree. Throws ParameterError for degrees
// outside the published table.
double security_budget_bits128(std::size_t degree);

// A polynomial in RNS form over the first `prime_count` primes of a basis,
// optionally extended by the special prime (always the last row).
class PolyRns {
 public:
  PolyRns() = default;
  PolyRns(std::shared_ptr<const RnsBasis> basis, std::size_t prime_count,
          bool with_special, Domain domain);

  const std::shared_ptr<const RnsBasis>& basis() const { return basis_; }
  std::size_t degree() const { return basis_->degree(); }
  std::size_t prime_count() const { return prime_count_; }
  bool has_special() const { return with_special_; }
  std::size_t row_count() const { return rows_.size(); }
  Domain domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = d; }
  int level() const { return static_cast<int>(prime_count_) - 1; }

  std::vector<u64>& row(std::size_t i) { return rows_[i]; }
  const std::vector<u64>& row(std::size_t i) const { return rows_[i]; }
  // Modulus of row i (special for the trailing row when present).
  const Modulus& row_modulus(std::size_t i) const {
    return i < prime_count_ ? basis_->prime(i) : basis_->special();
  }

  bool compatible_with(const PolyRns& o) const;
  void require_compatible(const PolyRns& o) const;

  void add_inplace(const PolyRns& o);
  void sub_inplace(const PolyRns& o);
  void negate_inplace();
  // Slot-wise product; operands must both be in evaluation domain.
  void pointwise_mul_inplace(const PolyRns& o);
  // Multiplies row i by scalars[i] (one scalar per live row).
  void mul_scalar_inplace(const std::vector<u64>& scalars);

  void ntt_forward();
  void ntt_inverse();

  // Drops trailing rows so only `new_count` q primes remain. Requires
  // no special row and new_count <= prime_count.
  void shrink_to(std::size_t new_count);

  friend PolyRns add(PolyRns a, const PolyRns& b) {
    a.add_inplace(b);
    return a;
  }
  friend PolyRns sub(PolyRns a, const PolyRns& b) {
    a.sub_inplace(b);
    return a;
  }
  friend PolyRns pointwise_mul(PolyRns a, const PolyRns& b) {
    a.pointwise_mul_inplace(b);
    return a;
  }

  friend bool operator==(const PolyRns& a, const PolyRns& b) {
    return a.prime_count_ == b.prime_count_ &&
           a.with_special_ == b.with_special_ && a.domain_ == b.domain_ &&
           a.rows_ == b.rows_;
  }

 private:
  std::shared_ptr<const RnsBasis> basis_;
  std::size_t prime_count_ = 0;
  bool with_special_ = false;
  Domain domain_ = Domain::coefficient;
  std::vector<std::vector<u64>> rows_;
};

// One digit of an RNS decomposition: residue rows for an explicit subset
// of basis primes, in coefficient domain.
struct RnsDigit {
  std::vector<std::size_t> prime_indices;
  std::vector<std::vector<u64>> rows;
};

// Splits x (coefficient domain, level l) into ceil((l+1)/alpha) digits of
// alpha primes each. When the final digit is partial it is zero padded and
// every digit is scaled by the pad factor Q' = prod of the padding primes
// (Q' = 1 when alpha divides l+1). recombine_digits undoes the scaling.
std::vector<RnsDigit> rns_decompose(const PolyRns& x, std::size_t alpha);

// Number of digits rns_decompose produces at the given level.
std::size_t digit_count(std::size_t prime_count, std::size_t alpha);

// Exact CRT lift of one digit onto the first target_prime_count primes
// (plus the special prime when with_special). The digit value is taken
// centered in (-D/2, D/2] for digit modulus D. Output is in coefficient
// domain.
PolyRns mod_up(std::shared_ptr<const RnsBasis> basis, const RnsDigit& digit,
               std::size_t target_prime_count, bool with_special);

// Convenience: extends a full-prefix polynomial by the special prime.
PolyRns mod_up(const PolyRns& x);

// Value-preserving inverse of mod_up: drops the special row.
PolyRns mod_down(const PolyRns& x);

// Key-switch rescaling: interprets the last row (special, or the last q
// prime when no special row is present) as a divisor p and returns
// (x - [x]_p) / p over the remaining primes. Operands and result are in
// evaluation domain; the division is exact by construction.
PolyRns divide_and_round_by_last(const PolyRns& x);

// Evaluation-domain automorphism X -> X^elt as an index permutation.
struct GaloisTables {
  u64 elt = 1;
  std::vector<std::uint32_t> perm;
};

GaloisTables make_galois_tables(std::size_t degree, u64 elt);
u64 galois_elt_for_rotation(std::size_t degree, std::size_t step);
PolyRns apply_galois(const PolyRns& x, const GaloisTables& g);

}  // namespace lancelot

#endif  // LANCELOT_RNS_HPP
