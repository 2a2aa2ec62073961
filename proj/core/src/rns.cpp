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

#include "lancelot/rns.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace lancelot {

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

double security_budget_bits128(std::size_t degree) {
  switch (degree) {
    case 1024:
      return 27.0;
    case 2048:
      return 54.0;
    case 4096:
      return 109.0;
    case 8192:
      return 218.0;
    case 16384:
      return 438.0;
    case 32768:
      return 881.0;
    case 65536:
      return 1770.0;
    case 131072:
      return 3540.0;
    default:
      throw ParameterError("no 128-bit budget entry for this ring degree");
  }
}

RnsBasis::RnsBasis(std::size_t degree, const std::vector<u64>& q_primes,
                   u64 special_prime, SecurityLevel security)
    : degree_(degree), security_(security) {
  if (degree < 8 || (degree & (degree - 1)) != 0) {
    throw ParameterError("ring degree must be a power of two >= 8");
  }
  if (q_primes.empty()) {
    throw ParameterError("basis requires at least one prime");
  }
  log_degree_ = std::countr_zero(degree);

  double total = 0.0;
  for (u64 q : q_primes) {
    if (!is_prime(q) || (q - 1) % (2 * degree) != 0) {
      throw ParameterError("basis primes must be NTT friendly");
    }
    for (const Modulus& seen : primes_) {
      if (seen.value == q) throw ParameterError("basis primes must be distinct");
    }
    if (q == special_prime) {
      throw ParameterError("special prime must differ from the q primes");
    }
    primes_.emplace_back(q);
    total += std::log2(static_cast<double>(q));
  }
  if (!is_prime(special_prime) || (special_prime - 1) % (2 * degree) != 0) {
    throw ParameterError("special prime must be NTT friendly");
  }
  special_ = Modulus(special_prime);
  total += std::log2(static_cast<double>(special_prime));
  total_log_qp_ = total;

  if (security == SecurityLevel::bits128 &&
      total > security_budget_bits128(degree)) {
    throw ParameterError("modulus chain exceeds the 128-bit budget");
  }

  tables_.resize(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    build_tables(primes_[i], &tables_[i]);
  }
  build_tables(special_, &special_tables_);

  const std::size_t k = primes_.size() + 1;
  inverses_.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      inverses_[i * k + j] =
          inv_mod(prime_or_special(i).value, prime_or_special(j));
    }
  }
}

void RnsBasis::build_tables(const Modulus& q, NttTables* out) const {
  const std::size_t n = degree_;
  out->psi = primitive_root_2n(n, q);
  const u64 psi_inv = inv_mod(out->psi, q);

  out->root_powers.resize(n);
  out->inv_root_powers.resize(n);
  u64 fwd = 1, inv = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bit_reverse(i, log_degree_);
    out->root_powers[r] = fwd;
    out->inv_root_powers[r] = inv;
    fwd = mul_mod(fwd, out->psi, q);
    inv = mul_mod(inv, psi_inv, q);
  }
  out->root_powers_shoup.resize(n);
  out->inv_root_powers_shoup.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out->root_powers_shoup[i] = shoup_precompute(out->root_powers[i], q);
    out->inv_root_powers_shoup[i] = shoup_precompute(out->inv_root_powers[i], q);
  }
  out->n_inv = inv_mod(static_cast<u64>(n), q);
  out->n_inv_shoup = shoup_precompute(out->n_inv, q);
}

void RnsBasis::forward_ntt_impl(u64* a, std::size_t n, const Modulus& q,
                                const NttTables& t) {
  std::size_t half = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    half >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const u64 w = t.root_powers[m + i];
      const u64 ws = t.root_powers_shoup[m + i];
      u64* p1 = a + 2 * i * half;
      u64* p2 = p1 + half;
      for (std::size_t j = 0; j < half; ++j) {
        const u64 u = p1[j];
        const u64 v = mul_mod_shoup(p2[j], w, ws, q);
        p1[j] = add_mod(u, v, q);
        p2[j] = sub_mod(u, v, q);
      }
    }
  }
}

void RnsBasis::inverse_ntt_impl(u64* a, std::size_t n, const Modulus& q,
                                const NttTables& t) {
  std::size_t half = 1;
  for (std::size_t m = n >> 1; m >= 1; m >>= 1) {
    for (std::size_t i = 0; i < m; ++i) {
      const u64 w = t.inv_root_powers[m + i];
      const u64 ws = t.inv_root_powers_shoup[m + i];
      u64* p1 = a + 2 * i * half;
      u64* p2 = p1 + half;
      for (std::size_t j = 0; j < half; ++j) {
        const u64 u = p1[j];
        const u64 v = p2[j];
        p1[j] = add_mod(u, v, q);
        p2[j] = mul_mod_shoup(sub_mod(u, v, q), w, ws, q);
      }
    }
    half <<= 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = mul_mod_shoup(a[j], t.n_inv, t.n_inv_shoup, q);
  }
}

void RnsBasis::forward_ntt(u64* row, std::size_t i) const {
  forward_ntt_impl(row, degree_, primes_[i], tables_[i]);
}
void RnsBasis::inverse_ntt(u64* row, std::size_t i) const {
  inverse_ntt_impl(row, degree_, primes_[i], tables_[i]);
}
void RnsBasis::forward_ntt_special(u64* row) const {
  forward_ntt_impl(row, degree_, special_, special_tables_);
}
void RnsBasis::inverse_ntt_special(u64* row) const {
  inverse_ntt_impl(row, degree_, special_, special_tables_);
}

PolyRns::PolyRns(std::shared_ptr<const RnsBasis> basis,
                 std::size_t prime_count, bool with_special, Domain domain)
    : basis_(std::move(basis)),
      prime_count_(prime_count),
      with_special_(with_special),
      domain_(domain) {
  if (prime_count_ == 0 || prime_count_ > basis_->prime_count()) {
    throw BasisMismatchError("prime count outside the basis");
  }
  rows_.assign(prime_count_ + (with_special_ ? 1 : 0),
               std::vector<u64>(basis_->degree(), 0));
}

bool PolyRns::compatible_with(const PolyRns& o) const {
  return basis_ == o.basis_ && prime_count_ == o.prime_count_ &&
         with_special_ == o.with_special_;
}

void PolyRns::require_compatible(const PolyRns& o) const {
  if (basis_ != o.basis_ || prime_count_ != o.prime_count_ ||
      with_special_ != o.with_special_) {
    throw BasisMismatchError("operands live on different basis slices");
  }
  if (domain_ != o.domain_) {
    throw DomainError("operands live in different domains");
  }
}

void PolyRns::add_inplace(const PolyRns& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Modulus& q = row_modulus(i);
    u64* a = rows_[i].data();
    const u64* b = o.rows_[i].data();
    for (std::size_t j = 0; j < rows_[i].size(); ++j) {
      a[j] = add_mod(a[j], b[j], q);
    }
  }
}

void PolyRns::sub_inplace(const PolyRns& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Modulus& q = row_modulus(i);
    u64* a = rows_[i].data();
    const u64* b = o.rows_[i].data();
    for (std::size_t j = 0; j < rows_[i].size(); ++j) {
      a[j] = sub_mod(a[j], b[j], q);
    }
  }
}

void PolyRns::negate_inplace() {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Modulus& q = row_modulus(i);
    for (u64& v : rows_[i]) v = negate_mod(v, q);
  }
}

void PolyRns::pointwise_mul_inplace(const PolyRns& o) {
  require_compatible(o);
  if (domain_ != Domain::evaluation) {
    throw DomainError("pointwise products require evaluation domain");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Modulus& q = row_modulus(i);
    u64* a = rows_[i].data();
    const u64* b = o.rows_[i].data();
    for (std::size_t j = 0; j < rows_[i].size(); ++j) {
      a[j] = mul_mod(a[j], b[j], q);
    }
  }
}

void PolyRns::mul_scalar_inplace(const std::vector<u64>& scalars) {
  if (scalars.size() != rows_.size()) {
    throw ShapeError("one scalar per live row required");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Modulus& q = row_modulus(i);
    const u64 s = reduce_mod(scalars[i], q);
    const u64 ss = shoup_precompute(s, q);
    for (u64& v : rows_[i]) v = mul_mod_shoup(v, s, ss, q);
  }
}

void PolyRns::ntt_forward() {
  if (domain_ == Domain::evaluation) {
    throw DomainError("polynomial already in evaluation domain");
  }
  for (std::size_t i = 0; i < prime_count_; ++i) {
    basis_->forward_ntt(rows_[i].data(), i);
  }
  if (with_special_) basis_->forward_ntt_special(rows_.back().data());
  domain_ = Domain::evaluation;
}

void PolyRns::ntt_inverse() {
  if (domain_ == Domain::coefficient) {
    throw DomainError("polynomial already in coefficient domain");
  }
  for (std::size_t i = 0; i < prime_count_; ++i) {
    basis_->inverse_ntt(rows_[i].data(), i);
  }
  if (with_special_) basis_->inverse_ntt_special(rows_.back().data());
  domain_ = Domain::coefficient;
}

void PolyRns::shrink_to(std::size_t new_count) {
  if (with_special_) throw BasisMismatchError("cannot shrink past special row");
  if (new_count == 0 || new_count > prime_count_) {
    throw BasisMismatchError("invalid shrink target");
  }
  rows_.resize(new_count);
  prime_count_ = new_count;
}

std::size_t digit_count(std::size_t prime_count, std::size_t alpha) {
  if (alpha == 0) throw ParameterError("decomposition width must be positive");
  return (prime_count + alpha - 1) / alpha;
}

std::vector<RnsDigit> rns_decompose(const PolyRns& x, std::size_t alpha) {
  if (x.domain() != Domain::coefficient) {
    throw DomainError("decomposition requires coefficient domain");
  }
  if (x.has_special()) {
    throw BasisMismatchError("decomposition input must not carry the special prime");
  }
  const RnsBasis& basis = *x.basis();
  const std::size_t count = x.prime_count();
  const std::size_t beta = digit_count(count, alpha);

  // Pad factor Q' covers the conceptual primes of the final partial digit.
  // Pad positions beyond the basis contribute factor 1 (zero padding).
  const std::size_t pad_end = std::min(alpha * beta, basis.prime_count());

  std::vector<RnsDigit> digits(beta);
  for (std::size_t y = 0; y < beta; ++y) {
    RnsDigit& d = digits[y];
    const std::size_t first = y * alpha;
    const std::size_t last = std::min(first + alpha, count);
    for (std::size_t i = first; i < last; ++i) {
      const Modulus& q = basis.prime(i);
      u64 pad = 1;
      for (std::size_t j = count; j < pad_end; ++j) {
        pad = mul_mod(pad, reduce_mod(basis.prime(j).value, q), q);
      }
      d.prime_indices.push_back(i);
      d.rows.push_back(x.row(i));
      if (pad != 1) {
        const u64 ps = shoup_precompute(pad, q);
        for (u64& v : d.rows.back()) v = mul_mod_shoup(v, pad, ps, q);
      }
    }
  }
  return digits;
}

PolyRns mod_up(std::shared_ptr<const RnsBasis> basis, const RnsDigit& digit,
               std::size_t target_prime_count, bool with_special) {
  const RnsBasis& b = *basis;
  const std::size_t n = b.degree();
  const std::size_t k = digit.prime_indices.size();
  if (k == 0 || digit.rows.size() != k) {
    throw ShapeError("digit carries no residue rows");
  }

  PolyRns out(basis, target_prime_count, with_special, Domain::coefficient);
  const std::size_t target_rows = out.row_count();

  if (k == 1) {
    // Single-prime digit: the centered value is an ordinary integer.
    const Modulus& src = b.prime(digit.prime_indices[0]);
    const u64 half = src.value >> 1;
    for (std::size_t t = 0; t < target_rows; ++t) {
      const Modulus& dst = out.row_modulus(t);
      const u64 src_mod_dst = reduce_mod(src.value, dst);
      u64* o = out.row(t).data();
      const u64* v = digit.rows[0].data();
      for (std::size_t j = 0; j < n; ++j) {
        u64 r = reduce_mod(v[j], dst);
        if (v[j] > half) r = sub_mod(r, src_mod_dst, dst);
        o[j] = r;
      }
    }
    return out;
  }

  // Multi-prime digit: exact CRT with a floating-point overflow estimate,
  // value taken centered in (-D/2, D/2].
  std::vector<Modulus> src;
  src.reserve(k);
  for (std::size_t i : digit.prime_indices) src.push_back(b.prime(i));

  // d_hat_j = D / d_j mod d_j, inverted; D mod target; d_hat_j mod target.
  std::vector<u64> d_hat_inv(k);
  for (std::size_t j = 0; j < k; ++j) {
    u64 prod = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != j) prod = mul_mod(prod, reduce_mod(src[i].value, src[j]), src[j]);
    }
    d_hat_inv[j] = inv_mod(prod, src[j]);
  }
  std::vector<std::vector<u64>> d_hat_mod_t(target_rows, std::vector<u64>(k));
  std::vector<u64> d_mod_t(target_rows);
  for (std::size_t t = 0; t < target_rows; ++t) {
    const Modulus& dst = out.row_modulus(t);
    u64 all = 1;
    for (std::size_t i = 0; i < k; ++i) {
      all = mul_mod(all, reduce_mod(src[i].value, dst), dst);
    }
    d_mod_t[t] = all;
    for (std::size_t j = 0; j < k; ++j) {
      u64 prod = 1;
      for (std::size_t i = 0; i < k; ++i) {
        if (i != j) prod = mul_mod(prod, reduce_mod(src[i].value, dst), dst);
      }
      d_hat_mod_t[t][j] = prod;
    }
  }

  std::vector<u64> y(k);
  for (std::size_t j = 0; j < n; ++j) {
    double frac = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      y[i] = mul_mod(digit.rows[i][j], d_hat_inv[i], src[i]);
      frac += static_cast<double>(y[i]) / static_cast<double>(src[i].value);
    }
    const u64 v = static_cast<u64>(std::llround(frac));
    for (std::size_t t = 0; t < target_rows; ++t) {
      const Modulus& dst = out.row_modulus(t);
      u64 acc = 0;
      for (std::size_t i = 0; i < k; ++i) {
        acc = add_mod(acc, mul_mod(y[i], d_hat_mod_t[t][i], dst), dst);
      }
      acc = sub_mod(acc, mul_mod(v, d_mod_t[t], dst), dst);
      out.row(t)[j] = acc;
    }
  }
  return out;
}

PolyRns mod_up(const PolyRns& x) {
  if (x.has_special()) {
    throw BasisMismatchError("polynomial already carries the special prime");
  }
  if (x.domain() != Domain::coefficient) {
    throw DomainError("basis extension requires coefficient domain");
  }
  RnsDigit d;
  for (std::size_t i = 0; i < x.prime_count(); ++i) {
    d.prime_indices.push_back(i);
    d.rows.push_back(x.row(i));
  }
  return mod_up(x.basis(), d, x.prime_count(), true);
}

PolyRns mod_down(const PolyRns& x) {
  if (!x.has_special()) {
    throw BasisMismatchError("no special row to drop");
  }
  PolyRns out(x.basis(), x.prime_count(), false, x.domain());
  for (std::size_t i = 0; i < x.prime_count(); ++i) out.row(i) = x.row(i);
  return out;
}

PolyRns divide_and_round_by_last(const PolyRns& x) {
  if (x.domain() != Domain::evaluation) {
    throw DomainError("rescaling operates in evaluation domain");
  }
  if (x.row_count() < 2) {
    throw BasisMismatchError("nothing left to divide by");
  }
  const RnsBasis& b = *x.basis();
  const std::size_t n = b.degree();
  const bool drop_special = x.has_special();
  const std::size_t out_count = drop_special ? x.prime_count() : x.prime_count() - 1;
  const std::size_t divisor_index = drop_special ? b.prime_count() : out_count;
  const Modulus& p = drop_special ? b.special() : b.prime(out_count);

  // Centered residues of x mod p, in coefficient form.
  std::vector<u64> last = x.row(x.row_count() - 1);
  if (drop_special) {
    b.inverse_ntt_special(last.data());
  } else {
    b.inverse_ntt(last.data(), out_count);
  }
  const u64 half = p.value >> 1;

  PolyRns out(x.basis(), out_count, false, Domain::evaluation);
  std::vector<u64> lift(n);
  for (std::size_t i = 0; i < out_count; ++i) {
    const Modulus& q = b.prime(i);
    const u64 p_mod_q = reduce_mod(p.value, q);
    for (std::size_t j = 0; j < n; ++j) {
      u64 r = reduce_mod(last[j], q);
      if (last[j] > half) r = sub_mod(r, p_mod_q, q);
      lift[j] = r;
    }
    b.forward_ntt(lift.data(), i);
    const u64 p_inv = b.prime_inverse(divisor_index, i);
    const u64 p_inv_shoup = shoup_precompute(p_inv, q);
    const u64* xr = x.row(i).data();
    u64* o = out.row(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      o[j] = mul_mod_shoup(sub_mod(xr[j], lift[j], q), p_inv, p_inv_shoup, q);
    }
  }
  return out;
}

u64 galois_elt_for_rotation(std::size_t degree, std::size_t step) {
  const u64 m = 2 * degree;
  u64 elt = 1;
  for (std::size_t i = 0; i < step % (degree / 2); ++i) {
    elt = (elt * 5) % m;
  }
  return elt;
}

GaloisTables make_galois_tables(std::size_t degree, u64 elt) {
  if ((elt & 1) == 0 || elt >= 2 * degree) {
    throw ParameterError("galois element must be odd and below 2N");
  }
  const int logn = std::countr_zero(degree);
  GaloisTables g;
  g.elt = elt;
  g.perm.resize(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    // Output index i holds the evaluation at psi^(e_i * elt).
    const u64 e_i = 2 * bit_reverse(i, logn) + 1;
    const u64 target = (e_i * elt) % (2 * degree);
    g.perm[i] = static_cast<std::uint32_t>(bit_reverse((target - 1) / 2, logn));
  }
  return g;
}

PolyRns apply_galois(const PolyRns& x, const GaloisTables& g) {
  if (x.domain() != Domain::evaluation) {
    throw DomainError("automorphisms are applied in evaluation domain");
  }
  PolyRns out(x.basis(), x.prime_count(), x.has_special(), Domain::evaluation);
  for (std::size_t i = 0; i < x.row_count(); ++i) {
    const u64* in = x.row(i).data();
    u64* o = out.row(i).data();
    for (std::size_t j = 0; j < x.degree(); ++j) {
      o[j] = in[g.perm[j]];
    }
  }
  return out;
}

}  // namespace lancelot
