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

#include <memory>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lancelot/rns.hpp"
#include "lancelot/sampling.hpp"

namespace lancelot {
namespace {

using boost::multiprecision::cpp_int;

std::shared_ptr<const RnsBasis> small_basis(std::size_t degree,
                                            std::size_t prime_count,
                                            int bits = 20) {
  const std::vector<u64> qs = generate_ntt_primes(bits, degree, prime_count);
  const u64 special = generate_ntt_primes(bits + 2, degree, 1)[0];
  return std::make_shared<RnsBasis>(degree, qs, special, SecurityLevel::none);
}

// Independent O(N^2) negacyclic product of residue rows.
std::vector<u64> schoolbook_negacyclic(const std::vector<u64>& a,
                                       const std::vector<u64>& b,
                                       const Modulus& q) {
  const std::size_t n = a.size();
  std::vector<u64> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const u64 prod = mul_mod(a[i], b[j], q);
      const std::size_t k = (i + j) % n;
      if (i + j < n) {
        c[k] = add_mod(c[k], prod, q);
      } else {
        c[k] = sub_mod(c[k], prod, q);
      }
    }
  }
  return c;
}

// Big-integer negacyclic product over the signed integers.
std::vector<cpp_int> schoolbook_negacyclic_big(const std::vector<long>& a,
                                               const std::vector<long>& b) {
  const std::size_t n = a.size();
  std::vector<cpp_int> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cpp_int prod = cpp_int(a[i]) * b[j];
      if (i + j < n) {
        c[(i + j) % n] += prod;
      } else {
        c[(i + j) % n] -= prod;
      }
    }
  }
  return c;
}

// CRT reconstruction of a centered coefficient from its residue rows.
cpp_int crt_centered(const std::vector<u64>& residues,
                     const std::vector<u64>& primes) {
  cpp_int q_total = 1;
  for (const u64 p : primes) q_total *= p;
  cpp_int x = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const cpp_int qi = primes[i];
    const cpp_int rest = q_total / qi;
    // rest^{-1} mod qi by Fermat (qi prime).
    cpp_int inv = 1;
    cpp_int base = rest % qi;
    cpp_int e = qi - 2;
    while (e > 0) {
      if ((e & 1) != 0) inv = inv * base % qi;
      base = base * base % qi;
      e >>= 1;
    }
    x = (x + cpp_int(residues[i]) * rest % q_total * inv) % q_total;
  }
  x %= q_total;
  if (x > q_total / 2) x -= q_total;
  return x;
}

TEST_SUITE("rns") {

TEST_CASE("security budget table") {
  CHECK(security_budget_bits128(1024) == doctest::Approx(27));
  CHECK(security_budget_bits128(8192) == doctest::Approx(218));
  CHECK(security_budget_bits128(131072) == doctest::Approx(3540));
  CHECK_THROWS_AS(security_budget_bits128(512), ParameterError);
  CHECK_THROWS_AS(security_budget_bits128(3000), ParameterError);
}

TEST_CASE("basis construction enforces the security budget") {
  const std::vector<u64> qs = generate_ntt_primes(20, 1024, 2);
  const u64 special = generate_ntt_primes(22, 1024, 1)[0];
  // ~62 bits of modulus against a 27-bit budget at N=1024.
  CHECK_THROWS_AS(RnsBasis(1024, qs, special, SecurityLevel::bits128),
                  ParameterError);
  CHECK_NOTHROW(RnsBasis(1024, qs, special, SecurityLevel::none));
}

TEST_CASE("ntt roundtrip is the exact identity") {
  const auto basis = small_basis(64, 3);
  Sampler rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    PolyRns a(basis, 3, false, Domain::evaluation);
    rng.uniform_poly(a);
    const PolyRns original = a;
    a.ntt_inverse();
    CHECK(a.domain() == Domain::coefficient);
    a.ntt_forward();
    CHECK(a == original);
  }

  PolyRns zero(basis, 2, false, Domain::coefficient);
  PolyRns z2 = zero;
  z2.ntt_forward();
  z2.ntt_inverse();
  CHECK(z2 == zero);
}

TEST_CASE("domain misuse is rejected") {
  const auto basis = small_basis(16, 2);
  PolyRns a(basis, 2, false, Domain::coefficient);
  CHECK_THROWS_AS(a.ntt_inverse(), DomainError);
  a.ntt_forward();
  CHECK_THROWS_AS(a.ntt_forward(), DomainError);
  PolyRns b(basis, 2, false, Domain::coefficient);
  CHECK_THROWS_AS(a.add_inplace(b), DomainError);
  CHECK_THROWS_AS(b.pointwise_mul_inplace(b), DomainError);
}

TEST_CASE("constant and monomial evaluations") {
  const std::vector<u64> qs = {17};
  const auto basis =
      std::make_shared<RnsBasis>(8, qs, u64{97}, SecurityLevel::none);

  PolyRns constant(basis, 1, false, Domain::coefficient);
  constant.row(0)[0] = 5;
  constant.ntt_forward();
  for (const u64 v : constant.row(0)) CHECK(v == 5);

  // x evaluates to the odd powers of the 16th root of unity, one per slot.
  PolyRns x(basis, 1, false, Domain::coefficient);
  x.row(0)[1] = 1;
  x.ntt_forward();
  const Modulus seventeen(17);
  const u64 psi = primitive_root_2n(8, seventeen);
  std::multiset<u64> expected, got;
  for (u64 k = 0; k < 8; ++k) expected.insert(pow_mod(psi, 2 * k + 1, seventeen));
  for (const u64 v : x.row(0)) got.insert(v);
  CHECK(got == expected);

  // Inverse of the all-ones evaluation vector is the constant 1.
  PolyRns ones(basis, 1, false, Domain::evaluation);
  for (u64& v : ones.row(0)) v = 1;
  ones.ntt_inverse();
  CHECK(ones.row(0)[0] == 1);
  for (std::size_t i = 1; i < 8; ++i) CHECK(ones.row(0)[i] == 0);
}

TEST_CASE("negacyclic convolution matches the schoolbook oracle") {
  const std::vector<u64> qs = {97};
  const auto basis =
      std::make_shared<RnsBasis>(16, qs, u64{193}, SecurityLevel::none);
  const Modulus q(97);
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 1000; ++trial) {
    PolyRns a(basis, 1, false, Domain::coefficient);
    PolyRns b(basis, 1, false, Domain::coefficient);
    for (u64& v : a.row(0)) v = gen() % 97;
    for (u64& v : b.row(0)) v = gen() % 97;
    const std::vector<u64> expected =
        schoolbook_negacyclic(a.row(0), b.row(0), q);
    a.ntt_forward();
    b.ntt_forward();
    a.pointwise_mul_inplace(b);
    a.ntt_inverse();
    CHECK(a.row(0) == expected);
  }
}

TEST_CASE("multi-prime products agree with the big-integer oracle") {
  const std::size_t degree = 16;
  const auto basis = small_basis(degree, 3);
  std::vector<u64> primes;
  for (std::size_t i = 0; i < 3; ++i) primes.push_back(basis->prime(i).value);

  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long> a(degree), b(degree);
    for (long& v : a) v = static_cast<long>(gen() % 101) - 50;
    for (long& v : b) v = static_cast<long>(gen() % 101) - 50;

    PolyRns pa(basis, 3, false, Domain::coefficient);
    PolyRns pb(basis, 3, false, Domain::coefficient);
    for (std::size_t r = 0; r < 3; ++r) {
      const Modulus& q = basis->prime(r);
      for (std::size_t i = 0; i < degree; ++i) {
        pa.row(r)[i] = a[i] >= 0 ? static_cast<u64>(a[i])
                                 : q.value - static_cast<u64>(-a[i]);
        pb.row(r)[i] = b[i] >= 0 ? static_cast<u64>(b[i])
                                 : q.value - static_cast<u64>(-b[i]);
      }
    }
    pa.ntt_forward();
    pb.ntt_forward();
    pa.pointwise_mul_inplace(pb);
    pa.ntt_inverse();

    const std::vector<cpp_int> expected = schoolbook_negacyclic_big(a, b);
    for (std::size_t i = 0; i < degree; ++i) {
      std::vector<u64> residues;
      for (std::size_t r = 0; r < 3; ++r) residues.push_back(pa.row(r)[i]);
      CHECK(crt_centered(residues, primes) == expected[i]);
    }
  }
}

TEST_CASE("residue arithmetic matches naive per-coefficient arithmetic") {
  const std::vector<u64> qs = {97};
  const auto basis =
      std::make_shared<RnsBasis>(8, qs, u64{193}, SecurityLevel::none);
  const Modulus q(97);
  std::mt19937_64 gen(31);
  PolyRns a(basis, 1, false, Domain::coefficient);
  PolyRns b(basis, 1, false, Domain::coefficient);
  for (u64& v : a.row(0)) v = gen() % 97;
  for (u64& v : b.row(0)) v = gen() % 97;

  PolyRns sum = add(a, b);
  PolyRns diff = sub(a, b);
  PolyRns neg = a;
  neg.negate_inplace();
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(sum.row(0)[i] == add_mod(a.row(0)[i], b.row(0)[i], q));
    CHECK(diff.row(0)[i] == sub_mod(a.row(0)[i], b.row(0)[i], q));
    CHECK(neg.row(0)[i] == negate_mod(a.row(0)[i], q));
  }

  PolyRns zero(basis, 1, false, Domain::coefficient);
  CHECK(add(a, zero) == a);
  CHECK(sub(a, a) == zero);

  PolyRns scaled = a;
  scaled.mul_scalar_inplace({7});
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(scaled.row(0)[i] == mul_mod(a.row(0)[i], 7, q));
  }
}

TEST_CASE("prime inverse table is consistent") {
  const auto basis = small_basis(16, 3);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      const Modulus& qj = basis->prime_or_special(j);
      const u64 qi = basis->prime_or_special(i).value;
      CHECK(mul_mod(qi % qj.value, basis->prime_inverse(i, j), qj) == 1);
    }
  }
}

TEST_CASE("shrinking drops trailing rows") {
  const auto basis = small_basis(16, 3);
  Sampler rng(33);
  PolyRns a(basis, 3, false, Domain::evaluation);
  rng.uniform_poly(a);
  const std::vector<u64> kept = a.row(0);
  PolyRns b = a;
  b.shrink_to(2);
  CHECK(b.prime_count() == 2);
  CHECK(b.level() == 1);
  CHECK(b.row(0) == kept);
  CHECK_THROWS_AS(b.shrink_to(0), BasisMismatchError);
  CHECK_THROWS_AS(b.shrink_to(3), BasisMismatchError);
  CHECK_THROWS_AS(a.add_inplace(b), BasisMismatchError);

  PolyRns with_special(basis, 3, true, Domain::evaluation);
  CHECK_THROWS_AS(with_special.shrink_to(2), BasisMismatchError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace lancelot
