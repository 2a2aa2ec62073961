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

#include "lancelot/ckks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "lancelot/errors.hpp"

namespace lancelot {

namespace {

constexpr std::uint8_t kMagic[4] = {'L', 'C', 'L', 'T'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 4 + 1 + 1 + 1;

// Two ciphertexts may only interact when their scales agree up to floating
// point noise accumulated along identical pipelines.
constexpr double kScaleSlack = 1e-9;

void require_same_scale(double a, double b) {
  const double ref = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) > kScaleSlack * ref) {
    throw AlignmentError("operand scales diverge");
  }
}

void require_same_level(int a, int b) {
  if (a != b) throw AlignmentError("operand levels diverge");
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

u64 get_u64(const std::uint8_t* p) {
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(p[i]) << (8 * i);
  return v;
}

std::shared_ptr<const RnsBasis> make_basis(const CkksParams& p) {
  std::vector<u64> avoid;
  std::vector<u64> chain =
      generate_ntt_primes(p.first_prime_bits, p.ring_degree, 1, avoid);
  avoid.push_back(chain[0]);
  if (p.depth > 0) {
    const std::vector<u64> scale_primes = generate_ntt_primes(
        p.scale_bits, p.ring_degree, static_cast<std::size_t>(p.depth), avoid);
    for (u64 q : scale_primes) {
      chain.push_back(q);
      avoid.push_back(q);
    }
  }
  const u64 special =
      generate_ntt_primes(p.special_prime_bits, p.ring_degree, 1, avoid)[0];
  return std::make_shared<RnsBasis>(p.ring_degree, chain, special, p.security);
}

}  // namespace

void CkksParams::validate() const {
  if (ring_degree < 8 || (ring_degree & (ring_degree - 1)) != 0) {
    throw ParameterError("ring degree must be a power of two >= 8");
  }
  if (depth < 0 || depth > 40) {
    throw ParameterError("depth outside supported range");
  }
  if (scale_bits < 20 || scale_bits > 59) {
    throw ParameterError("scale must span 20..59 bits");
  }
  if (first_prime_bits < scale_bits || first_prime_bits > 60) {
    throw ParameterError("base prime must be at least as wide as the scale");
  }
  if (special_prime_bits < scale_bits || special_prime_bits > 60) {
    throw ParameterError("special prime must be at least as wide as the scale");
  }
  if (key_hamming_weight >= ring_degree) {
    throw ParameterError("key weight must be below the ring degree");
  }
  if (error_eta < 1 || error_eta > 32) {
    throw ParameterError("error parameter outside 1..32");
  }
  if (!(message_bound > 0.0)) {
    throw ParameterError("message bound must be positive");
  }
}

OpCounts OpCounts::operator-(const OpCounts& o) const {
  OpCounts r;
  r.encryptions = encryptions - o.encryptions;
  r.additions = additions - o.additions;
  r.multiplications = multiplications - o.multiplications;
  r.relinearizations = relinearizations - o.relinearizations;
  r.rescales = rescales - o.rescales;
  r.rotations = rotations - o.rotations;
  r.mod_ups = mod_ups - o.mod_ups;
  return r;
}

void OpCounters::reset() {
  encryptions.store(0);
  additions.store(0);
  multiplications.store(0);
  relinearizations.store(0);
  rescales.store(0);
  rotations.store(0);
  mod_ups.store(0);
}

OpCounts OpCounters::snapshot() const {
  OpCounts c;
  c.encryptions = encryptions.load();
  c.additions = additions.load();
  c.multiplications = multiplications.load();
  c.relinearizations = relinearizations.load();
  c.rescales = rescales.load();
  c.rotations = rotations.load();
  c.mod_ups = mod_ups.load();
  return c;
}

std::vector<std::size_t> default_rotation_steps(std::size_t slot_count) {
  std::vector<std::size_t> steps;
  for (std::size_t s = 1; s < slot_count; s <<= 1) steps.push_back(s);
  return steps;
}

CkksContext::CkksContext(const CkksParams& params)
    : params_((params.validate(), params)),
      basis_(make_basis(params)),
      embedding_(params.ring_degree) {}

const GaloisTables& CkksContext::galois(u64 elt) const {
  std::lock_guard<std::mutex> lock(galois_mutex_);
  auto it = galois_cache_.find(elt);
  if (it == galois_cache_.end()) {
    it = galois_cache_.emplace(elt, make_galois_tables(params_.ring_degree, elt))
             .first;
  }
  return it->second;
}

PolyRns CkksContext::slice(const PolyRns& x, std::size_t prime_count) const {
  if (prime_count > x.prime_count()) {
    throw BasisMismatchError("slice wider than the source polynomial");
  }
  PolyRns out(basis_, prime_count, false, x.domain());
  for (std::size_t i = 0; i < prime_count; ++i) out.row(i) = x.row(i);
  return out;
}

void CkksContext::sample_secret_like(PolyRns& out, Sampler& rng) const {
  if (params_.key_hamming_weight == 0) {
    rng.ternary_poly(out);
  } else {
    rng.sparse_ternary_poly(out, params_.key_hamming_weight);
  }
}

KeySwitchKey CkksContext::make_switch_key(const PolyRns& target,
                                          const SecretKey& sk,
                                          Sampler& rng) const {
  const std::size_t full = basis_->prime_count();
  KeySwitchKey ksk;
  ksk.digits.reserve(full);
  for (std::size_t j = 0; j < full; ++j) {
    PolyRns a(basis_, full, true, Domain::evaluation);
    rng.uniform_poly(a);
    PolyRns e(basis_, full, true, Domain::coefficient);
    rng.cbd_poly(e, params_.error_eta);
    e.ntt_forward();

    PolyRns k0 = pointwise_mul(a, sk.s);
    k0.negate_inplace();
    k0.add_inplace(e);

    // Row j additionally carries (p mod q_j) * target; all other rows of
    // the digit are plain encryptions of zero.
    const Modulus& qj = basis_->prime(j);
    const u64 theta = reduce_mod(basis_->special().value, qj);
    const u64 theta_shoup = shoup_precompute(theta, qj);
    u64* row = k0.row(j).data();
    const u64* t = target.row(j).data();
    for (std::size_t i = 0; i < params_.ring_degree; ++i) {
      row[i] = add_mod(row[i], mul_mod_shoup(t[i], theta, theta_shoup, qj), qj);
    }
    ksk.digits.emplace_back(std::move(k0), std::move(a));
  }
  return ksk;
}

KeyBundle CkksContext::generate_keys(
    Sampler& rng, const std::vector<std::size_t>& rotation_steps) const {
  const std::size_t full = basis_->prime_count();
  KeyBundle kb;

  PolyRns s(basis_, full, true, Domain::coefficient);
  sample_secret_like(s, rng);
  s.ntt_forward();
  kb.sk.s = std::move(s);

  PolyRns a(basis_, full, false, Domain::evaluation);
  rng.uniform_poly(a);
  PolyRns e(basis_, full, false, Domain::coefficient);
  rng.cbd_poly(e, params_.error_eta);
  e.ntt_forward();
  PolyRns p0 = pointwise_mul(a, slice(kb.sk.s, full));
  p0.negate_inplace();
  p0.add_inplace(e);
  kb.pk.p0 = std::move(p0);
  kb.pk.p1 = std::move(a);

  const PolyRns s2 = pointwise_mul(kb.sk.s, kb.sk.s);
  kb.relin.key = make_switch_key(s2, kb.sk, rng);

  const std::size_t slots = slot_count();
  for (std::size_t raw : rotation_steps) {
    const std::size_t step = raw % slots;
    if (step == 0 || kb.rotations.has_step(step)) continue;
    const u64 elt = galois_elt_for_rotation(params_.ring_degree, step);
    const PolyRns s_rot = apply_galois(kb.sk.s, galois(elt));
    kb.rotations.steps.emplace(step, make_switch_key(s_rot, kb.sk, rng));
  }
  return kb;
}

Plaintext CkksContext::encode(const std::vector<double>& values, double scale,
                              int level) const {
  if (level < 0 || level > top_level()) {
    throw ParameterError("encoding level outside the modulus chain");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("encoding scale must be positive and finite");
  }
  if (values.size() > slot_count()) {
    throw CapacityError("more values than slots");
  }
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) > params_.message_bound) {
      throw CapacityError("value outside the message bound");
    }
  }

  const std::vector<double> coeffs = embedding_.slots_to_coeffs(values);
  const std::size_t n = params_.ring_degree;
  std::vector<long long> rounded(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coeffs[i] * scale;
    if (std::abs(x) >= 4.6e18) {
      throw CapacityError("scaled coefficient overflows 62 bits");
    }
    rounded[i] = std::llround(x);
  }

  Plaintext pt;
  pt.m = PolyRns(basis_, static_cast<std::size_t>(level) + 1, false,
                 Domain::coefficient);
  pt.scale = scale;
  for (std::size_t r = 0; r < pt.m.prime_count(); ++r) {
    const Modulus& q = basis_->prime(r);
    u64* row = pt.m.row(r).data();
    for (std::size_t i = 0; i < n; ++i) {
      const long long v = rounded[i];
      const u64 mag = static_cast<u64>(v < 0 ? -v : v);
      const u64 m = reduce_mod(mag, q);
      row[i] = (v < 0) ? (m == 0 ? 0 : q.value - m) : m;
    }
  }
  pt.m.ntt_forward();
  return pt;
}

Plaintext CkksContext::encode(const std::vector<double>& values) const {
  return encode(values, params_.scale(), top_level());
}

std::vector<double> CkksContext::decode(const Plaintext& pt) const {
  PolyRns m = pt.m;
  if (m.domain() == Domain::evaluation) m.ntt_inverse();
  const std::size_t n = params_.ring_degree;
  std::vector<double> coeffs(n);

  if (m.prime_count() >= 2) {
    // Two residues bound the coefficient magnitude well past the scale
    // times the message bound; higher rows carry no extra information.
    const Modulus& q0 = basis_->prime(0);
    const Modulus& q1 = basis_->prime(1);
    const u64 inv01 = inv_mod(reduce_mod(q0.value, q1), q1);
    const u64 inv01_shoup = shoup_precompute(inv01, q1);
    const u128 q01 = static_cast<u128>(q0.value) * q1.value;
    const u128 half = q01 >> 1;
    for (std::size_t i = 0; i < n; ++i) {
      const u64 r0 = m.row(0)[i];
      const u64 diff = sub_mod(m.row(1)[i], reduce_mod(r0, q1), q1);
      const u64 t = mul_mod_shoup(diff, inv01, inv01_shoup, q1);
      const u128 x = static_cast<u128>(q0.value) * t + r0;
      coeffs[i] = (x > half) ? -static_cast<double>(q01 - x)
                             : static_cast<double>(x);
      coeffs[i] /= pt.scale;
    }
  } else {
    const Modulus& q0 = basis_->prime(0);
    const u64 half = q0.value >> 1;
    for (std::size_t i = 0; i < n; ++i) {
      const u64 r = m.row(0)[i];
      coeffs[i] = (r > half) ? -static_cast<double>(q0.value - r)
                             : static_cast<double>(r);
      coeffs[i] /= pt.scale;
    }
  }
  return embedding_.coeffs_to_slots(coeffs);
}

Ciphertext CkksContext::encrypt(const Plaintext& pt, const PublicKey& pk,
                                Sampler& rng) const {
  if (pt.m.domain() != Domain::evaluation) {
    throw DomainError("plaintexts are encrypted in evaluation domain");
  }
  const std::size_t count = pt.m.prime_count();
  if (pk.p0.prime_count() < count) {
    throw KeyError("public key narrower than the plaintext");
  }

  PolyRns r(basis_, count, false, Domain::coefficient);
  sample_secret_like(r, rng);
  r.ntt_forward();
  PolyRns e0(basis_, count, false, Domain::coefficient);
  rng.cbd_poly(e0, params_.error_eta);
  e0.ntt_forward();
  PolyRns e1(basis_, count, false, Domain::coefficient);
  rng.cbd_poly(e1, params_.error_eta);
  e1.ntt_forward();

  Ciphertext ct;
  ct.c0 = pointwise_mul(slice(pk.p0, count), r);
  ct.c0.add_inplace(e0);
  ct.c0.add_inplace(pt.m);
  ct.c1 = pointwise_mul(slice(pk.p1, count), r);
  ct.c1.add_inplace(e1);
  ct.scale = pt.scale;
  counters_.encryptions.fetch_add(1);
  return ct;
}

Plaintext CkksContext::decrypt(const Ciphertext& ct, const SecretKey& sk) const {
  const std::size_t count = ct.c0.prime_count();
  Plaintext pt;
  pt.m = pointwise_mul(ct.c1, slice(sk.s, count));
  pt.m.add_inplace(ct.c0);
  pt.scale = ct.scale;
  return pt;
}

std::vector<double> CkksContext::decrypt_values(const Ciphertext& ct,
                                                const SecretKey& sk) const {
  return decode(decrypt(ct, sk));
}

Ciphertext CkksContext::hadd(const Ciphertext& a, const Ciphertext& b) const {
  require_same_level(a.level(), b.level());
  require_same_scale(a.scale, b.scale);
  Ciphertext out;
  out.c0 = add(a.c0, b.c0);
  out.c1 = add(a.c1, b.c1);
  out.scale = a.scale;
  counters_.additions.fetch_add(1);
  return out;
}

Ciphertext CkksContext::hsub(const Ciphertext& a, const Ciphertext& b) const {
  require_same_level(a.level(), b.level());
  require_same_scale(a.scale, b.scale);
  Ciphertext out;
  out.c0 = sub(a.c0, b.c0);
  out.c1 = sub(a.c1, b.c1);
  out.scale = a.scale;
  counters_.additions.fetch_add(1);
  return out;
}

TernaryCiphertext CkksContext::hmult_triple(const Ciphertext& a,
                                            const Ciphertext& b,
                                            bool karatsuba) const {
  require_same_level(a.level(), b.level());
  TernaryCiphertext t;
  t.d0 = pointwise_mul(a.c0, b.c0);
  t.d2 = pointwise_mul(a.c1, b.c1);
  if (karatsuba) {
    PolyRns sa = add(a.c0, a.c1);
    const PolyRns sb = add(b.c0, b.c1);
    sa.pointwise_mul_inplace(sb);
    sa.sub_inplace(t.d0);
    sa.sub_inplace(t.d2);
    t.d1 = std::move(sa);
  } else {
    t.d1 = pointwise_mul(a.c0, b.c1);
    t.d1.add_inplace(pointwise_mul(a.c1, b.c0));
  }
  t.scale = a.scale * b.scale;
  t.accumulated = 1;
  counters_.multiplications.fetch_add(1);
  return t;
}

TernaryCiphertext CkksContext::hsquare(const Ciphertext& a) const {
  TernaryCiphertext t;
  t.d0 = pointwise_mul(a.c0, a.c0);
  t.d2 = pointwise_mul(a.c1, a.c1);
  t.d1 = pointwise_mul(a.c0, a.c1);
  t.d1.add_inplace(t.d1);
  t.scale = a.scale * a.scale;
  t.accumulated = 1;
  counters_.multiplications.fetch_add(1);
  return t;
}

void CkksContext::lazy_accumulate(TernaryCiphertext& acc,
                                  const TernaryCiphertext& t) const {
  require_same_level(acc.level(), t.level());
  require_same_scale(acc.scale, t.scale);
  acc.d0.add_inplace(t.d0);
  acc.d1.add_inplace(t.d1);
  acc.d2.add_inplace(t.d2);
  acc.accumulated += t.accumulated;
  counters_.additions.fetch_add(1);
}

std::vector<PolyRns> CkksContext::decompose_for_keyswitch(
    const PolyRns& d) const {
  PolyRns c = d;
  c.ntt_inverse();
  const std::size_t count = c.prime_count();
  std::vector<PolyRns> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    RnsDigit dig;
    dig.prime_indices.push_back(j);
    dig.rows.push_back(c.row(j));
    PolyRns lifted = mod_up(basis_, dig, count, true);
    lifted.ntt_forward();
    out.push_back(std::move(lifted));
  }
  counters_.mod_ups.fetch_add(1);
  return out;
}

std::pair<PolyRns, PolyRns> CkksContext::inner_product_moddown(
    const std::vector<PolyRns>& digits, const KeySwitchKey& ksk,
    const GaloisTables* perm) const {
  if (digits.empty()) throw ShapeError("empty decomposition");
  if (ksk.digits.size() < digits.size()) {
    throw KeyError("switch key has fewer digits than the decomposition");
  }
  const std::size_t count = digits[0].prime_count();
  const std::size_t n = params_.ring_degree;
  const std::size_t key_special_row = basis_->prime_count();

  PolyRns acc0(basis_, count, true, Domain::evaluation);
  PolyRns acc1(basis_, count, true, Domain::evaluation);
  for (std::size_t j = 0; j < digits.size(); ++j) {
    PolyRns permuted;
    const PolyRns* dj = &digits[j];
    if (perm != nullptr) {
      permuted = apply_galois(*dj, *perm);
      dj = &permuted;
    }
    const PolyRns& k0 = ksk.digits[j].first;
    const PolyRns& k1 = ksk.digits[j].second;
    for (std::size_t r = 0; r < acc0.row_count(); ++r) {
      const std::size_t kr = (r == count) ? key_special_row : r;
      const Modulus& q = acc0.row_modulus(r);
      const u64* dv = dj->row(r).data();
      const u64* k0v = k0.row(kr).data();
      const u64* k1v = k1.row(kr).data();
      u64* a0 = acc0.row(r).data();
      u64* a1 = acc1.row(r).data();
      for (std::size_t i = 0; i < n; ++i) {
        a0[i] = add_mod(a0[i], mul_mod(dv[i], k0v[i], q), q);
        a1[i] = add_mod(a1[i], mul_mod(dv[i], k1v[i], q), q);
      }
    }
  }
  return {divide_and_round_by_last(acc0), divide_and_round_by_last(acc1)};
}

Ciphertext CkksContext::relinearize(const TernaryCiphertext& t,
                                    const RelinKey& rk) const {
  const std::vector<PolyRns> digits = decompose_for_keyswitch(t.d2);
  auto [b, a] = inner_product_moddown(digits, rk.key, nullptr);
  Ciphertext out;
  out.c0 = std::move(b);
  out.c0.add_inplace(t.d0);
  out.c1 = std::move(a);
  out.c1.add_inplace(t.d1);
  out.scale = t.scale;
  counters_.relinearizations.fetch_add(1);
  return out;
}

Ciphertext CkksContext::rescale(const Ciphertext& ct) const {
  if (ct.level() == 0) {
    throw DepthExhaustedError("no prime left to rescale by");
  }
  Ciphertext out;
  out.c0 = divide_and_round_by_last(ct.c0);
  out.c1 = divide_and_round_by_last(ct.c1);
  out.scale =
      ct.scale / static_cast<double>(basis_->prime(ct.level()).value);
  counters_.rescales.fetch_add(1);
  return out;
}

Ciphertext CkksContext::mult_plain(const Ciphertext& ct,
                                   const Plaintext& pt) const {
  require_same_level(ct.level(), pt.level());
  Ciphertext out;
  out.c0 = pointwise_mul(ct.c0, pt.m);
  out.c1 = pointwise_mul(ct.c1, pt.m);
  out.scale = ct.scale * pt.scale;
  counters_.multiplications.fetch_add(1);
  return out;
}

Ciphertext CkksContext::rotate(const Ciphertext& ct, std::size_t step,
                               const RotationKeySet& keys) const {
  const std::size_t slots = slot_count();
  step %= slots;
  if (step == 0) return ct;
  const auto it = keys.steps.find(step);
  if (it == keys.steps.end()) {
    throw KeyError("no rotation key for the requested step");
  }
  const GaloisTables& tab =
      galois(galois_elt_for_rotation(params_.ring_degree, step));
  const std::vector<PolyRns> digits = decompose_for_keyswitch(ct.c1);
  auto [b, a] = inner_product_moddown(digits, it->second, &tab);
  Ciphertext out;
  out.c0 = apply_galois(ct.c0, tab);
  out.c0.add_inplace(b);
  out.c1 = std::move(a);
  out.scale = ct.scale;
  counters_.rotations.fetch_add(1);
  return out;
}

std::vector<Ciphertext> CkksContext::hoisted_rotations(
    const Ciphertext& ct, const std::vector<std::size_t>& steps,
    const RotationKeySet& keys) const {
  const std::size_t slots = slot_count();
  std::vector<Ciphertext> out;
  out.reserve(steps.size());
  std::vector<PolyRns> digits;
  for (std::size_t raw : steps) {
    const std::size_t step = raw % slots;
    if (step == 0) {
      out.push_back(ct);
      continue;
    }
    const auto it = keys.steps.find(step);
    if (it == keys.steps.end()) {
      throw KeyError("no rotation key for the requested step");
    }
    if (digits.empty()) digits = decompose_for_keyswitch(ct.c1);
    const GaloisTables& tab =
        galois(galois_elt_for_rotation(params_.ring_degree, step));
    auto [b, a] = inner_product_moddown(digits, it->second, &tab);
    Ciphertext r;
    r.c0 = apply_galois(ct.c0, tab);
    r.c0.add_inplace(b);
    r.c1 = std::move(a);
    r.scale = ct.scale;
    out.push_back(std::move(r));
    counters_.rotations.fetch_add(1);
  }
  return out;
}

std::vector<std::uint8_t> CkksContext::serialize(const Ciphertext& ct) const {
  if (ct.c0.domain() != Domain::evaluation) {
    throw DomainError("ciphertexts serialize in evaluation domain");
  }
  const long long scale_bits = std::llround(std::log2(ct.scale));
  if (scale_bits < 1 || scale_bits > 255) {
    throw ParameterError("scale exponent does not fit the header");
  }
  const std::size_t n = params_.ring_degree;
  const std::size_t count = ct.c0.prime_count();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(kHeaderBytes + 2 * count * n * sizeof(u64));
  bytes.insert(bytes.end(), kMagic, kMagic + 4);
  put_u16(bytes, kFormatVersion);
  put_u32(bytes, static_cast<std::uint32_t>(n));
  bytes.push_back(static_cast<std::uint8_t>(ct.level()));
  bytes.push_back(static_cast<std::uint8_t>(scale_bits));
  bytes.push_back(static_cast<std::uint8_t>(count));
  for (const PolyRns* poly : {&ct.c0, &ct.c1}) {
    for (std::size_t r = 0; r < count; ++r) {
      for (std::size_t i = 0; i < n; ++i) put_u64(bytes, poly->row(r)[i]);
    }
  }
  return bytes;
}

Ciphertext CkksContext::deserialize(const std::uint8_t* data,
                                    std::size_t size) const {
  if (size < kHeaderBytes || std::memcmp(data, kMagic, 4) != 0) {
    throw DataError("not a ciphertext blob");
  }
  if (get_u16(data + 4) != kFormatVersion) {
    throw DataError("unsupported ciphertext format version");
  }
  const std::size_t n = get_u32(data + 6);
  if (n != params_.ring_degree) {
    throw DataError("ciphertext ring degree does not match the context");
  }
  const int level = data[10];
  const int scale_bits = data[11];
  const std::size_t count = data[12];
  if (level > top_level() || count != static_cast<std::size_t>(level) + 1) {
    throw DataError("ciphertext level inconsistent with the modulus chain");
  }
  if (size != kHeaderBytes + 2 * count * n * sizeof(u64)) {
    throw DataError("ciphertext blob length mismatch");
  }

  Ciphertext ct;
  ct.c0 = PolyRns(basis_, count, false, Domain::evaluation);
  ct.c1 = PolyRns(basis_, count, false, Domain::evaluation);
  ct.scale = std::pow(2.0, scale_bits);
  const std::uint8_t* p = data + kHeaderBytes;
  for (PolyRns* poly : {&ct.c0, &ct.c1}) {
    for (std::size_t r = 0; r < count; ++r) {
      const Modulus& q = basis_->prime(r);
      for (std::size_t i = 0; i < n; ++i, p += sizeof(u64)) {
        const u64 v = get_u64(p);
        if (v >= q.value) throw DataError("residue outside its modulus");
        poly->row(r)[i] = v;
      }
    }
  }
  return ct;
}

}  // namespace lancelot
