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

#ifndef LANCELOT_CKKS_HPP
#define LANCELOT_CKKS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "lancelot/encoding.hpp"
#include "lancelot/rns.hpp"
#include "lancelot/sampling.hpp"

namespace lancelot {

// Approximate-arithmetic scheme parameters. The modulus chain carries one
// base prime, `depth` rescaling primes of scale_bits bits, and one special
// prime reserved for key switching.
struct CkksParams {
  std::size_t ring_degree = 8192;
  int depth = 3;
  int scale_bits = 40;
  int first_prime_bits = 44;
  int special_prime_bits = 54;
  SecurityLevel security = SecurityLevel::bits128;
  // 0 selects dense ternary keys; otherwise the exact nonzero count of the
  // secret and of each encryption randomness vector.
  std::size_t key_hamming_weight = 64;
  // Centered binomial parameter for all error terms (variance eta/2).
  int error_eta = 21;
  double message_bound = static_cast<double>(1 << 20);

  double scale() const { return std::pow(2.0, scale_bits); }
  void validate() const;
};

struct SecretKey {
  PolyRns s;  // evaluation domain, all q primes plus the special prime
};

struct PublicKey {
  PolyRns p0, p1;  // evaluation domain over the full q chain
};

// One key-switching key: per decomposition digit j, a pair (k0_j, k1_j)
// over the full chain plus the special prime, with
//   k0_j + k1_j * s = e_j + (p mod q_j) * target  (on row j).
struct KeySwitchKey {
  std::vector<std::pair<PolyRns, PolyRns>> digits;
};

struct RelinKey {
  KeySwitchKey key;  // target = s^2
};

struct RotationKeySet {
  std::map<std::size_t, KeySwitchKey> steps;  // target = s(X^{5^step})

  bool has_step(std::size_t step) const { return steps.count(step) != 0; }
};

struct KeyBundle {
  SecretKey sk;
  PublicKey pk;
  RelinKey relin;
  RotationKeySet rotations;
};

struct Plaintext {
  PolyRns m;  // evaluation domain
  double scale = 0.0;

  int level() const { return m.level(); }
};

struct Ciphertext {
  PolyRns c0, c1;  // evaluation domain
  double scale = 0.0;

  int level() const { return c0.level(); }
  std::size_t size_bytes() const {
    return 2 * c0.row_count() * c0.degree() * sizeof(u64);
  }
};

// Degree-two ciphertext produced by multiplication, awaiting
// relinearization. Sums of triples keep a count of accumulated products.
struct TernaryCiphertext {
  PolyRns d0, d1, d2;
  double scale = 0.0;
  std::size_t accumulated = 1;

  int level() const { return d0.level(); }
};

struct OpCounts {
  u64 encryptions = 0;
  u64 additions = 0;
  u64 multiplications = 0;
  u64 relinearizations = 0;
  u64 rescales = 0;
  u64 rotations = 0;
  u64 mod_ups = 0;

  OpCounts operator-(const OpCounts& o) const;
};

class OpCounters {
 public:
  void reset();
  OpCounts snapshot() const;

  std::atomic<u64> encryptions{0};
  std::atomic<u64> additions{0};
  std::atomic<u64> multiplications{0};
  std::atomic<u64> relinearizations{0};
  std::atomic<u64> rescales{0};
  std::atomic<u64> rotations{0};
  std::atomic<u64> mod_ups{0};
};

// Rotation steps needed by a log-depth slot reduction: powers of two up
// to slots/2.
std::vector<std::size_t> default_rotation_steps(std::size_t slot_count);

class CkksContext {
 public:
  explicit CkksContext(const CkksParams& params);

  CkksContext(const CkksContext&) = delete;
  CkksContext& operator=(const CkksContext&) = delete;

  const CkksParams& params() const { return params_; }
  const std::shared_ptr<const RnsBasis>& basis() const { return basis_; }
  const Embedding& embedding() const { return embedding_; }
  std::size_t slot_count() const { return embedding_.slot_count(); }
  int top_level() const { return params_.depth; }
  double scale() const { return params_.scale(); }
  OpCounters& counters() const { return counters_; }

  KeyBundle generate_keys(Sampler& rng,
                          const std::vector<std::size_t>& rotation_steps) const;

  Plaintext encode(const std::vector<double>& values, double scale,
                   int level) const;
  Plaintext encode(const std::vector<double>& values) const;
  std::vector<double> decode(const Plaintext& pt) const;

  Ciphertext encrypt(const Plaintext& pt, const PublicKey& pk,
                     Sampler& rng) const;
  Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk) const;
  std::vector<double> decrypt_values(const Ciphertext& ct,
                                     const SecretKey& sk) const;

  Ciphertext hadd(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext hsub(const Ciphertext& a, const Ciphertext& b) const;

  // Tensor product without relinearization. The Karatsuba path trades one
  // of the three cross products for extra additions and must agree with
  // the classical path bit for bit.
  TernaryCiphertext hmult_triple(const Ciphertext& a, const Ciphertext& b,
                                 bool karatsuba = true) const;
  TernaryCiphertext hsquare(const Ciphertext& a) const;

  void lazy_accumulate(TernaryCiphertext& acc,
                       const TernaryCiphertext& t) const;

  Ciphertext relinearize(const TernaryCiphertext& t, const RelinKey& rk) const;
  Ciphertext rescale(const Ciphertext& ct) const;
  Ciphertext mult_plain(const Ciphertext& ct, const Plaintext& pt) const;

  Ciphertext rotate(const Ciphertext& ct, std::size_t step,
                    const RotationKeySet& keys) const;

  // Shares one decomposition across every step: exactly one mod_up for
  // the whole batch. Outputs are bit-identical to per-step rotate calls.
  std::vector<Ciphertext> hoisted_rotations(
      const Ciphertext& ct, const std::vector<std::size_t>& steps,
      const RotationKeySet& keys) const;

  std::vector<std::uint8_t> serialize(const Ciphertext& ct) const;
  Ciphertext deserialize(const std::uint8_t* data, std::size_t size) const;

  const GaloisTables& galois(u64 elt) const;

 private:
  PolyRns slice(const PolyRns& x, std::size_t prime_count) const;
  std::vector<PolyRns> decompose_for_keyswitch(const PolyRns& d) const;
  std::pair<PolyRns, PolyRns> inner_product_moddown(
      const std::vector<PolyRns>& digits, const KeySwitchKey& ksk,
      const GaloisTables* perm) const;
  KeySwitchKey make_switch_key(const PolyRns& target, const SecretKey& sk,
                               Sampler& rng) const;
  void sample_secret_like(PolyRns& out, Sampler& rng) const;

  CkksParams params_;
  std::shared_ptr<const RnsBasis> basis_;
  Embedding embedding_;
  mutable OpCounters counters_;
  mutable std::mutex galois_mutex_;
  mutable std::map<u64, GaloisTables> galois_cache_;
};

}  // namespace lancelot

#endif  // LANCELOT_CKKS_HPP
