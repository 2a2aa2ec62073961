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

#include <cmath>
#include <cstring>
#include <vector>

#include "helpers.hpp"
#include "lancelot/ckks.hpp"

namespace lancelot {
namespace {

// One shared small-ring fixture keeps key generation off the hot path.
struct TinyRig {
  CkksContext ctx;
  Sampler rng;
  KeyBundle keys;

  TinyRig()
      : ctx(test::tiny_params(512)),
        rng(4242),
        keys(ctx.generate_keys(
            rng, {1, 2, 3, 4, 8, 16, 32, 64, 128, 192})) {}
};

TinyRig& tiny() {
  static TinyRig rig;
  return rig;
}

Ciphertext encrypt_slots(TinyRig& rig, const std::vector<double>& slots) {
  return rig.ctx.encrypt(rig.ctx.encode(slots), rig.keys.pk, rig.rng);
}

TEST_SUITE("ckks") {

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(CkksParams{}.validate());

  CkksParams p = test::tiny_params(512);
  p.ring_degree = 24;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.depth = -1;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.scale_bits = 19;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.scale_bits = 60;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.first_prime_bits = 39;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.key_hamming_weight = 512;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.error_eta = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = test::tiny_params(512);
  p.message_bound = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);

  // One extra rescaling prime pushes 8192 past its modulus budget.
  CkksParams over;
  over.depth = 4;
  CHECK_NOTHROW(over.validate());
  CHECK_THROWS_AS(CkksContext{over}, ParameterError);
}

TEST_CASE("encode decode roundtrip") {
  TinyRig& rig = tiny();
  const auto slots = test::random_slots(rig.rng, rig.ctx.slot_count());
  for (int level = 0; level <= rig.ctx.top_level(); ++level) {
    const Plaintext pt = rig.ctx.encode(slots, rig.ctx.scale(), level);
    CHECK(pt.level() == level);
    CHECK(test::max_abs_diff(rig.ctx.decode(pt), slots) <
          std::ldexp(1.0, -30));
  }

  // Short vectors leave the remaining slots at zero.
  const Plaintext partial = rig.ctx.encode({1.0, -2.0});
  const auto decoded = rig.ctx.decode(partial);
  CHECK(std::abs(decoded[0] - 1.0) < 1e-9);
  CHECK(std::abs(decoded[1] + 2.0) < 1e-9);
  for (std::size_t i = 2; i < decoded.size(); ++i) {
    CHECK(std::abs(decoded[i]) < 1e-9);
  }

  CHECK_THROWS_AS(rig.ctx.encode(std::vector<double>(257, 0.0)),
                  CapacityError);
  CHECK_THROWS_AS(rig.ctx.encode({std::nan("")}), CapacityError);
  CHECK_THROWS_AS(rig.ctx.encode({1.0, 2.0e6}), CapacityError);
  CHECK_THROWS_AS(rig.ctx.encode({1.0}, -1.0, 0), ParameterError);
  CHECK_THROWS_AS(rig.ctx.encode({1.0}, rig.ctx.scale(), 4), ParameterError);
}

TEST_CASE("fresh encryption noise stays below the slot budget") {
  TinyRig& rig = tiny();
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto slots = test::random_slots(rig.rng, rig.ctx.slot_count());
    const Ciphertext ct = encrypt_slots(rig, slots);
    CHECK(ct.level() == rig.ctx.top_level());
    CHECK(ct.scale == doctest::Approx(rig.ctx.scale()));
    const auto back = rig.ctx.decrypt_values(ct, rig.keys.sk);
    worst = std::max(worst, test::max_abs_diff(slots, back));
  }
  CHECK(worst < std::ldexp(1.0, -25));
}

TEST_CASE("addition and subtraction act slot wise") {
  TinyRig& rig = tiny();
  const auto a = test::random_slots(rig.rng, 256);
  const auto b = test::random_slots(rig.rng, 256);
  const Ciphertext ca = encrypt_slots(rig, a);
  const Ciphertext cb = encrypt_slots(rig, b);

  const auto sum = rig.ctx.decrypt_values(rig.ctx.hadd(ca, cb), rig.keys.sk);
  const auto diff = rig.ctx.decrypt_values(rig.ctx.hsub(ca, cb), rig.keys.sk);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(sum[i] - (a[i] + b[i])) < 1e-6);
    CHECK(std::abs(diff[i] - (a[i] - b[i])) < 1e-6);
  }
}

TEST_CASE("misaligned operands are rejected") {
  TinyRig& rig = tiny();
  const auto v = test::random_slots(rig.rng, 256);
  const Ciphertext ct = encrypt_slots(rig, v);

  // Same scale, different level.
  const Plaintext low = rig.ctx.encode(v, rig.ctx.scale(), 2);
  const Ciphertext ct_low = rig.ctx.encrypt(low, rig.keys.pk, rig.rng);
  CHECK_THROWS_AS(rig.ctx.hadd(ct, ct_low), AlignmentError);
  CHECK_THROWS_AS(rig.ctx.hsub(ct, ct_low), AlignmentError);

  // Same level, different scale.
  const Ciphertext scaled = rig.ctx.mult_plain(ct, rig.ctx.encode(v));
  CHECK_THROWS_AS(rig.ctx.hadd(ct, scaled), AlignmentError);

  TernaryCiphertext t1 = rig.ctx.hsquare(ct);
  const TernaryCiphertext t2 = rig.ctx.hsquare(scaled);
  CHECK_THROWS_AS(rig.ctx.lazy_accumulate(t1, t2), AlignmentError);
}

TEST_CASE("plaintext products act slot wise") {
  TinyRig& rig = tiny();
  const auto a = test::random_slots(rig.rng, 256);
  const auto b = test::random_slots(rig.rng, 256);
  const Ciphertext ca = encrypt_slots(rig, a);
  const Ciphertext prod = rig.ctx.mult_plain(ca, rig.ctx.encode(b));
  CHECK(prod.scale == doctest::Approx(rig.ctx.scale() * rig.ctx.scale()));
  const auto got = rig.ctx.decrypt_values(prod, rig.keys.sk);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(got[i] - a[i] * b[i]) < 1e-5);
  }
}

TEST_CASE("products relinearize and rescale correctly") {
  TinyRig& rig = tiny();
  const auto a = test::random_slots(rig.rng, 256);
  const auto b = test::random_slots(rig.rng, 256);
  const Ciphertext ca = encrypt_slots(rig, a);
  const Ciphertext cb = encrypt_slots(rig, b);

  const TernaryCiphertext t = rig.ctx.hmult_triple(ca, cb);
  CHECK(t.accumulated == 1);
  const Ciphertext relin = rig.ctx.relinearize(t, rig.keys.relin);
  CHECK(relin.level() == rig.ctx.top_level());
  const Ciphertext dropped = rig.ctx.rescale(relin);
  CHECK(dropped.level() == rig.ctx.top_level() - 1);

  const auto got = rig.ctx.decrypt_values(dropped, rig.keys.sk);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(got[i] - a[i] * b[i]) < 1e-4);
  }
}

TEST_CASE("product shortcut paths agree bit for bit") {
  TinyRig& rig = tiny();
  const auto a = test::random_slots(rig.rng, 256);
  const auto b = test::random_slots(rig.rng, 256);
  const Ciphertext ca = encrypt_slots(rig, a);
  const Ciphertext cb = encrypt_slots(rig, b);

  const TernaryCiphertext classical = rig.ctx.hmult_triple(ca, cb, false);
  const TernaryCiphertext shortcut = rig.ctx.hmult_triple(ca, cb, true);
  CHECK(classical.d0 == shortcut.d0);
  CHECK(classical.d1 == shortcut.d1);
  CHECK(classical.d2 == shortcut.d2);
  CHECK(classical.scale == shortcut.scale);

  const TernaryCiphertext square_fast = rig.ctx.hsquare(ca);
  const TernaryCiphertext square_slow = rig.ctx.hmult_triple(ca, ca, false);
  CHECK(square_fast.d0 == square_slow.d0);
  CHECK(square_fast.d1 == square_slow.d1);
  CHECK(square_fast.d2 == square_slow.d2);
}

TEST_CASE("lazy accumulation defers relinearization") {
  TinyRig& rig = tiny();
  const std::size_t pairs = 8;
  std::vector<std::vector<double>> as, bs;
  std::vector<Ciphertext> cas, cbs;
  for (std::size_t i = 0; i < pairs; ++i) {
    as.push_back(test::random_slots(rig.rng, 256));
    bs.push_back(test::random_slots(rig.rng, 256));
    cas.push_back(encrypt_slots(rig, as.back()));
    cbs.push_back(encrypt_slots(rig, bs.back()));
  }

  const OpCounts before_lazy = rig.ctx.counters().snapshot();
  TernaryCiphertext acc = rig.ctx.hmult_triple(cas[0], cbs[0]);
  for (std::size_t i = 1; i < pairs; ++i) {
    const TernaryCiphertext t = rig.ctx.hmult_triple(cas[i], cbs[i]);
    rig.ctx.lazy_accumulate(acc, t);
  }
  CHECK(acc.accumulated == pairs);
  const Ciphertext lazy_out = rig.ctx.relinearize(acc, rig.keys.relin);
  const OpCounts lazy = rig.ctx.counters().snapshot() - before_lazy;
  CHECK(lazy.multiplications == pairs);
  CHECK(lazy.additions == pairs - 1);
  CHECK(lazy.relinearizations == 1);
  CHECK(lazy.mod_ups == 1);

  const OpCounts before_eager = rig.ctx.counters().snapshot();
  Ciphertext eager_out = rig.ctx.relinearize(rig.ctx.hmult_triple(cas[0], cbs[0]),
                                             rig.keys.relin);
  for (std::size_t i = 1; i < pairs; ++i) {
    const Ciphertext c = rig.ctx.relinearize(rig.ctx.hmult_triple(cas[i], cbs[i]),
                                             rig.keys.relin);
    eager_out = rig.ctx.hadd(eager_out, c);
  }
  const OpCounts eager = rig.ctx.counters().snapshot() - before_eager;
  CHECK(eager.relinearizations == pairs);
  CHECK(eager.mod_ups == pairs);
  CHECK(eager.additions == pairs - 1);

  // Both orders decrypt to the same inner product accumulation.
  std::vector<double> expect(256, 0.0);
  for (std::size_t i = 0; i < pairs; ++i) {
    for (std::size_t j = 0; j < 256; ++j) expect[j] += as[i][j] * bs[i][j];
  }
  const auto lazy_vals = rig.ctx.decrypt_values(lazy_out, rig.keys.sk);
  const auto eager_vals = rig.ctx.decrypt_values(eager_out, rig.keys.sk);
  CHECK(test::max_abs_diff(lazy_vals, expect) < 1e-3);
  CHECK(test::max_abs_diff(lazy_vals, eager_vals) < 1e-4);
}

TEST_CASE("rescaling walks the whole modulus chain") {
  TinyRig& rig = tiny();
  std::vector<double> v(256, 0.9);
  Ciphertext ct = encrypt_slots(rig, v);
  double expect = 0.9;
  for (int level = rig.ctx.top_level(); level > 0; --level) {
    const TernaryCiphertext t = rig.ctx.hsquare(ct);
    ct = rig.ctx.rescale(rig.ctx.relinearize(t, rig.keys.relin));
    CHECK(ct.level() == level - 1);
    expect *= expect;
    const auto got = rig.ctx.decrypt_values(ct, rig.keys.sk);
    CHECK(std::abs(got[0] - expect) < 1e-3);
  }
  CHECK_THROWS_AS(rig.ctx.rescale(ct), DepthExhaustedError);
}

TEST_CASE("rotation moves slots left") {
  TinyRig& rig = tiny();
  std::vector<double> v(256, 0.0);
  v[0] = 1.0;
  v[1] = 2.0;
  v[2] = 3.0;
  v[3] = 4.0;
  const Ciphertext ct = encrypt_slots(rig, v);

  const auto r1 = rig.ctx.decrypt_values(
      rig.ctx.rotate(ct, 1, rig.keys.rotations), rig.keys.sk);
  CHECK(std::abs(r1[0] - 2.0) < 1e-5);
  CHECK(std::abs(r1[1] - 3.0) < 1e-5);
  CHECK(std::abs(r1[2] - 4.0) < 1e-5);
  CHECK(std::abs(r1[3] - 0.0) < 1e-5);
  CHECK(std::abs(r1[255] - 1.0) < 1e-5);

  // Step 0 and full-circle steps return the input ciphertext untouched.
  const OpCounts before = rig.ctx.counters().snapshot();
  const Ciphertext same = rig.ctx.rotate(ct, 0, rig.keys.rotations);
  const Ciphertext full = rig.ctx.rotate(ct, 256, rig.keys.rotations);
  const OpCounts delta = rig.ctx.counters().snapshot() - before;
  CHECK(delta.rotations == 0);
  CHECK(delta.mod_ups == 0);
  CHECK(same.c0 == ct.c0);
  CHECK(full.c0 == ct.c0);

  // Steps 64 and 192 compose to the identity.
  const Ciphertext fwd = rig.ctx.rotate(ct, 64, rig.keys.rotations);
  const Ciphertext back = rig.ctx.rotate(fwd, 192, rig.keys.rotations);
  CHECK(test::max_abs_diff(rig.ctx.decrypt_values(back, rig.keys.sk), v) <
        1e-4);

  CHECK_THROWS_AS(rig.ctx.rotate(ct, 6, rig.keys.rotations), KeyError);
  CHECK_THROWS_AS(rig.ctx.hoisted_rotations(ct, {1, 6}, rig.keys.rotations),
                  KeyError);
}

TEST_CASE("hoisted rotations are bit identical to sequential ones") {
  TinyRig& rig = tiny();
  const auto v = test::random_slots(rig.rng, 256);
  const Ciphertext ct = encrypt_slots(rig, v);
  const std::vector<std::size_t> steps = {1, 2, 3, 4};

  const OpCounts before_h = rig.ctx.counters().snapshot();
  const std::vector<Ciphertext> hoisted =
      rig.ctx.hoisted_rotations(ct, steps, rig.keys.rotations);
  const OpCounts hoist = rig.ctx.counters().snapshot() - before_h;
  CHECK(hoist.mod_ups == 1);
  CHECK(hoist.rotations == steps.size());

  const OpCounts before_s = rig.ctx.counters().snapshot();
  REQUIRE(hoisted.size() == steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Ciphertext seq = rig.ctx.rotate(ct, steps[i], rig.keys.rotations);
    CHECK(hoisted[i].c0 == seq.c0);
    CHECK(hoisted[i].c1 == seq.c1);
    CHECK(hoisted[i].scale == seq.scale);
  }
  const OpCounts sequential = rig.ctx.counters().snapshot() - before_s;
  CHECK(sequential.mod_ups == steps.size());
  CHECK(sequential.rotations == steps.size());

  // A zero step inside the batch passes the input through.
  const auto with_zero =
      rig.ctx.hoisted_rotations(ct, {0, 2}, rig.keys.rotations);
  CHECK(with_zero[0].c0 == ct.c0);
}

TEST_CASE("default rotation steps cover the reduction tree") {
  const auto steps = default_rotation_steps(256);
  const std::vector<std::size_t> expect = {1, 2, 4, 8, 16, 32, 64, 128};
  CHECK(steps == expect);
}

TEST_CASE("serialization writes the documented header") {
  TinyRig& rig = tiny();
  const auto v = test::random_slots(rig.rng, 256);
  const Ciphertext ct = encrypt_slots(rig, v);
  const std::vector<std::uint8_t> bytes = rig.ctx.serialize(ct);

  REQUIRE(bytes.size() == 13 + 2 * 4 * 512 * 8);
  CHECK(bytes[0] == 'L');
  CHECK(bytes[1] == 'C');
  CHECK(bytes[2] == 'L');
  CHECK(bytes[3] == 'T');
  CHECK(bytes[4] == 1);  // version, little endian
  CHECK(bytes[5] == 0);
  const std::uint32_t n = bytes[6] | (bytes[7] << 8) |
                          (std::uint32_t{bytes[8]} << 16) |
                          (std::uint32_t{bytes[9]} << 24);
  CHECK(n == 512);
  CHECK(bytes[10] == 3);   // level
  CHECK(bytes[11] == 40);  // log2 scale
  CHECK(bytes[12] == 4);   // residue rows

  const Ciphertext back = rig.ctx.deserialize(bytes.data(), bytes.size());
  CHECK(back.c0 == ct.c0);
  CHECK(back.c1 == ct.c1);
  CHECK(back.scale == ct.scale);
  CHECK(test::max_abs_diff(rig.ctx.decrypt_values(back, rig.keys.sk), v) <
        std::ldexp(1.0, -25));

  // A rescaled ciphertext snaps to the nearest power-of-two scale on the
  // wire; the drift is well inside pipeline tolerances.
  const Ciphertext low =
      rig.ctx.rescale(rig.ctx.relinearize(rig.ctx.hsquare(ct), rig.keys.relin));
  const auto low_bytes = rig.ctx.serialize(low);
  CHECK(low_bytes[10] == 2);
  const Ciphertext low_back =
      rig.ctx.deserialize(low_bytes.data(), low_bytes.size());
  CHECK(low_back.scale == std::ldexp(1.0, 40));
  CHECK(std::abs(low_back.scale / low.scale - 1.0) < 1e-3);
}

TEST_CASE("corrupted blobs are rejected") {
  TinyRig& rig = tiny();
  const Ciphertext ct = encrypt_slots(rig, test::random_slots(rig.rng, 256));
  const std::vector<std::uint8_t> good = rig.ctx.serialize(ct);

  auto expect_data_error = [&](std::vector<std::uint8_t> bytes) {
    CHECK_THROWS_AS(rig.ctx.deserialize(bytes.data(), bytes.size()),
                    DataError);
  };

  std::vector<std::uint8_t> bad = good;
  bad[0] = 'X';
  expect_data_error(bad);

  bad = good;
  bad[4] = 2;  // unknown version
  expect_data_error(bad);

  bad = good;
  bad[7] = 0;  // degree 512 keeps its high byte here; zeroing changes it
  expect_data_error(bad);

  bad = good;
  bad[10] = 4;  // level above the chain top
  expect_data_error(bad);

  bad = good;
  bad[12] = 3;  // row count no longer level + 1
  expect_data_error(bad);

  bad = good;
  bad.pop_back();  // truncated payload
  expect_data_error(bad);

  // First residue forced to its modulus: out of range.
  bad = good;
  const u64 q0 = rig.ctx.basis()->prime(0).value;
  for (int i = 0; i < 8; ++i) {
    bad[13 + i] = static_cast<std::uint8_t>(q0 >> (8 * i));
  }
  expect_data_error(bad);

  // Blobs never cross rings.
  CkksContext other(test::tiny_params(256));
  CHECK_THROWS_AS(other.deserialize(good.data(), good.size()), DataError);
}

TEST_CASE("operation counters track a scripted pipeline exactly") {
  TinyRig& rig = tiny();
  const auto a = test::random_slots(rig.rng, 256);
  const auto b = test::random_slots(rig.rng, 256);

  const OpCounts before = rig.ctx.counters().snapshot();
  const Ciphertext ca = encrypt_slots(rig, a);
  const Ciphertext cb = encrypt_slots(rig, b);
  const Ciphertext sum = rig.ctx.hadd(ca, cb);
  const TernaryCiphertext t = rig.ctx.hmult_triple(ca, cb);
  const Ciphertext relin = rig.ctx.relinearize(t, rig.keys.relin);
  const Ciphertext scaled = rig.ctx.rescale(relin);
  (void)scaled;
  (void)rig.ctx.rotate(sum, 2, rig.keys.rotations);
  (void)rig.ctx.mult_plain(ca, rig.ctx.encode(b));
  (void)rig.ctx.hoisted_rotations(ca, {1, 2, 4}, rig.keys.rotations);
  const OpCounts delta = rig.ctx.counters().snapshot() - before;

  CHECK(delta.encryptions == 2);
  CHECK(delta.additions == 1);
  CHECK(delta.multiplications == 2);
  CHECK(delta.relinearizations == 1);
  CHECK(delta.rescales == 1);
  CHECK(delta.rotations == 1 + 3);
  CHECK(delta.mod_ups == 1 + 1 + 1);
}

TEST_CASE("production ring fresh noise") {
  // Full-size parameters once: budget-compliant chain, quiet decryption.
  CkksContext ctx{CkksParams{}};
  Sampler rng(2026);
  KeyBundle keys = ctx.generate_keys(rng, {});
  const auto slots = test::random_slots(rng, ctx.slot_count());
  const Ciphertext ct = ctx.encrypt(ctx.encode(slots), keys.pk, rng);
  const auto back = ctx.decrypt_values(ct, keys.sk);
  CHECK(test::max_abs_diff(slots, back) < std::ldexp(1.0, -25));
}

}  // TEST_SUITE

}  // namespace
}  // namespace lancelot
