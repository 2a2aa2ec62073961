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

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "lancelot/ckks.hpp"
#include "lancelot/sampling.hpp"

namespace lancelot {
namespace {

struct Rig {
  CkksContext ctx;
  KeyBundle keys;
  Ciphertext ct;

  Rig()
      : ctx(CkksParams{}),
        keys(make_keys()),
        ct(make_ciphertext()) {}

  KeyBundle make_keys() {
    std::vector<std::size_t> steps = {1, 2, 3, 4, 5, 6, 7};
    for (std::size_t s = 8; s < ctx.slot_count(); s *= 2) steps.push_back(s);
    Sampler rng(101);
    return ctx.generate_keys(rng, steps);
  }

  Ciphertext make_ciphertext() {
    Sampler rng(202);
    std::vector<double> v(ctx.slot_count());
    for (double& x : v) x = rng.uniform_real() - 0.5;
    return ctx.encrypt(ctx.encode(v), keys.pk, rng);
  }
};

Rig& rig() {
  static Rig r;
  return r;
}

void BM_NttRoundtrip(benchmark::State& state) {
  Rig& r = rig();
  PolyRns poly = r.ct.c0;
  for (auto _ : state) {
    poly.ntt_inverse();
    poly.ntt_forward();
    benchmark::DoNotOptimize(poly.row(0).data());
  }
}
BENCHMARK(BM_NttRoundtrip);

void BM_Encrypt(benchmark::State& state) {
  Rig& r = rig();
  Sampler rng(303);
  std::vector<double> v(r.ctx.slot_count(), 0.25);
  const Plaintext pt = r.ctx.encode(v);
  for (auto _ : state) {
    Ciphertext ct = r.ctx.encrypt(pt, r.keys.pk, rng);
    benchmark::DoNotOptimize(ct.scale);
  }
}
BENCHMARK(BM_Encrypt);

void BM_Decrypt(benchmark::State& state) {
  Rig& r = rig();
  for (auto _ : state) {
    std::vector<double> v = r.ctx.decrypt_values(r.ct, r.keys.sk);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Decrypt);

void BM_MultRelinRescale(benchmark::State& state) {
  Rig& r = rig();
  for (auto _ : state) {
    Ciphertext out =
        r.ctx.rescale(r.ctx.relinearize(r.ctx.hsquare(r.ct), r.keys.relin));
    benchmark::DoNotOptimize(out.scale);
  }
}
BENCHMARK(BM_MultRelinRescale);

// One relinearization at the end of an 8-product accumulation versus one
// per product. The gap is the lazy relinearization payoff.
void BM_ProductChainLazy(benchmark::State& state) {
  Rig& r = rig();
  const std::size_t chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    TernaryCiphertext acc = r.ctx.hsquare(r.ct);
    for (std::size_t i = 1; i < chunks; ++i) {
      r.ctx.lazy_accumulate(acc, r.ctx.hsquare(r.ct));
    }
    Ciphertext out = r.ctx.relinearize(acc, r.keys.relin);
    benchmark::DoNotOptimize(out.scale);
  }
}
BENCHMARK(BM_ProductChainLazy)->Arg(4)->Arg(8);

void BM_ProductChainEager(benchmark::State& state) {
  Rig& r = rig();
  const std::size_t chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Ciphertext acc = r.ctx.relinearize(r.ctx.hsquare(r.ct), r.keys.relin);
    for (std::size_t i = 1; i < chunks; ++i) {
      acc = r.ctx.hadd(
          acc, r.ctx.relinearize(r.ctx.hsquare(r.ct), r.keys.relin));
    }
    benchmark::DoNotOptimize(acc.scale);
  }
}
BENCHMARK(BM_ProductChainEager)->Arg(4)->Arg(8);

void BM_Rotate(benchmark::State& state) {
  Rig& r = rig();
  for (auto _ : state) {
    Ciphertext out = r.ctx.rotate(r.ct, 1, r.keys.rotations);
    benchmark::DoNotOptimize(out.scale);
  }
}
BENCHMARK(BM_Rotate);

// A hoisted batch shares one decomposition across all steps; the
// sequential loop re-decomposes per step.
void BM_RotationsHoisted(benchmark::State& state) {
  Rig& r = rig();
  std::vector<std::size_t> steps;
  for (std::size_t s = 1; s <= static_cast<std::size_t>(state.range(0)); ++s) {
    steps.push_back(s);
  }
  for (auto _ : state) {
    std::vector<Ciphertext> out =
        r.ctx.hoisted_rotations(r.ct, steps, r.keys.rotations);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RotationsHoisted)->Arg(2)->Arg(4)->Arg(7);

void BM_RotationsSequential(benchmark::State& state) {
  Rig& r = rig();
  for (auto _ : state) {
    for (std::size_t s = 1; s <= static_cast<std::size_t>(state.range(0));
         ++s) {
      Ciphertext out = r.ctx.rotate(r.ct, s, r.keys.rotations);
      benchmark::DoNotOptimize(out.scale);
    }
  }
}
BENCHMARK(BM_RotationsSequential)->Arg(2)->Arg(4)->Arg(7);

}  // namespace
}  // namespace lancelot
