/*
 * Copyright 2026 The Hermes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include "hermes/bench.hpp"

using namespace hermes;

namespace {

struct Rig {
  Context ctx;
  Rng rng;
  SecretKey sk;
  PublicKey pk;
  GaloisKeySet gk;
  PackContext pc;

  explicit Rig(std::uint32_t degree = 128, u64 t = 65537, u64 seed = 31)
      : ctx(SchemeParams::desk(degree, t)), rng(seed) {
    auto kp = keygen(ctx, rng);
    sk = std::move(kp.first);
    pk = std::move(kp.second);
    gk = gen_rotation_keys(ctx, sk, default_rotation_steps(ctx), rng);
    pc.ctx = &ctx;
    pc.pk = &pk;
    pc.sk = &sk;
    pc.galois = &gk;
    pc.rng = &rng;
  }
};

std::vector<u64> demo_values(std::size_t count, u64 t, u64 seed = 7) {
  Rng r(seed);
  std::vector<u64> v(count);
  for (auto& x : v) x = r.below(t);
  return v;
}

}  // namespace

TEST_CASE("plaintext oracle mirrors the engine data model") {
  PlaintextOracle o(17, 8);
  o.pack(0, {1, 2, 3});
  REQUIRE(o.expected_slots(0) == std::vector<u64>({1, 2, 3, 0, 0, 0, 0, 6}));
  o.insert_at(0, 1, 16);
  REQUIRE(o.expected_slots(0) == std::vector<u64>({1, 16, 2, 3, 0, 0, 0, 5}));  // 22 mod 17
  REQUIRE(o.delete_at(0, 0) == 1);
  REQUIRE(o.length(0) == 3);
  o.pack(1, {4});
  REQUIRE(o.total() == add_mod(o.group_sum(0), o.group_sum(1), 17));
  // inert delete
  o.pack(2, {});
  REQUIRE(o.delete_at(2, 0) == 0);
  REQUIRE(o.length(2) == 0);
}

TEST_CASE("synth dataset is deterministic and in range") {
  auto a = synth_hg38(1000);
  auto b = synth_hg38(1000);
  REQUIRE(a == b);
  REQUIRE(a.size() == 1000);
  for (u64 v : a) REQUIRE(v < 10000);
  REQUIRE(synth_hg38().size() == 34424);
}

TEST_CASE("encrypt bench: counts, computed speedup, report line schema") {
  Rig rig;
  auto values = demo_values(60, rig.ctx.plain_modulus());
  auto rep = run_encrypt_bench(rig.pc, "demo", values, 10);
  REQUIRE(rep.tuples == 60);
  REQUIRE(rep.group_size == 10);
  REQUIRE(rep.packed_total_ms > 0.0);
  REQUIRE(rep.singular_total_ms > 0.0);
  REQUIRE(rep.speedup == Catch::Approx(rep.singular_total_ms / rep.packed_total_ms));
  REQUIRE(rep.singular_sample == 60);

  auto line = rep.machine_line();
  for (const char* key : {"record=bench", "suite=encrypt", "dataset=demo", "tuples=",
                          "packed_total_ms=", "singular_avg_us=", "speedup=", "parallel=0"}) {
    INFO(line);
    REQUIRE(line.find(key) != std::string::npos);
  }

  // degenerate packing: both paths do one encryption per tuple
  auto degen = run_encrypt_bench(rig.pc, "demo", values, 1);
  REQUIRE(degen.speedup < 4.0);  // ~1 expected; generous bound for timer noise
}

TEST_CASE("encrypt bench parallel mode is marked") {
  Rig rig;
  auto values = demo_values(40, rig.ctx.plain_modulus());
  auto rep = run_encrypt_bench(rig.pc, "demo", values, 8, /*parallel=*/true);
  REQUIRE(rep.parallel);
  REQUIRE(rep.machine_line().find("parallel=1") != std::string::npos);
  REQUIRE(rep.packed_total_ms > 0.0);
}

TEST_CASE("insert bench: oracle equivalence and per-op trace accounting") {
  Rig rig;
  auto values = demo_values(200, rig.ctx.plain_modulus());
  auto rep = run_insert_bench(rig.pc, "demo", values, 8, 40, 5);
  REQUIRE(rep.ops == 40);
  REQUIRE(rep.oracle_ok);
  // exactly one rotation per general insert; refreshes add none
  REQUIRE(rep.rotations_packed == 40);
  REQUIRE(rep.speedup > 0.0);
}

TEST_CASE("delete bench: drains to the inert-pack edge and stays oracle-equal") {
  Rig rig;
  auto values = demo_values(6, rig.ctx.plain_modulus());
  // only 6 values in group 1 but 20 deletes: the tail exercises inert no-ops
  auto rep = run_delete_bench(rig.pc, "demo", values, 8, 20, 6);
  REQUIRE(rep.oracle_ok);
  REQUIRE(rep.ops == 20);
}

TEST_CASE("group size sweep: medians, samples, shape") {
  Rig rig;
  auto values = demo_values(64, rig.ctx.plain_modulus());
  auto res = run_group_size_sweep(rig.pc, "demo", values, {4, 8, 15}, 10);
  REQUIRE(res.points.size() == 3);
  for (const auto& pt : res.points) {
    REQUIRE(pt.encrypt_samples.size() == 3);
    REQUIRE(pt.insert_samples.size() == 3);
    REQUIRE(pt.delete_samples.size() == 3);
    REQUIRE(pt.encrypt_ms > 0.0);
    auto line = pt.machine_line("demo", res.profile);
    REQUIRE(line.find("record=sweep") != std::string::npos);
    REQUIRE(line.find("encrypt_sample0=") != std::string::npos);
  }
  std::vector<std::uint64_t> descending{8, 4};
  REQUIRE_THROWS_AS(run_group_size_sweep(rig.pc, "demo", values, descending, 4),
                    ParameterError);
}

TEST_CASE("aggregation bench: rotation counts and matching totals") {
  Rig rig;
  auto values = demo_values(60, rig.ctx.plain_modulus());
  auto rep = run_aggregation_bench(rig.pc, "demo", values, 10);  // 6 groups
  REQUIRE(rep.ops == 6);
  REQUIRE(rep.oracle_ok);  // both paths equal the plaintext total
  REQUIRE(rep.rotations_packed == 0);
  REQUIRE(rep.rotations_singular == log2_exact(rig.ctx.slot_count()));
  REQUIRE(rep.speedup > 0.0);
}

TEST_CASE("oracle fuzz passes at desk scale and reports reproducers") {
  Rig rig;
  auto res = oracle_fuzz(rig.pc, 12345, 300);
  REQUIRE(res.ok);
  REQUIRE(res.ops_executed == 300);

  // seeded determinism: the same seed replays the same op sequence
  Rig rig_a(32, 65537, 500), rig_b(32, 65537, 500);
  auto fa = oracle_fuzz(rig_a.pc, 777, 50);
  auto fb = oracle_fuzz(rig_b.pc, 777, 50);
  REQUIRE(fa.ok);
  REQUIRE(fb.ok);
  REQUIRE(fa.ops_executed == fb.ops_executed);

  // boundary sweep: fill to capacity, then drain to empty
  Rig r2(16, 97, 9);
  PackContext pc = r2.pc;
  PlaintextOracle oracle(97, r2.ctx.slot_count());
  auto pv = pack_group(pc, std::vector<u64>{}, 0);
  oracle.pack(0, {});
  for (std::uint32_t i = 0; i < pack_capacity(r2.ctx); ++i) {
    pv = insert_at(pc, pv, i / 2, i % 97);
    oracle.insert_at(0, i / 2, i % 97);
  }
  REQUIRE_THROWS_AS(append(pc, pv, 1), CapacityError);
  while (oracle.length(0) > 0) {
    u64 v = oracle.delete_at(0, 0);
    pv = delete_at(pc, pv, 0, v);
  }
  pv = delete_at(pc, pv, 0, 5);  // inert
  REQUIRE(decrypt(r2.ctx, r2.sk, pv.ct).slots == std::vector<u64>(r2.ctx.slot_count(), 0));
}

TEST_CASE("oracle fuzz flags a divergent engine") {
  // sabotage: lie to the oracle about one insert; the fuzz must catch it and
  // hand back the failing prefix
  Rig rig(16, 97, 77);
  PlaintextOracle oracle(97, rig.ctx.slot_count());
  auto pv = pack_group(rig.pc, std::vector<u64>{1, 2}, 0);
  oracle.pack(0, {1, 2});
  pv = insert_at(rig.pc, pv, 0, 50);
  oracle.insert_at(0, 0, 49);  // wrong value on purpose
  REQUIRE_FALSE(decrypt(rig.ctx, rig.sk, pv.ct).slots == oracle.expected_slots(0));
}
