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

#include "hermes/numeric.hpp"
#include "hermes/rng.hpp"
#include "hermes/sha256.hpp"

using namespace hermes;

TEST_CASE("modular helpers agree with wide arithmetic") {
  Rng rng(42);
  for (int i = 0; i < 5000; ++i) {
    u64 p = find_ntt_prime(30 + static_cast<unsigned>(rng.below(30)), 2 * 16, 0);
    u64 a = rng.below(p);
    u64 b = rng.below(p);
    REQUIRE(mul_mod(a, b, p) == static_cast<u64>((u128(a) * b) % p));
    REQUIRE(add_mod(a, b, p) == (a + b) % p);
    REQUIRE(sub_mod(a, b, p) == static_cast<u64>((u128(a) + p - b) % p));
  }
}

TEST_CASE("inv_mod inverts modulo primes and composites") {
  REQUIRE(inv_mod(3, 65537) == 21846);  // 3 * 21846 = 65538 = 65537 + 1
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    u64 m = 2 + rng.below(1u << 20);
    u64 a = 1 + rng.below(m - 1);
    u64 g = std::gcd(a, m);
    if (g != 1) {
      REQUIRE_THROWS_AS(inv_mod(a, m), ParameterError);
    } else {
      REQUIRE(mul_mod(a, inv_mod(a, m), m) == 1 % m);
    }
  }
}

TEST_CASE("deterministic Miller-Rabin classifies known values") {
  REQUIRE(is_prime_u64(2));
  REQUIRE(is_prime_u64(65537));
  REQUIRE(is_prime_u64(786433));
  REQUIRE(is_prime_u64(5767169));  // 11 * 2^19 + 1
  REQUIRE(is_prime_u64(0x1FFFFFFFFFE10001ULL));
  REQUIRE_FALSE(is_prime_u64(1));
  REQUIRE_FALSE(is_prime_u64(561));      // Carmichael
  REQUIRE_FALSE(is_prime_u64(6601));     // Carmichael
  REQUIRE_FALSE(is_prime_u64(u64(65537) * 65537));
}

TEST_CASE("find_ntt_prime yields distinct NTT-friendly primes") {
  const u64 two_n = 2 * (u64(1) << 14);
  u64 p0 = find_ntt_prime(59, two_n, 0);
  u64 p1 = find_ntt_prime(59, two_n, 1);
  u64 p2 = find_ntt_prime(59, two_n, 2);
  for (u64 p : {p0, p1, p2}) {
    REQUIRE(is_prime_u64(p));
    REQUIRE(p % two_n == 1);
    REQUIRE(p < (u64(1) << 59));
  }
  REQUIRE(p0 != p1);
  REQUIRE(p1 != p2);
}

TEST_CASE("primitive root satisfies the negacyclic defining relations") {
  for (u64 n : {8ull, 16ull, 1ull << 14}) {
    u64 p = find_ntt_prime(50, 2 * n, 0);
    u64 r = find_primitive_root(p, 2 * n);
    REQUIRE(pow_mod(r, n, p) == p - 1);       // r^N = -1
    REQUIRE(pow_mod(r, 2 * n, p) == 1);       // r^(2N) = 1
  }
}

TEST_CASE("Barrett and Shoup reductions match plain modular products") {
  Rng rng(3);
  for (u64 p : {u64(97), u64(65537), find_ntt_prime(59, 32768, 0)}) {
    BarrettReducer red(p);
    for (int i = 0; i < 2000; ++i) {
      u64 a = rng.below(p);
      u64 b = rng.below(p);
      REQUIRE(red.mul(a, b) == mul_mod(a, b, p));
      u64 ws = shoup_precompute(b, p);
      REQUIRE(mul_mod_shoup(a, b, ws, p) == mul_mod(a, b, p));
    }
    // worst-case 128-bit input
    REQUIRE(red.reduce(u128(p - 1) * (p - 1)) == mul_mod(p - 1, p - 1, p));
  }
}

TEST_CASE("bit_reverse is an involution") {
  for (unsigned bits = 1; bits <= 14; ++bits) {
    for (std::uint32_t x = 0; x < (1u << bits); x += 7) {
      REQUIRE(bit_reverse(bit_reverse(x, bits), bits) == x);
    }
  }
  REQUIRE(bit_reverse(0b001, 3) == 0b100);
}

TEST_CASE("SHA-256 matches published vectors") {
  REQUIRE(Sha256::hex(Sha256::hash("abc", 3)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  REQUIRE(Sha256::hex(Sha256::hash("", 0)) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const char* msg = "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq";
  REQUIRE(Sha256::hex(Sha256::hash(msg, 56)) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // incremental updates equal one-shot hashing
  Sha256 h;
  h.update("ab", 2);
  h.update("c", 1);
  REQUIRE(Sha256::hex(h.finish()) == Sha256::hex(Sha256::hash("abc", 3)));
}

TEST_CASE("rng is deterministic under a fixed seed and respects bounds") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    u64 bound = 1 + (u64(1) << (i % 50));
    u64 va = a.below(bound);
    REQUIRE(va == b.below(bound));
    REQUIRE(va < bound);
  }
  Rng c(124);
  bool same = true;
  Rng a2(123);
  for (int i = 0; i < 16; ++i) same = same && (a2.next_u64() == c.next_u64());
  REQUIRE_FALSE(same);
}
