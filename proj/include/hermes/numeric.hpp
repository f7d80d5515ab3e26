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

#pragma once

#include <cstdint>
#include <string>

#include "hermes/errors.hpp"

namespace hermes {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;  // a, b < p < 2^63, no overflow
  return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 neg_mod(u64 a, u64 p) { return a == 0 ? 0 : p - a; }

inline u64 mul_mod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((u128(a) * b) % p);
}

inline u64 pow_mod(u64 base, u64 exp, u64 p) {
  u64 r = 1 % p;
  base %= p;
  while (exp != 0) {
    if (exp & 1) r = mul_mod(r, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1;
  }
  return r;
}

/// Modular inverse by extended Euclid; works for any modulus, not just primes.
inline u64 inv_mod(u64 a, u64 m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw ParameterError("inv_mod: value not invertible");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

inline std::uint32_t bit_reverse(std::uint32_t x, unsigned bits) {
  std::uint32_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

inline bool is_power_of_two(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

inline unsigned log2_exact(u64 x) {
  unsigned l = 0;
  while ((u64(1) << l) < x) ++l;
  return l;
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

/// k-th prime p < 2^bits with p = 1 (mod modulus), scanning downward.
/// Deterministic, so parameter profiles are reproducible across runs.
inline u64 find_ntt_prime(unsigned bits, u64 modulus, unsigned index) {
  u64 top = (bits >= 64) ? ~u64(0) : ((u64(1) << bits) - 1);
  u64 p = (top / modulus) * modulus + 1;
  if (p > top) p -= modulus;
  unsigned found = 0;
  while (p > modulus) {
    if (is_prime_u64(p)) {
      if (found == index) return p;
      ++found;
    }
    p -= modulus;
  }
  throw ParameterError("find_ntt_prime: no prime found");
}

/// Primitive 2N-th root of unity modulo prime p (requires p = 1 mod 2N and 2N a
/// power of two). The returned r satisfies r^N = -1 (mod p).
inline u64 find_primitive_root(u64 p, u64 two_n) {
  if ((p - 1) % two_n != 0) throw ParameterError("prime is not NTT-friendly for this degree");
  u64 half = two_n / 2;
  for (u64 g = 2; g < p; ++g) {
    u64 r = pow_mod(g, (p - 1) / two_n, p);
    if (pow_mod(r, half, p) == p - 1) return r;
  }
  throw ParameterError("no primitive root found");
}

/// Shoup companion word for multiplying by the fixed operand w modulo p.
inline u64 shoup_precompute(u64 w, u64 p) {
  return static_cast<u64>((u128(w) << 64) / p);
}

/// a * w mod p using the precomputed Shoup word; requires a, w < p < 2^63.
inline u64 mul_mod_shoup(u64 a, u64 w, u64 w_shoup, u64 p) {
  u64 q = static_cast<u64>((u128(a) * w_shoup) >> 64);
  u64 r = a * w - q * p;
  return r >= p ? r - p : r;
}

/// Barrett reduction of 128-bit products for a fixed prime.
struct BarrettReducer {
  u64 p = 0;
  u64 ratio_lo = 0;  // floor(2^128 / p), low word
  u64 ratio_hi = 0;  // floor(2^128 / p), high word

  BarrettReducer() = default;
  explicit BarrettReducer(u64 prime) : p(prime) {
    u128 ratio = ~u128(0) / prime;  // == floor(2^128/p) for odd p
    ratio_lo = static_cast<u64>(ratio);
    ratio_hi = static_cast<u64>(ratio >> 64);
  }

  u64 reduce(u128 x) const {
    u64 x0 = static_cast<u64>(x);
    u64 x1 = static_cast<u64>(x >> 64);
    u64 carry = static_cast<u64>((u128(x0) * ratio_lo) >> 64);
    u128 mid = u128(x0) * ratio_hi + carry;
    u64 mid_lo = static_cast<u64>(mid);
    u64 mid_hi = static_cast<u64>(mid >> 64);
    u128 mid2 = u128(x1) * ratio_lo + mid_lo;
    u64 q = x1 * ratio_hi + mid_hi + static_cast<u64>(mid2 >> 64);
    u64 r = x0 - q * p;
    return r >= p ? r - p : r;
  }

  u64 mul(u64 a, u64 b) const { return reduce(u128(a) * b); }
};

}  // namespace hermes
