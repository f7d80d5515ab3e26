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

// Reference implementations used only by tests. They deliberately avoid the
// library's NTT/RNS fast paths: products are schoolbook, big-integer work is
// GMP, so the two routes are independent.

#pragma once

#include <gmpxx.h>

#include <vector>

#include "hermes/ring.hpp"

namespace oracle {

using hermes::u64;

/// Schoolbook negacyclic product over Z_p: O(N^2), sign flip on wraparound.
inline std::vector<u64> negacyclic_mul(const std::vector<u64>& a, const std::vector<u64>& b,
                                       u64 p) {
  const std::size_t n = a.size();
  std::vector<u64> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u64 prod = hermes::mul_mod(a[i], b[j], p);
      std::size_t k = i + j;
      if (k < n) {
        c[k] = hermes::add_mod(c[k], prod, p);
      } else {
        c[k - n] = hermes::sub_mod(c[k - n], prod, p);
      }
    }
  }
  return c;
}

/// CRT reconstruction of one RNS polynomial into big integers in [0, q),
/// recomputed from first principles with GMP.
inline std::vector<mpz_class> crt_reconstruct(const hermes::PolyRns& x) {
  const auto& basis = x.basis();
  mpz_class q = 1;
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    q *= mpz_class(static_cast<unsigned long>(basis.prime(i).value));
  }
  std::vector<mpz_class> lift;
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    mpz_class qi(static_cast<unsigned long>(basis.prime(i).value));
    mpz_class qstar = q / qi;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), qstar.get_mpz_t(), qi.get_mpz_t());
    lift.push_back(qstar * inv % q);
  }
  std::vector<mpz_class> out(basis.degree());
  for (std::uint32_t j = 0; j < basis.degree(); ++j) {
    mpz_class acc = 0;
    for (std::size_t i = 0; i < basis.prime_count(); ++i) {
      acc += lift[i] * static_cast<unsigned long>(x.residue(i)[j]);
    }
    out[j] = acc % q;
  }
  return out;
}

/// Big-integer negacyclic product mod q via GMP, for checking the RNS path
/// end to end (reconstruct, multiply in Z, reduce).
inline std::vector<mpz_class> negacyclic_mul_mpz(const std::vector<mpz_class>& a,
                                                 const std::vector<mpz_class>& b,
                                                 const mpz_class& q) {
  const std::size_t n = a.size();
  std::vector<mpz_class> c(n, mpz_class(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class prod = a[i] * b[j];
      std::size_t k = i + j;
      if (k < n) {
        c[k] += prod;
      } else {
        c[k - n] -= prod;
      }
    }
  }
  for (auto& v : c) {
    v %= q;
    if (v < 0) v += q;
  }
  return c;
}

inline mpz_class modulus_of(const hermes::RnsBasis& basis) {
  mpz_class q = 1;
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    q *= mpz_class(static_cast<unsigned long>(basis.prime(i).value));
  }
  return q;
}

}  // namespace oracle
