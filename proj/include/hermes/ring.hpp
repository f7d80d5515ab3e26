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
#include <span>
#include <vector>

#include "hermes/errors.hpp"
#include "hermes/numeric.hpp"
#include "hermes/rng.hpp"

// Exact arithmetic in R_q = Z_q[X]/(X^N + 1) with q held as a residue number
// system over NTT-friendly word-size primes. Everything here is integer-only.

namespace hermes {

struct PrimeModulus {
  u64 value = 0;  // prime, value = 1 (mod 2N)
  u64 root = 0;   // primitive 2N-th root of unity mod value
};

/// Per-prime twiddle tables for the negacyclic transform. Forward tables hold
/// powers of the 2N-th root in bit-reversed order (Cooley-Tukey layout),
/// inverse tables the corresponding inverse powers (Gentleman-Sande), each
/// with Shoup companions.
struct NttTables {
  u64 prime = 0;
  BarrettReducer barrett;
  std::vector<u64> fwd, fwd_shoup;
  std::vector<u64> inv, inv_shoup;
  u64 degree_inv = 0, degree_inv_shoup = 0;

  NttTables() = default;
  NttTables(const PrimeModulus& pm, std::uint32_t degree) : prime(pm.value), barrett(pm.value) {
    unsigned logn = log2_exact(degree);
    fwd.resize(degree);
    fwd_shoup.resize(degree);
    inv.resize(degree);
    inv_shoup.resize(degree);
    u64 root_inv = inv_mod(pm.root, prime);
    for (std::uint32_t i = 0; i < degree; ++i) {
      std::uint32_t rev = bit_reverse(i, logn);
      fwd[i] = pow_mod(pm.root, rev, prime);
      inv[i] = pow_mod(root_inv, rev, prime);
      fwd_shoup[i] = shoup_precompute(fwd[i], prime);
      inv_shoup[i] = shoup_precompute(inv[i], prime);
    }
    degree_inv = inv_mod(degree, prime);
    degree_inv_shoup = shoup_precompute(degree_inv, prime);
  }
};

/// Ordered set of pairwise-distinct NTT-friendly primes whose product is the
/// ciphertext modulus q, plus the ring degree N (a power of two, N >= 8).
class RnsBasis {
 public:
  RnsBasis(std::uint32_t degree, std::vector<u64> primes) : degree_(degree) {
    // the transform itself works from degree 4; the scheme layer enforces its
    // own higher minimum
    if (!is_power_of_two(degree) || degree < 4) {
      throw ParameterError("ring degree must be a power of two, at least 4");
    }
    if (primes.empty()) throw ParameterError("RNS basis needs at least one prime");
    primes_.reserve(primes.size());
    for (u64 p : primes) {
      if (!is_prime_u64(p)) throw ParameterError("RNS modulus is not prime");
      if (p >= (u64(1) << 62)) throw ParameterError("RNS prime too large");
      for (const auto& q : primes_) {
        if (q.value == p) throw ParameterError("duplicate RNS prime");
      }
      PrimeModulus pm;
      pm.value = p;
      pm.root = find_primitive_root(p, 2 * u64(degree));
      primes_.push_back(pm);
      tables_.emplace_back(pm, degree);
    }
    // cheap structural id for fast mismatch checks
    u64 h = 0xcbf29ce484222325ULL;
    auto mix = [&h](u64 v) {
      h ^= v;
      h *= 0x100000001b3ULL;
    };
    mix(degree);
    for (const auto& pm : primes_) mix(pm.value);
    id_ = h;
  }

  std::uint32_t degree() const { return degree_; }
  unsigned log_degree() const { return log2_exact(degree_); }
  std::size_t prime_count() const { return primes_.size(); }
  const PrimeModulus& prime(std::size_t i) const { return primes_[i]; }
  const NttTables& tables(std::size_t i) const { return tables_[i]; }
  u64 id() const { return id_; }

  bool same_basis(const RnsBasis& other) const { return id_ == other.id_; }

 private:
  std::uint32_t degree_;
  std::vector<PrimeModulus> primes_;
  std::vector<NttTables> tables_;
  u64 id_ = 0;
};

enum class PolyDomain : std::uint8_t { Coefficient = 0, Ntt = 1 };

/// Element of R_q in residue form: one length-N coefficient vector per prime,
/// stored contiguously prime-major. Immutable by convention; the arithmetic
/// below returns new values. The basis must outlive the polynomial.
class PolyRns {
 public:
  PolyRns() = default;
  explicit PolyRns(const RnsBasis& basis, PolyDomain domain = PolyDomain::Coefficient)
      : basis_(&basis), domain_(domain), words_(basis.prime_count() * basis.degree(), 0) {}

  const RnsBasis& basis() const { return *basis_; }
  bool valid() const { return basis_ != nullptr; }
  PolyDomain domain() const { return domain_; }
  void set_domain(PolyDomain d) { domain_ = d; }

  std::span<u64> residue(std::size_t i) {
    return {words_.data() + i * basis_->degree(), basis_->degree()};
  }
  std::span<const u64> residue(std::size_t i) const {
    return {words_.data() + i * basis_->degree(), basis_->degree()};
  }
  std::span<const u64> words() const { return words_; }
  std::span<u64> words() { return words_; }

  bool operator==(const PolyRns& o) const {
    return basis_->same_basis(*o.basis_) && domain_ == o.domain_ && words_ == o.words_;
  }

 private:
  const RnsBasis* basis_ = nullptr;
  PolyDomain domain_ = PolyDomain::Coefficient;
  std::vector<u64> words_;
};

namespace detail {

inline void ntt_forward_lane(std::span<u64> a, const NttTables& tb, std::uint32_t n) {
  const u64 p = tb.prime;
  std::uint32_t t = n;
  for (std::uint32_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::uint32_t i = 0; i < m; ++i) {
      const u64 w = tb.fwd[m + i];
      const u64 ws = tb.fwd_shoup[m + i];
      u64* lo = a.data() + 2 * i * t;
      u64* hi = lo + t;
      for (std::uint32_t j = 0; j < t; ++j) {
        u64 u = lo[j];
        u64 v = mul_mod_shoup(hi[j], w, ws, p);
        lo[j] = add_mod(u, v, p);
        hi[j] = sub_mod(u, v, p);
      }
    }
  }
}

inline void ntt_inverse_lane(std::span<u64> a, const NttTables& tb, std::uint32_t n) {
  const u64 p = tb.prime;
  std::uint32_t t = 1;
  for (std::uint32_t m = n; m > 1; m >>= 1) {
    const std::uint32_t h = m >> 1;
    std::uint32_t j1 = 0;
    for (std::uint32_t i = 0; i < h; ++i) {
      const u64 w = tb.inv[h + i];
      const u64 ws = tb.inv_shoup[h + i];
      u64* lo = a.data() + j1;
      u64* hi = lo + t;
      for (std::uint32_t j = 0; j < t; ++j) {
        u64 u = lo[j];
        u64 v = hi[j];
        lo[j] = add_mod(u, v, p);
        hi[j] = mul_mod_shoup(sub_mod(u, v, p), w, ws, p);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    a[j] = mul_mod_shoup(a[j], tb.degree_inv, tb.degree_inv_shoup, p);
  }
}

}  // namespace detail

inline void ntt_forward_inplace(PolyRns& p) {
  if (p.domain() != PolyDomain::Coefficient) throw DomainError("ntt_forward: input already in NTT domain");
  const auto& b = p.basis();
  for (std::size_t i = 0; i < b.prime_count(); ++i) {
    detail::ntt_forward_lane(p.residue(i), b.tables(i), b.degree());
  }
  p.set_domain(PolyDomain::Ntt);
}

inline void ntt_inverse_inplace(PolyRns& p) {
  if (p.domain() != PolyDomain::Ntt) throw DomainError("ntt_inverse: input not in NTT domain");
  const auto& b = p.basis();
  for (std::size_t i = 0; i < b.prime_count(); ++i) {
    detail::ntt_inverse_lane(p.residue(i), b.tables(i), b.degree());
  }
  p.set_domain(PolyDomain::Coefficient);
}

inline PolyRns ntt_forward(const PolyRns& p) {
  PolyRns r = p;
  ntt_forward_inplace(r);
  return r;
}

inline PolyRns ntt_inverse(const PolyRns& p) {
  PolyRns r = p;
  ntt_inverse_inplace(r);
  return r;
}

namespace detail {

inline void check_compatible(const PolyRns& a, const PolyRns& b) {
  if (!a.basis().same_basis(b.basis())) throw ParameterError("RNS basis mismatch");
  if (a.domain() != b.domain()) throw ParameterError("polynomial domain mismatch");
}

}  // namespace detail

inline void poly_add_inplace(PolyRns& a, const PolyRns& b) {
  detail::check_compatible(a, b);
  const auto& basis = a.basis();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto ra = a.residue(i);
    auto rb = b.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) ra[j] = add_mod(ra[j], rb[j], p);
  }
}

inline void poly_sub_inplace(PolyRns& a, const PolyRns& b) {
  detail::check_compatible(a, b);
  const auto& basis = a.basis();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto ra = a.residue(i);
    auto rb = b.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) ra[j] = sub_mod(ra[j], rb[j], p);
  }
}

inline PolyRns poly_add(const PolyRns& a, const PolyRns& b) {
  PolyRns r = a;
  poly_add_inplace(r, b);
  return r;
}

inline PolyRns poly_sub(const PolyRns& a, const PolyRns& b) {
  PolyRns r = a;
  poly_sub_inplace(r, b);
  return r;
}

inline PolyRns poly_neg(const PolyRns& a) {
  PolyRns r = a;
  const auto& basis = r.basis();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto ra = r.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) ra[j] = neg_mod(ra[j], p);
  }
  return r;
}

/// Pointwise product; both operands must already be in the NTT domain.
inline void poly_mul_pointwise_accumulate(PolyRns& acc, const PolyRns& a, const PolyRns& b) {
  detail::check_compatible(a, b);
  if (a.domain() != PolyDomain::Ntt) throw DomainError("pointwise product requires NTT domain");
  const auto& basis = a.basis();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const auto& red = basis.tables(i).barrett;
    auto rr = acc.residue(i);
    auto ra = a.residue(i);
    auto rb = b.residue(i);
    const u64 p = basis.prime(i).value;
    for (std::uint32_t j = 0; j < basis.degree(); ++j) {
      rr[j] = add_mod(rr[j], red.mul(ra[j], rb[j]), p);
    }
  }
}

inline PolyRns poly_mul_pointwise(const PolyRns& a, const PolyRns& b) {
  detail::check_compatible(a, b);
  if (a.domain() != PolyDomain::Ntt) throw DomainError("pointwise product requires NTT domain");
  PolyRns r(a.basis(), PolyDomain::Ntt);
  poly_mul_pointwise_accumulate(r, a, b);
  return r;
}

/// Negacyclic product a*b mod (X^N+1, q). Converts to the NTT domain as
/// needed; if both inputs are already NTT the result stays NTT, otherwise it
/// is returned in coefficient form.
inline PolyRns poly_mul(const PolyRns& a, const PolyRns& b) {
  if (!a.basis().same_basis(b.basis())) throw ParameterError("RNS basis mismatch");
  const bool both_ntt = a.domain() == PolyDomain::Ntt && b.domain() == PolyDomain::Ntt;
  PolyRns an = (a.domain() == PolyDomain::Ntt) ? a : ntt_forward(a);
  PolyRns bn = (b.domain() == PolyDomain::Ntt) ? b : ntt_forward(b);
  PolyRns r = poly_mul_pointwise(an, bn);
  if (!both_ntt) ntt_inverse_inplace(r);
  return r;
}

/// p(X) -> p(X^k) reduced mod X^N+1; k must be odd (coprime to 2N).
/// Coefficient j lands at j*k mod 2N, negated when the index wraps past N.
inline PolyRns apply_automorphism(const PolyRns& p, u64 k) {
  if (p.domain() != PolyDomain::Coefficient) {
    throw DomainError("apply_automorphism: coefficient domain required");
  }
  const auto& basis = p.basis();
  const u64 two_n = 2 * u64(basis.degree());
  if ((k & 1) == 0) throw ParameterError("automorphism exponent must be odd");
  k %= two_n;
  PolyRns out(basis, PolyDomain::Coefficient);
  const std::uint32_t n = basis.degree();
  // index walk: j*k mod 2N, maintained incrementally
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 q = basis.prime(i).value;
    auto src = p.residue(i);
    auto dst = out.residue(i);
    u64 idx = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      u64 c = src[j];
      if (idx < n) {
        dst[idx] = add_mod(dst[idx], c, q);
      } else {
        dst[idx - n] = sub_mod(dst[idx - n], c, q);
      }
      idx += k;
      if (idx >= two_n) idx -= two_n;
    }
  }
  return out;
}

// --- samplers ----------------------------------------------------------

/// Uniform element of R_q. Domain is caller's choice: a uniform residue
/// vector is uniform in either representation.
inline PolyRns sample_uniform(const RnsBasis& basis, Rng& rng,
                              PolyDomain domain = PolyDomain::Coefficient) {
  PolyRns out(basis, domain);
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto r = out.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) r[j] = rng.below(p);
  }
  return out;
}

/// Ternary polynomial with coefficients uniform over {-1, 0, 1}.
inline PolyRns sample_ternary(const RnsBasis& basis, Rng& rng) {
  PolyRns out(basis, PolyDomain::Coefficient);
  const std::uint32_t n = basis.degree();
  std::vector<int> coeffs(n);
  for (std::uint32_t j = 0; j < n; ++j) coeffs[j] = static_cast<int>(rng.below(3)) - 1;
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto r = out.residue(i);
    for (std::uint32_t j = 0; j < n; ++j) {
      r[j] = coeffs[j] < 0 ? p - 1 : static_cast<u64>(coeffs[j]);
    }
  }
  return out;
}

/// Centered-binomial noise: sum of `bound` fair +/-1 trials, so every
/// coefficient lies in [-bound, bound] and the standard deviation is
/// sqrt(bound/2).
inline PolyRns sample_noise(const RnsBasis& basis, Rng& rng, unsigned bound) {
  PolyRns out(basis, PolyDomain::Coefficient);
  const std::uint32_t n = basis.degree();
  std::vector<int> coeffs(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    int c = 0;
    for (unsigned k = 0; k < bound; ++k) c += static_cast<int>(rng.below(2)) - static_cast<int>(rng.below(2));
    coeffs[j] = c;
  }
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 p = basis.prime(i).value;
    auto r = out.residue(i);
    for (std::uint32_t j = 0; j < n; ++j) {
      r[j] = coeffs[j] < 0 ? p - static_cast<u64>(-coeffs[j]) : static_cast<u64>(coeffs[j]);
    }
  }
  return out;
}

}  // namespace hermes
