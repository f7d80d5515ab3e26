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

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hermes/errors.hpp"
#include "hermes/numeric.hpp"
#include "hermes/ring.hpp"
#include "hermes/rng.hpp"
#include "hermes/sha256.hpp"

// Textbook BFV public-key scheme with CRT slot batching, plaintext-ciphertext
// arithmetic, and Galois rotation via digit-decomposed key switching. The
// engine exposes one rotation row of n = N/2 slots; the second batching row is
// zero-filled and never visible to callers.

namespace hermes {

using ParamsId = std::array<std::uint8_t, 32>;

inline std::string params_id_hex(const ParamsId& id) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : id) {
    s.push_back(k[b >> 4]);
    s.push_back(k[b & 15]);
  }
  return s;
}

struct SchemeParams {
  std::uint32_t degree = 0;           // ring degree N, power of two >= 8
  u64 plain_modulus = 0;              // t, prime with t = 1 (mod 2N)
  std::vector<u64> rns_primes;        // ciphertext modulus chain q = prod q_i
  std::uint32_t noise_bound = 21;     // B_err: centered binomial, coeffs in [-B, B]
  std::uint32_t decomp_bits = 20;     // key-switch digit width w

  std::uint32_t slot_count() const { return degree / 2; }

  /// Three ~59-bit NTT-friendly primes for the given degree. The chain is
  /// wide enough that the worst-case tracker admits at least four sequential
  /// masked updates before a refresh is required.
  static std::vector<u64> default_primes(std::uint32_t degree, std::size_t count = 3,
                                         unsigned bits = 59) {
    std::vector<u64> primes;
    primes.reserve(count);
    for (unsigned i = 0; i < count; ++i) primes.push_back(find_ntt_prime(bits, 2 * u64(degree), i));
    return primes;
  }

  static SchemeParams desk(std::uint32_t degree = 16, u64 t = 65537) {
    SchemeParams p;
    p.degree = degree;
    p.plain_modulus = t;
    p.rns_primes = default_primes(degree);
    return p;
  }

  /// N = 2^14, t = 65537: the profile used for full-scale measurements.
  static SchemeParams paper_scale() { return desk(1u << 14, 65537); }

  void validate() const {
    if (!is_power_of_two(degree) || degree < 8) {
      throw ParameterError("degree must be a power of two, at least 8");
    }
    if (!is_prime_u64(plain_modulus)) throw ParameterError("plaintext modulus must be prime");
    if (plain_modulus % (2 * u64(degree)) != 1) {
      throw ParameterError("plaintext modulus must be 1 mod 2N for slot batching");
    }
    if (rns_primes.empty()) throw ParameterError("empty RNS chain");
    for (u64 q : rns_primes) {
      if (q <= plain_modulus) throw ParameterError("RNS primes must exceed plaintext modulus");
    }
    if (noise_bound == 0) throw ParameterError("noise bound must be positive");
    if (decomp_bits == 0 || decomp_bits > 32) throw ParameterError("bad key-switch digit width");
  }

  ParamsId content_id() const {
    Sha256 h;
    auto put64 = [&h](u64 v) {
      std::uint8_t b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
      h.update(b, 8);
    };
    h.update("hermes-params-v1", 16);
    put64(degree);
    put64(plain_modulus);
    put64(noise_bound);
    put64(decomp_bits);
    put64(rns_primes.size());
    for (u64 q : rns_primes) put64(q);
    return h.finish();
  }

  bool operator==(const SchemeParams& o) const {
    return degree == o.degree && plain_modulus == o.plain_modulus && rns_primes == o.rns_primes &&
           noise_bound == o.noise_bound && decomp_bits == o.decomp_bits;
  }
};

/// Immutable evaluation context: bases, twiddle tables, slot index map, and
/// the precomputed constants every operation needs. Shared read-only across
/// threads; all operations below are pure functions of their inputs.
class Context {
 public:
  explicit Context(SchemeParams params)
      : params_(validated(std::move(params))),
        rns_(params_.degree, params_.rns_primes),
        plain_(params_.degree, {params_.plain_modulus}),
        params_id_(params_.content_id()) {
    const std::uint32_t n = params_.degree;
    const u64 t = params_.plain_modulus;

    // Slot index map: walk the order-N/2 subgroup generated by 3 mod 2N.
    // Row 0 (exposed slots) follows +3^i, row 1 follows -3^i.
    slot_map_.resize(n);
    const unsigned logn = log2_exact(n);
    const u64 m = 2 * u64(n);
    u64 pos = 1;
    for (std::uint32_t i = 0; i < n / 2; ++i) {
      slot_map_[i] = bit_reverse(static_cast<std::uint32_t>((pos - 1) / 2), logn);
      slot_map_[n / 2 + i] = bit_reverse(static_cast<std::uint32_t>((m - pos - 1) / 2), logn);
      pos = pos * 3 % m;
    }

    // rho = q mod t and Delta = (q - rho) / t, held per-residue.
    u64 rho = 1 % t;
    for (u64 q : params_.rns_primes) rho = mul_mod(rho, q % t, t);
    q_mod_t_ = rho;
    delta_mod_qi_.reserve(params_.rns_primes.size());
    for (u64 q : params_.rns_primes) {
      u64 t_inv = inv_mod(t % q, q);
      delta_mod_qi_.push_back(mul_mod(neg_mod(rho % q, q), t_inv, q));
    }

    // Big-integer constants for CRT reconstruction and decryption rounding.
    q_mpz_ = 1;
    for (u64 q : params_.rns_primes) q_mpz_ *= mpz_class(static_cast<unsigned long>(q));
    q_half_mpz_ = q_mpz_ / 2;
    t_mpz_ = static_cast<unsigned long>(t);
    delta_mpz_ = (q_mpz_ - static_cast<unsigned long>(rho)) / t_mpz_;
    crt_lift_.reserve(params_.rns_primes.size());
    for (u64 q : params_.rns_primes) {
      mpz_class qi(static_cast<unsigned long>(q));
      mpz_class q_star = q_mpz_ / qi;
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), q_star.get_mpz_t(), qi.get_mpz_t());
      crt_lift_.push_back(q_star * inv % q_mpz_);
    }

    // Key-switch digit layout.
    digits_per_prime_.reserve(params_.rns_primes.size());
    total_components_ = 0;
    for (u64 q : params_.rns_primes) {
      unsigned bits = 64 - static_cast<unsigned>(__builtin_clzll(q));
      unsigned d = (bits + params_.decomp_bits - 1) / params_.decomp_bits;
      digits_per_prime_.push_back(d);
      total_components_ += d;
    }

    log2_q_ = 0.0;
    for (u64 q : params_.rns_primes) log2_q_ += std::log2(static_cast<double>(q));
    // Decryption is exact while |v| < q/(2t) - t; one extra guard bit covers
    // the tracker's floating-point slop.
    budget_threshold_log2_ = log2_q_ - std::log2(static_cast<double>(t)) - 2.0;
  }

  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  const SchemeParams& params() const { return params_; }
  const RnsBasis& rns() const { return rns_; }
  const RnsBasis& plain_basis() const { return plain_; }
  const ParamsId& params_id() const { return params_id_; }
  std::uint32_t degree() const { return params_.degree; }
  std::uint32_t slot_count() const { return params_.degree / 2; }
  u64 plain_modulus() const { return params_.plain_modulus; }
  u64 q_mod_t() const { return q_mod_t_; }
  u64 delta_mod_qi(std::size_t i) const { return delta_mod_qi_[i]; }
  const std::vector<std::uint32_t>& slot_index_map() const { return slot_map_; }
  double log2_q() const { return log2_q_; }

  const mpz_class& q_mpz() const { return q_mpz_; }
  const mpz_class& q_half_mpz() const { return q_half_mpz_; }
  const mpz_class& delta_mpz() const { return delta_mpz_; }
  const mpz_class& crt_lift(std::size_t i) const { return crt_lift_[i]; }

  unsigned digits_for_prime(std::size_t i) const { return digits_per_prime_[i]; }
  unsigned total_decomp_components() const { return total_components_; }

  /// Automorphism exponent realizing rotation by `step`: 3^(step mod n) mod 2N.
  u64 galois_exponent(std::int32_t step) const {
    const u64 n = slot_count();
    u64 s = static_cast<u64>(((step % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                             static_cast<std::int64_t>(n));
    return pow_mod(3, s, 2 * u64(degree()));
  }

  // --- worst-case noise model (bounds on |v|, where c0 + c1 s = Delta m + v) ---

  double fresh_noise() const {
    return static_cast<double>(params_.noise_bound) * (2.0 * degree() + 1.0);
  }
  double mult_plain_noise(double w) const {
    const double t = static_cast<double>(params_.plain_modulus);
    return (w + t) * (0.5 * degree() * t) + t;
  }
  double add_plain_noise(double w) const { return w + static_cast<double>(params_.plain_modulus); }
  double add_ct_noise(double w1, double w2) const { return w1 + w2; }
  double keyswitch_noise(double w) const {
    return w + static_cast<double>(total_components_) * degree() *
                   std::ldexp(1.0, static_cast<int>(params_.decomp_bits)) * params_.noise_bound;
  }
  /// Guarded correctness threshold: tracked budget > 0 implies exact decryption.
  double budget_threshold_log2() const { return budget_threshold_log2_; }

 private:
  static SchemeParams validated(SchemeParams p) {
    p.validate();
    return p;
  }

  SchemeParams params_;
  RnsBasis rns_;
  RnsBasis plain_;
  ParamsId params_id_;
  std::vector<std::uint32_t> slot_map_;
  std::vector<u64> delta_mod_qi_;
  u64 q_mod_t_ = 0;
  mpz_class q_mpz_, q_half_mpz_, t_mpz_, delta_mpz_;
  std::vector<mpz_class> crt_lift_;
  std::vector<unsigned> digits_per_prime_;
  unsigned total_components_ = 0;
  double log2_q_ = 0.0;
  double budget_threshold_log2_ = 0.0;
};

/// Batched plaintext: the exposed slot vector plus its R_t encoding.
struct PlaintextVec {
  std::vector<u64> slots;  // length n, entries in Z_t
  PolyRns poly;            // element of R_t, coefficient domain
};

inline PlaintextVec encode_slots(const Context& ctx, std::span<const u64> values) {
  const std::uint32_t n = ctx.slot_count();
  if (values.size() > n) throw RangeError("too many slot values");
  const u64 t = ctx.plain_modulus();
  PlaintextVec out;
  out.slots.assign(n, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= t) throw RangeError("slot value not in Z_t");
    out.slots[i] = values[i];
  }
  PolyRns poly(ctx.plain_basis(), PolyDomain::Ntt);
  auto res = poly.residue(0);
  const auto& map = ctx.slot_index_map();
  for (std::uint32_t i = 0; i < n; ++i) res[map[i]] = out.slots[i];
  // row 1 (map[n..2n-1]) stays zero
  ntt_inverse_inplace(poly);
  out.poly = std::move(poly);
  return out;
}

inline std::vector<u64> decode_slots(const Context& ctx, const PolyRns& plain_poly) {
  if (!plain_poly.basis().same_basis(ctx.plain_basis())) {
    throw ParameterError("plaintext polynomial from a different parameter set");
  }
  PolyRns eval = plain_poly.domain() == PolyDomain::Ntt ? plain_poly : ntt_forward(plain_poly);
  const auto& map = ctx.slot_index_map();
  const std::uint32_t n = ctx.slot_count();
  std::vector<u64> out(n);
  auto res = eval.residue(0);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = res[map[i]];
  return out;
}

inline std::vector<u64> decode_slots(const Context& ctx, const PlaintextVec& pt) {
  return decode_slots(ctx, pt.poly);
}

struct SecretKey {
  PolyRns s;      // ternary, coefficient domain
  PolyRns s_ntt;  // cached NTT form
  ParamsId params_id{};
};

struct PublicKey {
  PolyRns b_ntt;  // -(a s + e), NTT domain
  PolyRns a_ntt;  // uniform, NTT domain
  ParamsId params_id{};
};

/// Ciphertext (c0, c1) in R_q^2, coefficient domain, with the worst-case
/// noise bound carried alongside (bound on |v| where c0 + c1 s = Delta m + v).
struct Ciphertext {
  PolyRns c0, c1;
  ParamsId params_id{};
  double noise_w = 0.0;
};

namespace detail {

inline void check_ct(const Context& ctx, const Ciphertext& ct) {
  if (ct.params_id != ctx.params_id()) throw ParameterError("ciphertext bound to different parameters");
}

inline void check_plain(const Context& ctx, const PlaintextVec& pt) {
  if (!pt.poly.valid() || !pt.poly.basis().same_basis(ctx.plain_basis())) {
    throw ParameterError("plaintext bound to different parameters");
  }
}

/// Slightly inflate a tracked bound so double rounding can never understate it.
inline double inflate(double w) { return w * (1.0 + 1e-9); }

/// Delta * m lifted into R_q (coefficient domain).
inline PolyRns delta_times_plain(const Context& ctx, const PlaintextVec& pt) {
  PolyRns out(ctx.rns(), PolyDomain::Coefficient);
  auto coeffs = pt.poly.residue(0);
  const auto& basis = ctx.rns();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 q = basis.prime(i).value;
    const u64 d = ctx.delta_mod_qi(i);
    const u64 d_shoup = shoup_precompute(d, q);
    auto r = out.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) {
      r[j] = mul_mod_shoup(coeffs[j] % q, d, d_shoup, q);
    }
  }
  return out;
}

/// m lifted into R_q with centered representatives (|coeff| <= t/2), which
/// halves the worst-case expansion of plaintext multiplication.
inline PolyRns centered_lift_plain(const Context& ctx, const PlaintextVec& pt) {
  PolyRns out(ctx.rns(), PolyDomain::Coefficient);
  auto coeffs = pt.poly.residue(0);
  const u64 t = ctx.plain_modulus();
  const u64 half = t / 2;
  const auto& basis = ctx.rns();
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 q = basis.prime(i).value;
    auto r = out.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) {
      u64 c = coeffs[j];
      r[j] = c <= half ? c : q - (t - c);
    }
  }
  return out;
}

}  // namespace detail

inline std::pair<SecretKey, PublicKey> keygen(const Context& ctx, Rng& rng) {
  SecretKey sk;
  sk.s = sample_ternary(ctx.rns(), rng);
  sk.s_ntt = ntt_forward(sk.s);
  sk.params_id = ctx.params_id();

  PublicKey pk;
  pk.a_ntt = sample_uniform(ctx.rns(), rng, PolyDomain::Ntt);
  PolyRns e_ntt = ntt_forward(sample_noise(ctx.rns(), rng, ctx.params().noise_bound));
  pk.b_ntt = poly_neg(poly_add(poly_mul_pointwise(pk.a_ntt, sk.s_ntt), e_ntt));
  pk.params_id = ctx.params_id();
  return {std::move(sk), std::move(pk)};
}

inline Ciphertext encrypt(const Context& ctx, const PublicKey& pk, const PlaintextVec& pt,
                          Rng& rng) {
  if (pk.params_id != ctx.params_id()) throw ParameterError("public key bound to different parameters");
  detail::check_plain(ctx, pt);
  const unsigned noise = ctx.params().noise_bound;
  PolyRns u_ntt = ntt_forward(sample_ternary(ctx.rns(), rng));
  Ciphertext ct;
  ct.c0 = ntt_inverse(poly_mul_pointwise(pk.b_ntt, u_ntt));
  poly_add_inplace(ct.c0, sample_noise(ctx.rns(), rng, noise));
  poly_add_inplace(ct.c0, detail::delta_times_plain(ctx, pt));
  ct.c1 = ntt_inverse(poly_mul_pointwise(pk.a_ntt, u_ntt));
  poly_add_inplace(ct.c1, sample_noise(ctx.rns(), rng, noise));
  ct.params_id = ctx.params_id();
  ct.noise_w = ctx.fresh_noise();
  return ct;
}

namespace detail {

/// c0 + c1 s over R_q, coefficient domain.
inline PolyRns raw_decrypt_poly(const SecretKey& sk, const Ciphertext& ct) {
  PolyRns c1_ntt = ntt_forward(ct.c1);
  PolyRns y = ntt_inverse(poly_mul_pointwise(c1_ntt, sk.s_ntt));
  poly_add_inplace(y, ct.c0);
  return y;
}

/// CRT-reconstruct coefficient j of an RNS polynomial into [0, q).
inline void crt_reconstruct(const Context& ctx, const PolyRns& y, std::uint32_t j, mpz_class& out) {
  out = 0;
  for (std::size_t i = 0; i < ctx.rns().prime_count(); ++i) {
    mpz_addmul_ui(out.get_mpz_t(), ctx.crt_lift(i).get_mpz_t(),
                  static_cast<unsigned long>(y.residue(i)[j]));
  }
  mpz_mod(out.get_mpz_t(), out.get_mpz_t(), ctx.q_mpz().get_mpz_t());
}

}  // namespace detail

/// Decryption: m = round(t * (c0 + c1 s) / q) mod t. Exhausted noise is not
/// detectable here; the budget meter exists to keep callers away from it.
inline PlaintextVec decrypt(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  if (sk.params_id != ctx.params_id()) throw ParameterError("secret key bound to different parameters");
  detail::check_ct(ctx, ct);
  PolyRns y = detail::raw_decrypt_poly(sk, ct);
  PolyRns plain_poly(ctx.plain_basis(), PolyDomain::Coefficient);
  auto res = plain_poly.residue(0);
  const u64 t = ctx.plain_modulus();
  mpz_class x, num;
  for (std::uint32_t j = 0; j < ctx.degree(); ++j) {
    detail::crt_reconstruct(ctx, y, j, x);
    num = x * static_cast<unsigned long>(t) + ctx.q_half_mpz();
    mpz_fdiv_q(num.get_mpz_t(), num.get_mpz_t(), ctx.q_mpz().get_mpz_t());
    res[j] = mpz_fdiv_ui(num.get_mpz_t(), static_cast<unsigned long>(t));
  }
  PlaintextVec out;
  out.slots = decode_slots(ctx, plain_poly);
  out.poly = std::move(plain_poly);
  return out;
}

inline Ciphertext eval_add(const Context& ctx, const Ciphertext& a, const Ciphertext& b) {
  detail::check_ct(ctx, a);
  detail::check_ct(ctx, b);
  Ciphertext out;
  out.c0 = poly_add(a.c0, b.c0);
  out.c1 = poly_add(a.c1, b.c1);
  out.params_id = ctx.params_id();
  out.noise_w = detail::inflate(ctx.add_ct_noise(a.noise_w, b.noise_w));
  return out;
}

inline Ciphertext eval_sub(const Context& ctx, const Ciphertext& a, const Ciphertext& b) {
  detail::check_ct(ctx, a);
  detail::check_ct(ctx, b);
  Ciphertext out;
  out.c0 = poly_sub(a.c0, b.c0);
  out.c1 = poly_sub(a.c1, b.c1);
  out.params_id = ctx.params_id();
  out.noise_w = detail::inflate(ctx.add_ct_noise(a.noise_w, b.noise_w));
  return out;
}

inline Ciphertext eval_add_plain(const Context& ctx, const Ciphertext& a, const PlaintextVec& p) {
  detail::check_ct(ctx, a);
  detail::check_plain(ctx, p);
  Ciphertext out = a;
  poly_add_inplace(out.c0, detail::delta_times_plain(ctx, p));
  out.noise_w = detail::inflate(ctx.add_plain_noise(a.noise_w));
  return out;
}

inline Ciphertext eval_sub_plain(const Context& ctx, const Ciphertext& a, const PlaintextVec& p) {
  detail::check_ct(ctx, a);
  detail::check_plain(ctx, p);
  Ciphertext out = a;
  poly_sub_inplace(out.c0, detail::delta_times_plain(ctx, p));
  out.noise_w = detail::inflate(ctx.add_plain_noise(a.noise_w));
  return out;
}

inline Ciphertext eval_mult_plain(const Context& ctx, const Ciphertext& a, const PlaintextVec& p) {
  detail::check_ct(ctx, a);
  detail::check_plain(ctx, p);
  PolyRns m_ntt = ntt_forward(detail::centered_lift_plain(ctx, p));
  Ciphertext out;
  out.c0 = ntt_inverse(poly_mul_pointwise(ntt_forward(a.c0), m_ntt));
  out.c1 = ntt_inverse(poly_mul_pointwise(ntt_forward(a.c1), m_ntt));
  out.params_id = ctx.params_id();
  out.noise_w = detail::inflate(ctx.mult_plain_noise(a.noise_w));
  return out;
}

/// One key-switching key: per decomposition component, a pair (b, a) in NTT
/// form with b = -(a s + e) + 2^(w j) g_i s', where g_i is the CRT unit of
/// prime i and s' the source key the component re-encrypts.
struct KeySwitchKey {
  std::vector<PolyRns> b_ntt;
  std::vector<PolyRns> a_ntt;
};

class GaloisKeySet {
 public:
  GaloisKeySet() = default;

  bool has(std::int32_t step) const { return keys_.find(step) != keys_.end(); }

  const KeySwitchKey& get(std::int32_t step) const {
    auto it = keys_.find(step);
    if (it == keys_.end()) {
      throw MissingKeyError("no rotation key for step " + std::to_string(step));
    }
    return it->second;
  }

  std::vector<std::int32_t> steps() const {
    std::vector<std::int32_t> out;
    out.reserve(keys_.size());
    for (const auto& [s, _] : keys_) out.push_back(s);
    return out;
  }

  void insert(std::int32_t step, KeySwitchKey key) { keys_[step] = std::move(key); }
  const ParamsId& params_id() const { return params_id_; }
  void set_params_id(const ParamsId& id) { params_id_ = id; }
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<std::int32_t, KeySwitchKey> keys_;
  ParamsId params_id_{};
};

namespace detail {

inline KeySwitchKey make_keyswitch_key(const Context& ctx, const SecretKey& sk,
                                       const PolyRns& source_key_ntt, Rng& rng) {
  const auto& basis = ctx.rns();
  const unsigned w = ctx.params().decomp_bits;
  KeySwitchKey out;
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    const u64 qi = basis.prime(i).value;
    for (unsigned j = 0; j < ctx.digits_for_prime(i); ++j) {
      PolyRns a = sample_uniform(basis, rng, PolyDomain::Ntt);
      PolyRns e = ntt_forward(sample_noise(basis, rng, ctx.params().noise_bound));
      PolyRns b = poly_neg(poly_add(poly_mul_pointwise(a, sk.s_ntt), e));
      // add 2^(w j) * s' on residue i only (the CRT gadget is zero elsewhere)
      const u64 factor = pow_mod(2, u64(w) * j, qi);
      const u64 factor_shoup = shoup_precompute(factor, qi);
      auto dst = b.residue(i);
      auto src = source_key_ntt.residue(i);
      for (std::uint32_t c = 0; c < basis.degree(); ++c) {
        dst[c] = add_mod(dst[c], mul_mod_shoup(src[c], factor, factor_shoup, qi), qi);
      }
      out.b_ntt.push_back(std::move(b));
      out.a_ntt.push_back(std::move(a));
    }
  }
  return out;
}

/// Key switching: given x encrypted under s' as the c1 component, produce the
/// pair (sum d b, sum d a) so that adding it to (c0, 0) re-targets key s.
inline std::pair<PolyRns, PolyRns> key_switch(const Context& ctx, const PolyRns& x,
                                              const KeySwitchKey& ksk) {
  const auto& basis = ctx.rns();
  const unsigned w = ctx.params().decomp_bits;
  const u64 mask = (w >= 64) ? ~u64(0) : ((u64(1) << w) - 1);
  PolyRns acc0(basis, PolyDomain::Ntt);
  PolyRns acc1(basis, PolyDomain::Ntt);
  std::size_t comp = 0;
  PolyRns digit(basis, PolyDomain::Coefficient);
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    auto src = x.residue(i);
    for (unsigned j = 0; j < ctx.digits_for_prime(i); ++j, ++comp) {
      digit.set_domain(PolyDomain::Coefficient);
      for (std::size_t l = 0; l < basis.prime_count(); ++l) {
        auto d = digit.residue(l);
        if (l == 0) {
          for (std::uint32_t c = 0; c < basis.degree(); ++c) d[c] = (src[c] >> (w * j)) & mask;
        } else {
          auto first = digit.residue(0);
          std::copy(first.begin(), first.end(), d.begin());
        }
      }
      ntt_forward_inplace(digit);
      poly_mul_pointwise_accumulate(acc0, digit, ksk.b_ntt[comp]);
      poly_mul_pointwise_accumulate(acc1, digit, ksk.a_ntt[comp]);
    }
  }
  ntt_inverse_inplace(acc0);
  ntt_inverse_inplace(acc1);
  return {std::move(acc0), std::move(acc1)};
}

}  // namespace detail

/// Rotation keys for the given steps. Each step r must satisfy 0 < |r| < n.
inline GaloisKeySet gen_rotation_keys(const Context& ctx, const SecretKey& sk,
                                      std::span<const std::int32_t> steps, Rng& rng) {
  if (sk.params_id != ctx.params_id()) throw ParameterError("secret key bound to different parameters");
  GaloisKeySet out;
  out.set_params_id(ctx.params_id());
  const std::int64_t n = ctx.slot_count();
  for (std::int32_t step : steps) {
    if (step == 0 || step >= n || -static_cast<std::int64_t>(step) >= n) {
      throw ParameterError("rotation step must satisfy 0 < |r| < n");
    }
    if (out.has(step)) continue;
    const u64 k = ctx.galois_exponent(step);
    PolyRns rotated_key_ntt = ntt_forward(apply_automorphism(sk.s, k));
    out.insert(step, detail::make_keyswitch_key(ctx, sk, rotated_key_ntt, rng));
  }
  return out;
}

/// Steps every engine path may request: +/-1 for slot updates and the
/// powers of two for the rotation-based aggregation baseline.
inline std::vector<std::int32_t> default_rotation_steps(const Context& ctx) {
  std::vector<std::int32_t> steps;
  for (std::int64_t p = 1; p < ctx.slot_count(); p <<= 1) {
    steps.push_back(static_cast<std::int32_t>(p));
    steps.push_back(static_cast<std::int32_t>(-p));
  }
  return steps;
}

/// Cyclic slot rotation: slot i of the result holds slot (i + r) mod n of the
/// input, i.e. positive r pulls content leftward.
inline Ciphertext eval_rotate(const Context& ctx, const Ciphertext& a, std::int32_t step,
                              const GaloisKeySet& keys) {
  detail::check_ct(ctx, a);
  if (keys.params_id() != ctx.params_id()) throw ParameterError("key set bound to different parameters");
  const std::int64_t n = ctx.slot_count();
  if (step == 0 || step >= n || -static_cast<std::int64_t>(step) >= n) {
    throw ParameterError("rotation step must satisfy 0 < |r| < n");
  }
  const KeySwitchKey& ksk = keys.get(step);
  const u64 k = ctx.galois_exponent(step);
  PolyRns c0r = apply_automorphism(a.c0, k);
  PolyRns c1r = apply_automorphism(a.c1, k);
  auto [ks0, ks1] = detail::key_switch(ctx, c1r, ksk);
  Ciphertext out;
  poly_add_inplace(ks0, c0r);
  out.c0 = std::move(ks0);
  out.c1 = std::move(ks1);
  out.params_id = ctx.params_id();
  out.noise_w = detail::inflate(ctx.keyswitch_noise(a.noise_w));
  return out;
}

/// Budget reported by the key-free worst-case tracker, in bits. Positive
/// tracked budget guarantees correct decryption.
inline double tracked_budget(const Context& ctx, const Ciphertext& ct) {
  if (!std::isfinite(ct.noise_w)) return 0.0;
  if (ct.noise_w <= 1.0) return ctx.budget_threshold_log2();
  return std::max(0.0, ctx.budget_threshold_log2() - std::log2(ct.noise_w));
}

/// Exact noise budget log2(q / (2 t |v|)), measured with the secret key.
inline double noise_budget(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  if (sk.params_id != ctx.params_id()) throw ParameterError("secret key bound to different parameters");
  detail::check_ct(ctx, ct);
  PolyRns y = detail::raw_decrypt_poly(sk, ct);
  // recover m, then v = y - Delta m centered into (-q/2, q/2]
  mpz_class x, num, v, vmax(0);
  const u64 t = ctx.plain_modulus();
  for (std::uint32_t j = 0; j < ctx.degree(); ++j) {
    detail::crt_reconstruct(ctx, y, j, x);
    num = x * static_cast<unsigned long>(t) + ctx.q_half_mpz();
    mpz_fdiv_q(num.get_mpz_t(), num.get_mpz_t(), ctx.q_mpz().get_mpz_t());
    unsigned long m_j = mpz_fdiv_ui(num.get_mpz_t(), static_cast<unsigned long>(t));
    v = x - ctx.delta_mpz() * m_j;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), ctx.q_mpz().get_mpz_t());
    if (v > ctx.q_half_mpz()) v -= ctx.q_mpz();
    if (mpz_cmpabs(v.get_mpz_t(), vmax.get_mpz_t()) > 0) mpz_abs(vmax.get_mpz_t(), v.get_mpz_t());
  }
  double vbits = vmax == 0 ? 0.0 : std::log2(mpz_get_d(vmax.get_mpz_t()));
  double budget = ctx.log2_q() - std::log2(static_cast<double>(t)) - 1.0 - vbits;
  return std::max(0.0, budget);
}

}  // namespace hermes
