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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hermes/bfv.hpp"
#include "hermes/errors.hpp"

// Binary containers. All integers are fixed-width little-endian; the layouts
// are bit-exact so golden tests hold across platforms.
//
// Ciphertext container ("HPC1"):
//   magic[4] | version u16 | params_id[32] | N u64 | t u64 | prime_count u64 |
//   primes u64 each | domain u8 | c0 residues | c1 residues
// with residues in prime-major order, one u64 per coefficient.
//
// Key containers ("HPK1") share the header and add a role tag (SK/PK/GK).

namespace hermes {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(hermes::u64 v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<hermes::u64>(v)); }
  void f64(double v) { u64(std::bit_cast<hermes::u64>(v)); }
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + len);
  }
  void tag(const char (&m)[5]) { bytes(m, 4); }

  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : p_(data), end_(data + size) {}
  explicit ByteReader(const std::vector<std::uint8_t>& v) : ByteReader(v.data(), v.size()) {}

  std::uint8_t u8() {
    need(1);
    return *p_++;
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(p_[0]) | (static_cast<std::uint16_t>(p_[1]) << 8);
    p_ += 2;
    return v;
  }
  hermes::u64 u64() {
    need(8);
    hermes::u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<hermes::u64>(p_[i]) << (8 * i);
    p_ += 8;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(void* out, std::size_t len) {
    need(len);
    std::memcpy(out, p_, len);
    p_ += len;
  }
  bool tag_matches(const char (&m)[5]) {
    need(4);
    bool ok = std::memcmp(p_, m, 4) == 0;
    p_ += 4;
    return ok;
  }
  std::size_t remaining() const { return static_cast<std::size_t>(end_ - p_); }
  void expect_end() const {
    if (p_ != end_) throw SerialError("trailing bytes after container payload");
  }

 private:
  void need(std::size_t len) const {
    if (static_cast<std::size_t>(end_ - p_) < len) throw TruncatedError("container truncated");
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

namespace detail {

inline void write_poly(ByteWriter& w, const PolyRns& p) {
  w.u8(static_cast<std::uint8_t>(p.domain()));
  for (std::size_t i = 0; i < p.basis().prime_count(); ++i) {
    for (hermes::u64 c : p.residue(i)) w.u64(c);
  }
}

inline PolyRns read_poly(ByteReader& r, const RnsBasis& basis) {
  std::uint8_t d = r.u8();
  if (d > 1) throw SerialError("bad polynomial domain flag");
  PolyRns p(basis, static_cast<PolyDomain>(d));
  for (std::size_t i = 0; i < basis.prime_count(); ++i) {
    auto res = p.residue(i);
    for (std::uint32_t j = 0; j < basis.degree(); ++j) {
      hermes::u64 c = r.u64();
      if (c >= basis.prime(i).value) throw SerialError("residue coefficient out of range");
      res[j] = c;
    }
  }
  return p;
}

inline void write_params_header(ByteWriter& w, const Context& ctx) {
  w.bytes(ctx.params_id().data(), ctx.params_id().size());
  w.u64(ctx.degree());
  w.u64(ctx.plain_modulus());
  w.u64(ctx.params().rns_primes.size());
  for (hermes::u64 q : ctx.params().rns_primes) w.u64(q);
}

inline void read_and_check_params_header(ByteReader& r, const Context& ctx) {
  ParamsId id{};
  r.bytes(id.data(), id.size());
  if (id != ctx.params_id()) throw ParamsMismatchError("container built with different parameters");
  hermes::u64 degree = r.u64();
  hermes::u64 t = r.u64();
  hermes::u64 count = r.u64();
  if (degree != ctx.degree() || t != ctx.plain_modulus() ||
      count != ctx.params().rns_primes.size()) {
    throw ParamsMismatchError("container parameter block disagrees with context");
  }
  for (hermes::u64 q : ctx.params().rns_primes) {
    if (r.u64() != q) throw ParamsMismatchError("container RNS chain disagrees with context");
  }
}

}  // namespace detail

inline constexpr std::uint16_t kContainerVersion = 1;

/// Conservative noise bound assigned to ciphertexts loaded without
/// bookkeeping: tracked budget reads zero, so the engine refreshes before
/// mutating rather than trusting an unknown history.
inline double conservative_noise_w(const Context& ctx) {
  return std::exp2(ctx.budget_threshold_log2());
}

inline std::vector<std::uint8_t> serialize_ciphertext(const Context& ctx, const Ciphertext& ct) {
  detail::check_ct(ctx, ct);
  ByteWriter w;
  w.tag("HPC1");
  w.u16(kContainerVersion);
  detail::write_params_header(w, ctx);
  w.u8(static_cast<std::uint8_t>(ct.c0.domain()));
  for (const PolyRns* p : {&ct.c0, &ct.c1}) {
    for (std::size_t i = 0; i < p->basis().prime_count(); ++i) {
      for (hermes::u64 c : p->residue(i)) w.u64(c);
    }
  }
  return w.take();
}

inline Ciphertext deserialize_ciphertext(const Context& ctx, const std::uint8_t* data,
                                         std::size_t size, double noise_w_hint = -1.0) {
  ByteReader r(data, size);
  if (!r.tag_matches("HPC1")) throw BadMagicError("not a ciphertext container");
  if (r.u16() != kContainerVersion) throw BadVersionError("unsupported ciphertext container version");
  detail::read_and_check_params_header(r, ctx);
  std::uint8_t d = r.u8();
  if (d > 1) throw SerialError("bad domain flag");
  Ciphertext ct;
  ct.c0 = PolyRns(ctx.rns(), static_cast<PolyDomain>(d));
  ct.c1 = PolyRns(ctx.rns(), static_cast<PolyDomain>(d));
  for (PolyRns* p : {&ct.c0, &ct.c1}) {
    for (std::size_t i = 0; i < ctx.rns().prime_count(); ++i) {
      auto res = p->residue(i);
      for (std::uint32_t j = 0; j < ctx.degree(); ++j) {
        hermes::u64 c = r.u64();
        if (c >= ctx.rns().prime(i).value) throw SerialError("residue out of range");
        res[j] = c;
      }
    }
  }
  r.expect_end();
  ct.params_id = ctx.params_id();
  // no reachable ciphertext has a tracked bound below the fresh one, so a
  // hint under it (e.g. a zeroed record) is clamped rather than trusted
  ct.noise_w = noise_w_hint >= 0.0 ? std::max(noise_w_hint, ctx.fresh_noise())
                                   : conservative_noise_w(ctx);
  return ct;
}

inline Ciphertext deserialize_ciphertext(const Context& ctx, const std::vector<std::uint8_t>& v,
                                         double noise_w_hint = -1.0) {
  return deserialize_ciphertext(ctx, v.data(), v.size(), noise_w_hint);
}

/// Expected byte size of a serialized ciphertext under these parameters.
inline std::size_t ciphertext_container_size(const Context& ctx) {
  std::size_t header = 4 + 2 + 32 + 8 + 8 + 8 + 8 * ctx.params().rns_primes.size() + 1;
  return header + 2 * ctx.params().rns_primes.size() * std::size_t(ctx.degree()) * 8;
}

// --- key files ----------------------------------------------------------

enum class KeyRole : std::uint8_t { Secret = 0, Public = 1, Galois = 2 };

namespace detail {

inline void write_key_header(ByteWriter& w, const Context& ctx, KeyRole role) {
  w.tag("HPK1");
  w.u16(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(role));
  write_params_header(w, ctx);
  w.u64(ctx.params().noise_bound);
  w.u64(ctx.params().decomp_bits);
}

inline KeyRole read_key_header(ByteReader& r, const Context& ctx) {
  if (!r.tag_matches("HPK1")) throw BadMagicError("not a key container");
  if (r.u16() != kContainerVersion) throw BadVersionError("unsupported key container version");
  std::uint8_t role = r.u8();
  if (role > 2) throw SerialError("bad key role tag");
  read_and_check_params_header(r, ctx);
  if (r.u64() != ctx.params().noise_bound || r.u64() != ctx.params().decomp_bits) {
    throw ParamsMismatchError("key container parameter block disagrees with context");
  }
  return static_cast<KeyRole>(role);
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize_secret_key(const Context& ctx, const SecretKey& sk) {
  ByteWriter w;
  detail::write_key_header(w, ctx, KeyRole::Secret);
  detail::write_poly(w, sk.s);
  return w.take();
}

inline std::vector<std::uint8_t> serialize_public_key(const Context& ctx, const PublicKey& pk) {
  ByteWriter w;
  detail::write_key_header(w, ctx, KeyRole::Public);
  detail::write_poly(w, pk.b_ntt);
  detail::write_poly(w, pk.a_ntt);
  return w.take();
}

inline std::vector<std::uint8_t> serialize_galois_keys(const Context& ctx,
                                                       const GaloisKeySet& keys) {
  ByteWriter w;
  detail::write_key_header(w, ctx, KeyRole::Galois);
  auto steps = keys.steps();
  w.u64(steps.size());
  for (std::int32_t s : steps) {
    const KeySwitchKey& k = keys.get(s);
    w.i64(s);
    w.u64(k.b_ntt.size());
    for (std::size_t i = 0; i < k.b_ntt.size(); ++i) {
      detail::write_poly(w, k.b_ntt[i]);
      detail::write_poly(w, k.a_ntt[i]);
    }
  }
  return w.take();
}

inline SecretKey deserialize_secret_key(const Context& ctx, const std::vector<std::uint8_t>& data) {
  ByteReader r(data);
  if (detail::read_key_header(r, ctx) != KeyRole::Secret) throw SerialError("not a secret key file");
  SecretKey sk;
  sk.s = detail::read_poly(r, ctx.rns());
  r.expect_end();
  sk.s_ntt = sk.s.domain() == PolyDomain::Ntt ? sk.s : ntt_forward(sk.s);
  sk.params_id = ctx.params_id();
  return sk;
}

inline PublicKey deserialize_public_key(const Context& ctx, const std::vector<std::uint8_t>& data) {
  ByteReader r(data);
  if (detail::read_key_header(r, ctx) != KeyRole::Public) throw SerialError("not a public key file");
  PublicKey pk;
  pk.b_ntt = detail::read_poly(r, ctx.rns());
  pk.a_ntt = detail::read_poly(r, ctx.rns());
  r.expect_end();
  pk.params_id = ctx.params_id();
  return pk;
}

inline GaloisKeySet deserialize_galois_keys(const Context& ctx,
                                            const std::vector<std::uint8_t>& data) {
  ByteReader r(data);
  if (detail::read_key_header(r, ctx) != KeyRole::Galois) throw SerialError("not a galois key file");
  GaloisKeySet out;
  out.set_params_id(ctx.params_id());
  hermes::u64 count = r.u64();
  for (hermes::u64 i = 0; i < count; ++i) {
    std::int64_t step = r.i64();
    hermes::u64 comps = r.u64();
    if (comps != ctx.total_decomp_components()) {
      throw ParamsMismatchError("galois key decomposition disagrees with context");
    }
    KeySwitchKey k;
    for (hermes::u64 c = 0; c < comps; ++c) {
      k.b_ntt.push_back(detail::read_poly(r, ctx.rns()));
      k.a_ntt.push_back(detail::read_poly(r, ctx.rns()));
    }
    out.insert(static_cast<std::int32_t>(step), std::move(k));
  }
  r.expect_end();
  return out;
}

/// Parse only the parameter block of any key file, so a context can be built
/// before the keys themselves are loaded.
inline SchemeParams read_key_params(const std::filesystem::path& path) {
  auto data = detail::read_file(path);
  ByteReader r(data);
  if (!r.tag_matches("HPK1")) throw BadMagicError("not a key container");
  if (r.u16() != kContainerVersion) throw BadVersionError("unsupported key container version");
  std::uint8_t role = r.u8();
  if (role > 2) throw SerialError("bad key role tag");
  SchemeParams p;
  ParamsId id{};
  r.bytes(id.data(), id.size());
  p.degree = static_cast<std::uint32_t>(r.u64());
  p.plain_modulus = r.u64();
  hermes::u64 count = r.u64();
  for (hermes::u64 i = 0; i < count; ++i) p.rns_primes.push_back(r.u64());
  p.noise_bound = static_cast<std::uint32_t>(r.u64());
  p.decomp_bits = static_cast<std::uint32_t>(r.u64());
  if (p.content_id() != id) throw ParamsMismatchError("key parameter hash does not match contents");
  return p;
}

struct KeyBundle {
  SecretKey sk;
  PublicKey pk;
  GaloisKeySet galois;
};

inline constexpr const char* kSecretKeyFile = "secret.hpk";
inline constexpr const char* kPublicKeyFile = "public.hpk";
inline constexpr const char* kGaloisKeyFile = "galois.hpk";

/// Write the key triple into a directory. The secret key file grants full
/// decryption capability; treat it accordingly.
inline void save_keys(const Context& ctx, const SecretKey& sk, const PublicKey& pk,
                      const GaloisKeySet& galois, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_file_atomic(dir / kSecretKeyFile, serialize_secret_key(ctx, sk));
  detail::write_file_atomic(dir / kPublicKeyFile, serialize_public_key(ctx, pk));
  detail::write_file_atomic(dir / kGaloisKeyFile, serialize_galois_keys(ctx, galois));
}

inline KeyBundle load_keys(const Context& ctx, const std::filesystem::path& dir) {
  KeyBundle b;
  b.sk = deserialize_secret_key(ctx, detail::read_file(dir / kSecretKeyFile));
  b.pk = deserialize_public_key(ctx, detail::read_file(dir / kPublicKeyFile));
  b.galois = deserialize_galois_keys(ctx, detail::read_file(dir / kGaloisKeyFile));
  return b;
}

}  // namespace hermes
