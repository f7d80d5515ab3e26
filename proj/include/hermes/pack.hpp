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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hermes/bfv.hpp"
#include "hermes/errors.hpp"
#include "hermes/trace.hpp"

// Packed vectors: one ciphertext holds up to n-1 payload values plus the
// running local sum in the reserved slot n-1. Slot-level insertion and
// deletion are realized with mask-rotate-add so the server never sees which
// slot changed; aggregation reads only the sum slot and performs no rotation.
//
// Layout invariants, maintained by every operation here:
//   slots [0, L)      payload values
//   slots [L, n-1)    zero
//   slot  n-1         sum of the payload mod t
//
// Masking happens before the rotation, so the shifted segment can never wrap
// into the sum slot and no separate tail-zeroing pass is needed.

namespace hermes {

struct RefreshPolicy {
  bool auto_refresh = true;     // re-encrypt instead of failing when budget runs low
  double floor_bits = 10.0;     // minimum tracked budget an update may leave behind
};

/// Everything the update engine needs in one place. Keys may be absent:
/// operations that would need a missing key throw instead of degrading.
struct PackContext {
  const Context* ctx = nullptr;
  const PublicKey* pk = nullptr;
  const SecretKey* sk = nullptr;        // enables auto-refresh and slot reads
  const GaloisKeySet* galois = nullptr;
  Rng* rng = nullptr;                   // randomness for encryptions
  RefreshPolicy policy;
  OpTrace* trace = nullptr;             // optional operation recorder

  const Context& context() const {
    if (ctx == nullptr) throw ParameterError("pack context has no scheme context");
    return *ctx;
  }
  void record(OpKind k) const {
    if (trace != nullptr) trace->record(k);
  }
  Rng& randomness() const {
    if (rng == nullptr) throw ParameterError("pack context has no randomness source");
    return *rng;
  }
};

enum class InsertMode : std::uint8_t { Plain = 0, Encrypted = 1 };

/// Ciphertext plus the plaintext bookkeeping of the pack: its group id and
/// logical length L. Values are immutable; updates return new packs.
struct PackedVector {
  Ciphertext ct;
  u64 group_id = 0;
  std::uint32_t length = 0;  // L, number of meaningful payload slots
};

/// The plaintext mask pair steering one slot update. The keep mask selects
/// the untouched prefix plus, always, the sum slot; the suffix mask selects
/// the segment to shift and never touches slot n-1. The two are disjoint, so
/// the shifted segment cannot wrap into preserved slots.
struct SlotMask {
  PlaintextVec keep;
  PlaintextVec suffix;
};

namespace detail {

inline PlaintextVec encode_mask(const Context& ctx, std::uint32_t lo, std::uint32_t hi,
                                bool include_sum_slot) {
  // mask selecting slots [lo, hi) plus optionally slot n-1
  const std::uint32_t n = ctx.slot_count();
  std::vector<u64> slots(n, 0);
  for (std::uint32_t j = lo; j < hi && j + 1 < n; ++j) slots[j] = 1;
  if (include_sum_slot) slots[n - 1] = 1;
  return encode_slots(ctx, slots);
}

inline PlaintextVec encode_delta(const Context& ctx, std::uint32_t index, u64 value) {
  // value at `index` and mirrored into the sum slot
  const std::uint32_t n = ctx.slot_count();
  std::vector<u64> slots(n, 0);
  slots[index] = value;
  slots[n - 1] = add_mod(slots[n - 1], value, ctx.plain_modulus());
  return encode_slots(ctx, slots);
}

inline PlaintextVec encode_sum_only(const Context& ctx, u64 value) {
  const std::uint32_t n = ctx.slot_count();
  std::vector<u64> slots(n, 0);
  slots[n - 1] = value;
  return encode_slots(ctx, slots);
}

}  // namespace detail

/// Masks for inserting at `index` into a pack of logical length `length`:
/// keep [0, index) + sum slot, shift [index, length).
inline SlotMask build_insert_masks(const Context& ctx, std::uint32_t index, std::uint32_t length) {
  return {detail::encode_mask(ctx, 0, index, true),
          detail::encode_mask(ctx, index, length, false)};
}

/// Masks for deleting slot `index`: keep [0, index) + sum slot, shift
/// (index, length).
inline SlotMask build_delete_masks(const Context& ctx, std::uint32_t index, std::uint32_t length) {
  return {detail::encode_mask(ctx, 0, index, true),
          detail::encode_mask(ctx, index + 1, length, false)};
}

inline std::uint32_t pack_capacity(const Context& ctx) { return ctx.slot_count() - 1; }

/// Refresh: decrypt and re-encrypt the same logical content with one fresh
/// encryption, restoring the full noise budget. L is unchanged.
inline PackedVector refresh(const PackContext& pc, const PackedVector& pv) {
  const Context& ctx = pc.context();
  if (pc.sk == nullptr || pc.pk == nullptr) {
    throw ParameterError("refresh requires both secret and public key");
  }
  PlaintextVec pt = decrypt(ctx, *pc.sk, pv.ct);
  PackedVector out;
  out.ct = encrypt(ctx, *pc.pk, encode_slots(ctx, pt.slots), pc.randomness());
  out.group_id = pv.group_id;
  out.length = pv.length;
  pc.record(OpKind::Refresh);
  return out;
}

namespace detail {

/// Enforce the refresh policy: given the tracked noise the update would end
/// with, either pass the (possibly refreshed) input through or throw.
inline PackedVector ensure_budget(const PackContext& pc, const PackedVector& pv,
                                  double projected_noise_w) {
  const Context& ctx = pc.context();
  Ciphertext probe;
  probe.noise_w = projected_noise_w;
  probe.params_id = ctx.params_id();
  if (tracked_budget(ctx, probe) >= pc.policy.floor_bits) return pv;
  if (pc.policy.auto_refresh && pc.sk != nullptr && pc.pk != nullptr) {
    return refresh(pc, pv);
  }
  throw RefreshRequiredError("update would drop noise budget below the safety floor");
}

/// Projected tracked noise after one mask-rotate-add update of a pack whose
/// current bound is w. Mirrors the operation sequence of insert_at/delete_at,
/// covering the encrypted delta mode, which adds one fresh encryption.
inline double project_update_noise(const Context& ctx, double w) {
  double keep = ctx.mult_plain_noise(w);
  double shifted = ctx.keyswitch_noise(ctx.mult_plain_noise(w));
  return ctx.add_plain_noise(ctx.add_ct_noise(keep, shifted)) + ctx.fresh_noise();
}

}  // namespace detail

/// Pack a group of values into one ciphertext: payload in slots [0, |values|),
/// zeros up to n-2, and the precomputed sum in slot n-1. Exactly one
/// encryption call.
inline PackedVector pack_group(const PackContext& pc, std::span<const u64> values, u64 group_id) {
  const Context& ctx = pc.context();
  if (pc.pk == nullptr) throw ParameterError("pack_group requires a public key");
  const std::uint32_t n = ctx.slot_count();
  if (values.size() > pack_capacity(ctx)) {
    throw CapacityError("group exceeds pack capacity n-1");
  }
  const u64 t = ctx.plain_modulus();
  std::vector<u64> slots(n, 0);
  u64 sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= t) throw RangeError("value not in Z_t");
    slots[i] = values[i];
    sum = add_mod(sum, values[i], t);
  }
  slots[n - 1] = sum;
  PackedVector out;
  out.ct = encrypt(ctx, *pc.pk, encode_slots(ctx, slots), pc.randomness());
  out.group_id = group_id;
  out.length = static_cast<std::uint32_t>(values.size());
  pc.record(OpKind::Encrypt);
  return out;
}

/// Insert value v at slot i (0 <= i <= L), shifting slots [i, L) up by one and
/// raising the sum slot by v. The same operation-type sequence runs for every
/// valid index: two mask multiplications, one rotation, and the additions.
inline PackedVector insert_at(const PackContext& pc, const PackedVector& pv, std::uint32_t index,
                              u64 value, InsertMode mode = InsertMode::Plain) {
  const Context& ctx = pc.context();
  if (pv.length >= pack_capacity(ctx)) {
    throw CapacityError("insertion beyond capacity is disallowed");
  }
  if (index > pv.length) throw IndexError("insert index exceeds logical length");
  if (value >= ctx.plain_modulus()) throw RangeError("value not in Z_t");
  if (pc.galois == nullptr) throw MissingKeyError("insert requires rotation keys");

  PackedVector base = detail::ensure_budget(pc, pv, detail::project_update_noise(ctx, pv.ct.noise_w));

  SlotMask masks = build_insert_masks(ctx, index, base.length);
  Ciphertext c_keep = eval_mult_plain(ctx, base.ct, masks.keep);
  pc.record(OpKind::MultPlain);
  Ciphertext c_suffix = eval_mult_plain(ctx, base.ct, masks.suffix);
  pc.record(OpKind::MultPlain);
  // shift content j -> j+1; the suffix was masked first, so nothing can wrap
  // into slot n-1 (L-1 <= n-3 under the capacity precondition)
  Ciphertext c_shifted = eval_rotate(ctx, c_suffix, -1, *pc.galois);
  pc.record(OpKind::Rotate);
  Ciphertext merged = eval_add(ctx, c_keep, c_shifted);
  pc.record(OpKind::AddCt);

  PlaintextVec delta = detail::encode_delta(ctx, index, value);
  PackedVector out;
  if (mode == InsertMode::Plain) {
    out.ct = eval_add_plain(ctx, merged, delta);
    pc.record(OpKind::AddPlain);
  } else {
    if (pc.pk == nullptr) throw ParameterError("encrypted insert mode requires a public key");
    Ciphertext delta_ct = encrypt(ctx, *pc.pk, delta, pc.randomness());
    pc.record(OpKind::Encrypt);
    out.ct = eval_add(ctx, merged, delta_ct);
    pc.record(OpKind::AddCt);
  }
  out.group_id = base.group_id;
  out.length = base.length + 1;
  return out;
}

/// Append: insert at index L without touching existing slots. A single
/// plaintext addition (v into slot L and slot n-1); no rotation, no mask.
inline PackedVector append(const PackContext& pc, const PackedVector& pv, u64 value) {
  const Context& ctx = pc.context();
  if (pv.length >= pack_capacity(ctx)) {
    throw CapacityError("insertion beyond capacity is disallowed");
  }
  if (value >= ctx.plain_modulus()) throw RangeError("value not in Z_t");
  PackedVector base =
      detail::ensure_budget(pc, pv, ctx.add_plain_noise(pv.ct.noise_w));
  PlaintextVec delta = detail::encode_delta(ctx, base.length, value);
  PackedVector out;
  out.ct = eval_add_plain(ctx, base.ct, delta);
  pc.record(OpKind::AddPlain);
  out.group_id = base.group_id;
  out.length = base.length + 1;
  return out;
}

/// Delete the value at slot i (caller supplies it as v_del, per the query
/// contract), pulling slots (i, L) down by one and lowering the sum slot.
/// Deleting from an empty pack is an inert no-op.
inline PackedVector delete_at(const PackContext& pc, const PackedVector& pv, std::uint32_t index,
                              u64 v_del) {
  const Context& ctx = pc.context();
  if (pv.length == 0) return pv;  // inert pack: further deletions are no-ops
  if (index >= pv.length) throw IndexError("delete index exceeds logical length");
  if (v_del >= ctx.plain_modulus()) throw RangeError("value not in Z_t");
  if (pc.galois == nullptr) throw MissingKeyError("delete requires rotation keys");

  PackedVector base = detail::ensure_budget(pc, pv, detail::project_update_noise(ctx, pv.ct.noise_w));

  SlotMask masks = build_delete_masks(ctx, index, base.length);
  Ciphertext c_keep = eval_mult_plain(ctx, base.ct, masks.keep);
  pc.record(OpKind::MultPlain);
  Ciphertext c_suffix = eval_mult_plain(ctx, base.ct, masks.suffix);
  pc.record(OpKind::MultPlain);
  // pull content j -> j-1; the old tail slot L-1 is zero by mask construction
  Ciphertext c_shifted = eval_rotate(ctx, c_suffix, +1, *pc.galois);
  pc.record(OpKind::Rotate);
  Ciphertext merged = eval_add(ctx, c_keep, c_shifted);
  pc.record(OpKind::AddCt);

  PlaintextVec aux = detail::encode_sum_only(ctx, v_del);
  PackedVector out;
  out.ct = eval_sub_plain(ctx, merged, aux);
  pc.record(OpKind::SubPlain);
  out.group_id = base.group_id;
  out.length = base.length - 1;
  return out;
}

/// Rotation-free aggregation: fold the packs with plain ciphertext addition.
/// Slot n-1 of the result decrypts to the sum of all local sums. No rotation
/// is performed on this path.
inline Ciphertext global_sum(const PackContext& pc, std::span<const PackedVector> packs) {
  const Context& ctx = pc.context();
  if (packs.empty()) throw ParameterError("global_sum of an empty pack list");
  Ciphertext acc = packs[0].ct;
  for (std::size_t i = 1; i < packs.size(); ++i) {
    acc = eval_add(ctx, acc, packs[i].ct);
    pc.record(OpKind::AddCt);
  }
  return acc;
}

/// Per-key aggregation; output iteration order follows the (ordered) input map.
inline std::map<u64, Ciphertext> group_sum(const PackContext& pc,
                                           const std::map<u64, std::vector<PackedVector>>& groups) {
  std::map<u64, Ciphertext> out;
  for (const auto& [key, packs] : groups) {
    out.emplace(key, global_sum(pc, packs));
  }
  return out;
}

/// Decrypt only the auxiliary sum slot of a ciphertext.
inline u64 extract_sum(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  PlaintextVec pt = decrypt(ctx, sk, ct);
  return pt.slots[ctx.slot_count() - 1];
}

/// Read a single slot of a pack; out-of-range indices yield an absent value
/// rather than an error, mirroring a NULL-and-warn interface.
inline std::optional<u64> decrypt_slot(const Context& ctx, const SecretKey& sk,
                                       const PackedVector& pv, std::uint32_t slot) {
  if (slot >= ctx.slot_count()) return std::nullopt;
  PlaintextVec pt = decrypt(ctx, sk, pv.ct);
  return pt.slots[slot];
}

/// Rotation-based summation baseline: log2(n) rotate-and-add doubling steps,
/// after which every slot holds the total of all n input slots. Benchmarks
/// run this on packs built without the auxiliary sum slot; the query engine
/// itself never calls it.
inline Ciphertext rotate_baseline_sum(const PackContext& pc, const Ciphertext& ct) {
  const Context& ctx = pc.context();
  if (pc.galois == nullptr) throw MissingKeyError("baseline sum requires rotation keys");
  Ciphertext acc = ct;
  for (std::int64_t step = 1; step < ctx.slot_count(); step <<= 1) {
    Ciphertext rotated = eval_rotate(ctx, acc, static_cast<std::int32_t>(step), *pc.galois);
    pc.record(OpKind::Rotate);
    acc = eval_add(ctx, acc, rotated);
    pc.record(OpKind::AddCt);
  }
  return acc;
}

}  // namespace hermes
