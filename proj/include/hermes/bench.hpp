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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hermes/pack.hpp"

// Measurement harness: packed vs singular encryption, slot updates, group
// size sweeps, and rotation-free vs rotation-tree aggregation, all checked
// against a cleartext shadow oracle. Timings pair identical logical
// workloads; every ratio is computed from measured values.

namespace hermes {

/// Cleartext mirror of the packed data model. After any operation sequence
/// the oracle's slot view must equal the decrypted engine state exactly.
class PlaintextOracle {
 public:
  PlaintextOracle(u64 plain_modulus, std::uint32_t slot_count)
      : t_(plain_modulus), n_(slot_count) {}

  void pack(u64 gid, const std::vector<u64>& values) {
    if (values.size() > n_ - 1) throw CapacityError("oracle: group too large");
    groups_[gid] = values;
  }

  void insert_at(u64 gid, std::uint32_t index, u64 value) {
    auto& g = groups_.at(gid);
    if (g.size() >= n_ - 1) throw CapacityError("oracle: full");
    if (index > g.size()) throw IndexError("oracle: bad index");
    g.insert(g.begin() + index, value % t_);
  }

  void append(u64 gid, u64 value) { insert_at(gid, length(gid), value); }

  u64 delete_at(u64 gid, std::uint32_t index) {
    auto& g = groups_.at(gid);
    if (g.empty()) return 0;  // inert
    if (index >= g.size()) throw IndexError("oracle: bad index");
    u64 v = g[index];
    g.erase(g.begin() + index);
    return v;
  }

  std::uint32_t length(u64 gid) const { return static_cast<std::uint32_t>(groups_.at(gid).size()); }

  u64 group_sum(u64 gid) const {
    u64 s = 0;
    for (u64 v : groups_.at(gid)) s = add_mod(s, v, t_);
    return s;
  }

  u64 total() const {
    u64 s = 0;
    for (const auto& [gid, g] : groups_) s = add_mod(s, group_sum(gid), t_);
    return s;
  }

  /// Full slot view: payload, zero tail, local sum in slot n-1.
  std::vector<u64> expected_slots(u64 gid) const {
    const auto& g = groups_.at(gid);
    std::vector<u64> slots(n_, 0);
    for (std::size_t i = 0; i < g.size(); ++i) slots[i] = g[i];
    slots[n_ - 1] = group_sum(gid);
    return slots;
  }

  const std::map<u64, std::vector<u64>>& groups() const { return groups_; }

 private:
  u64 t_;
  std::uint32_t n_;
  std::map<u64, std::vector<u64>> groups_;
};

struct BenchReport {
  std::string suite;
  std::string dataset;
  std::string profile;        // e.g. "N=16384,t=65537"
  u64 tuples = 0;
  u64 group_size = 0;
  u64 ops = 0;
  double packed_total_ms = 0;
  double packed_avg_us = 0;
  double singular_total_ms = 0;
  double singular_avg_us = 0;
  double speedup = 0;          // singular_total / packed_total, always computed
  u64 singular_sample = 0;     // tuples actually measured on the singular path
  u64 rotations_packed = 0;
  u64 rotations_singular = 0;
  u64 refreshes = 0;
  bool parallel = false;
  bool oracle_ok = true;

  std::string machine_line() const {
    std::ostringstream os;
    os << "record=bench suite=" << suite << " dataset=" << dataset << " profile=" << profile
       << " tuples=" << tuples << " group_size=" << group_size << " ops=" << ops
       << " packed_total_ms=" << packed_total_ms << " packed_avg_us=" << packed_avg_us
       << " singular_total_ms=" << singular_total_ms << " singular_avg_us=" << singular_avg_us
       << " speedup=" << speedup << " singular_sample=" << singular_sample
       << " rotations_packed=" << rotations_packed << " rotations_singular=" << rotations_singular
       << " refreshes=" << refreshes << " parallel=" << (parallel ? 1 : 0)
       << " oracle_ok=" << (oracle_ok ? 1 : 0);
    return os.str();
  }
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string profile_string(const Context& ctx) {
  return "N=" + std::to_string(ctx.degree()) + ",t=" + std::to_string(ctx.plain_modulus());
}

inline std::vector<std::vector<u64>> chunk_by_group(const std::vector<u64>& values,
                                                    u64 group_size) {
  std::vector<std::vector<u64>> out;
  for (std::size_t i = 0; i < values.size(); i += group_size) {
    out.emplace_back(values.begin() + i,
                     values.begin() + std::min<std::size_t>(i + group_size, values.size()));
  }
  return out;
}

/// Decrypted engine state equals the oracle view, slot for slot.
inline bool matches_oracle(const PackContext& pc, const PackedVector& pv,
                           const PlaintextOracle& oracle) {
  if (pc.sk == nullptr) throw ParameterError("oracle check requires the secret key");
  auto got = decrypt(pc.context(), *pc.sk, pv.ct).slots;
  auto want = oracle.expected_slots(pv.group_id);
  return got == want && pv.length == oracle.length(pv.group_id);
}

}  // namespace detail

/// Synthetic stand-in for the 34,424-entry genomic dataset: uniform values in
/// [0, 10^4), deterministic for a given seed.
inline std::vector<u64> synth_hg38(std::size_t count = 34424, u64 seed = 0x68673338) {
  Rng rng(seed);
  std::vector<u64> out(count);
  for (auto& v : out) v = rng.below(10000);
  return out;
}

/// Packed (one encryption per group) vs singular (one encryption per tuple)
/// ingestion cost. For large inputs the singular path is measured on a sample
/// and extrapolated by its per-tuple average; the sample size is reported.
inline BenchReport run_encrypt_bench(const PackContext& pc, const std::string& dataset,
                                     const std::vector<u64>& values, u64 group_size,
                                     bool parallel = false, u64 singular_sample_cap = 256) {
  const Context& ctx = pc.context();
  BenchReport rep;
  rep.suite = "encrypt";
  rep.dataset = dataset;
  rep.profile = detail::profile_string(ctx);
  rep.tuples = values.size();
  rep.group_size = group_size;
  rep.parallel = parallel;

  auto chunks = detail::chunk_by_group(values, group_size);
  std::vector<PackedVector> packs;
  packs.reserve(chunks.size());
  {
    detail::Stopwatch sw;
    if (!parallel) {
      for (std::size_t g = 0; g < chunks.size(); ++g) {
        packs.push_back(pack_group(pc, chunks[g], g));
      }
    } else {
      // group encryptions are independent; seed per-task randomness up front
      // so tasks never touch the shared generator
      std::vector<u64> seeds(chunks.size());
      for (auto& s : seeds) s = pc.randomness().next_u64();
      std::vector<std::future<PackedVector>> futs;
      for (std::size_t g = 0; g < chunks.size(); ++g) {
        futs.push_back(std::async(std::launch::async, [&, g] {
          Rng rng(seeds[g]);
          PackContext local = pc;
          local.rng = &rng;
          local.trace = nullptr;
          return pack_group(local, chunks[g], g);
        }));
      }
      for (auto& f : futs) packs.push_back(f.get());
    }
    rep.packed_total_ms = sw.ms();
  }
  rep.packed_avg_us = rep.tuples ? rep.packed_total_ms * 1000.0 / rep.tuples : 0.0;

  // oracle equivalence: the first pack must decrypt to its chunk plus sum
  if (!packs.empty() && pc.sk != nullptr) {
    PlaintextOracle oracle(ctx.plain_modulus(), ctx.slot_count());
    oracle.pack(0, chunks.front());
    rep.oracle_ok = detail::matches_oracle(pc, packs.front(), oracle);
  }

  u64 sample = std::min<u64>(values.size(), singular_sample_cap);
  rep.singular_sample = sample;
  {
    detail::Stopwatch sw;
    for (u64 i = 0; i < sample; ++i) {
      std::vector<u64> one{values[i] % ctx.plain_modulus()};
      PlaintextVec pt = encode_slots(ctx, one);
      (void)encrypt(ctx, *pc.pk, pt, pc.randomness());
    }
    double sample_ms = sw.ms();
    rep.singular_avg_us = sample ? sample_ms * 1000.0 / sample : 0.0;
    rep.singular_total_ms = rep.singular_avg_us * rep.tuples / 1000.0;
  }
  rep.speedup = rep.packed_total_ms > 0 ? rep.singular_total_ms / rep.packed_total_ms : 0.0;
  return rep;
}

namespace detail {

struct UpdateBenchSetup {
  PackedVector pack;
  PlaintextOracle oracle;
  std::vector<u64> group1;
};

/// Initialize packed state and oracle from group 1 of the dataset.
inline UpdateBenchSetup init_from_group1(const PackContext& pc, const std::vector<u64>& values,
                                         u64 group_size) {
  const Context& ctx = pc.context();
  auto chunks = chunk_by_group(values, group_size);
  if (chunks.empty()) throw ParameterError("dataset is empty");
  UpdateBenchSetup s{PackedVector{}, PlaintextOracle(ctx.plain_modulus(), ctx.slot_count()), {}};
  s.group1 = chunks.front();
  for (auto& v : s.group1) v %= ctx.plain_modulus();
  s.pack = pack_group(pc, s.group1, 0);
  s.oracle.pack(0, s.group1);
  return s;
}

}  // namespace detail

/// 100 seeded-random slot insertions: packed mode edits one ciphertext in
/// place, singular mode encrypts a fresh one-slot ciphertext per value.
inline BenchReport run_insert_bench(const PackContext& pc, const std::string& dataset,
                                    const std::vector<u64>& values, u64 group_size,
                                    u64 op_count = 100, u64 seed = 1) {
  const Context& ctx = pc.context();
  BenchReport rep;
  rep.suite = "insert";
  rep.dataset = dataset;
  rep.profile = detail::profile_string(ctx);
  rep.tuples = values.size();
  rep.group_size = group_size;
  rep.ops = op_count;

  auto setup = detail::init_from_group1(pc, values, group_size);
  if (setup.oracle.length(0) + op_count > pack_capacity(ctx)) {
    throw ParameterError("insert bench exceeds pack capacity; lower the op count or group size");
  }
  OpTrace trace;
  PackContext traced = pc;
  traced.trace = &trace;

  Rng op_rng(seed);
  std::vector<std::pair<std::uint32_t, u64>> plan;
  {
    std::uint32_t len = setup.oracle.length(0);
    for (u64 i = 0; i < op_count; ++i) {
      std::uint32_t idx = static_cast<std::uint32_t>(op_rng.below(len + 1));
      u64 val = op_rng.below(ctx.plain_modulus());
      plan.emplace_back(idx, val);
      ++len;
    }
  }

  {
    detail::Stopwatch sw;
    for (auto [idx, val] : plan) setup.pack = insert_at(traced, setup.pack, idx, val);
    rep.packed_total_ms = sw.ms();
  }
  for (auto [idx, val] : plan) setup.oracle.insert_at(0, idx, val);
  rep.packed_avg_us = rep.packed_total_ms * 1000.0 / op_count;
  rep.refreshes = trace.refreshes;
  rep.rotations_packed = trace.rotations;
  rep.oracle_ok = detail::matches_oracle(pc, setup.pack, setup.oracle);

  {
    std::vector<Ciphertext> singular;
    singular.reserve(op_count);
    detail::Stopwatch sw;
    for (auto [idx, val] : plan) {
      (void)idx;
      std::vector<u64> one{val};
      singular.push_back(encrypt(ctx, *pc.pk, encode_slots(ctx, one), pc.randomness()));
    }
    rep.singular_total_ms = sw.ms();
  }
  rep.singular_avg_us = rep.singular_total_ms * 1000.0 / op_count;
  rep.singular_sample = op_count;
  rep.speedup = rep.packed_total_ms > 0 ? rep.singular_total_ms / rep.packed_total_ms : 0.0;
  return rep;
}

/// 100 seeded-random deletions. The singular model just drops one ciphertext
/// per deletion; the packed engine pays for masking and rotation. When the
/// pack drains to empty, further deletions exercise the inert no-op path.
inline BenchReport run_delete_bench(const PackContext& pc, const std::string& dataset,
                                    const std::vector<u64>& values, u64 group_size,
                                    u64 op_count = 100, u64 seed = 2) {
  const Context& ctx = pc.context();
  BenchReport rep;
  rep.suite = "delete";
  rep.dataset = dataset;
  rep.profile = detail::profile_string(ctx);
  rep.tuples = values.size();
  rep.group_size = group_size;
  rep.ops = op_count;

  auto setup = detail::init_from_group1(pc, values, group_size);
  OpTrace trace;
  PackContext traced = pc;
  traced.trace = &trace;

  Rng op_rng(seed);
  struct Step {
    std::uint32_t index;
    u64 value;
    bool inert;
  };
  std::vector<Step> plan;
  {
    PlaintextOracle shadow = setup.oracle;
    for (u64 i = 0; i < op_count; ++i) {
      std::uint32_t len = shadow.length(0);
      if (len == 0) {
        plan.push_back({0, 0, true});
        continue;
      }
      std::uint32_t idx = static_cast<std::uint32_t>(op_rng.below(len));
      u64 val = shadow.delete_at(0, idx);
      plan.push_back({idx, val, false});
    }
  }

  {
    detail::Stopwatch sw;
    for (const auto& s : plan) setup.pack = delete_at(traced, setup.pack, s.index, s.value);
    rep.packed_total_ms = sw.ms();
  }
  for (const auto& s : plan) {
    if (!s.inert) setup.oracle.delete_at(0, s.index);
  }
  rep.packed_avg_us = rep.packed_total_ms * 1000.0 / op_count;
  rep.refreshes = trace.refreshes;
  rep.rotations_packed = trace.rotations;
  rep.oracle_ok = detail::matches_oracle(pc, setup.pack, setup.oracle);

  {
    // singular model: one ciphertext per tuple; deletion drops one
    std::vector<Ciphertext> singular;
    for (u64 v : setup.group1) {
      std::vector<u64> one{v};
      singular.push_back(encrypt(ctx, *pc.pk, encode_slots(ctx, one), pc.randomness()));
    }
    detail::Stopwatch sw;
    for (const auto& s : plan) {
      if (!singular.empty()) singular.erase(singular.begin() + (s.index % singular.size()));
    }
    rep.singular_total_ms = sw.ms();
  }
  rep.singular_avg_us = rep.singular_total_ms * 1000.0 / op_count;
  rep.singular_sample = op_count;
  rep.speedup = rep.packed_total_ms > 0 ? rep.singular_total_ms / rep.packed_total_ms : 0.0;
  return rep;
}

struct SweepPoint {
  u64 group_size = 0;
  double encrypt_ms = 0;  // medians of the raw samples
  double insert_ms = 0;
  double delete_ms = 0;
  std::vector<double> encrypt_samples, insert_samples, delete_samples;

  std::string machine_line(const std::string& dataset, const std::string& profile) const {
    std::ostringstream os;
    os << "record=sweep dataset=" << dataset << " profile=" << profile
       << " group_size=" << group_size << " encrypt_ms=" << encrypt_ms
       << " insert_ms=" << insert_ms << " delete_ms=" << delete_ms;
    auto emit = [&os](const char* key, const std::vector<double>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << " " << key << i << "=" << v[i];
    };
    emit("encrypt_sample", encrypt_samples);
    emit("insert_sample", insert_samples);
    emit("delete_sample", delete_samples);
    return os.str();
  }
};

struct SweepResult {
  std::vector<SweepPoint> points;
  bool encrypt_monotone = true;  // totals non-increasing with group size
  std::string dataset;
  std::string profile;
};

namespace detail {

inline double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace detail

/// Total latency for packed encryption of the whole dataset plus 100 updates,
/// across ascending group sizes. Each point is the median of three runs; raw
/// samples are kept for the report.
inline SweepResult run_group_size_sweep(const PackContext& pc, const std::string& dataset,
                                        const std::vector<u64>& values,
                                        const std::vector<u64>& sizes, u64 op_count = 100,
                                        int runs = 3) {
  const Context& ctx = pc.context();
  SweepResult res;
  res.dataset = dataset;
  res.profile = detail::profile_string(ctx);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] < sizes[i - 1]) throw ParameterError("sweep sizes must be ascending");
  }
  for (u64 size : sizes) {
    if (size > pack_capacity(ctx)) throw ParameterError("group size exceeds pack capacity");
    SweepPoint pt;
    pt.group_size = size;
    for (int r = 0; r < runs; ++r) {
      auto rep = run_encrypt_bench(pc, dataset, values, size, false, /*sample=*/1);
      pt.encrypt_samples.push_back(rep.packed_total_ms);
    }
    for (int r = 0; r < runs; ++r) {
      auto rep = run_insert_bench(pc, dataset, values, size, op_count, 100 + r);
      pt.insert_samples.push_back(rep.packed_total_ms);
      if (!rep.oracle_ok) throw Error("sweep: insert run diverged from oracle");
    }
    for (int r = 0; r < runs; ++r) {
      auto rep = run_delete_bench(pc, dataset, values, size, op_count, 200 + r);
      pt.delete_samples.push_back(rep.packed_total_ms);
      if (!rep.oracle_ok) throw Error("sweep: delete run diverged from oracle");
    }
    pt.encrypt_ms = detail::median3(pt.encrypt_samples);
    pt.insert_ms = detail::median3(pt.insert_samples);
    pt.delete_ms = detail::median3(pt.delete_samples);
    res.points.push_back(std::move(pt));
  }
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    if (res.points[i].encrypt_ms > res.points[i - 1].encrypt_ms) res.encrypt_monotone = false;
  }
  return res;
}

/// Rotation-free aggregation vs the rotation-tree baseline over the same
/// data. The baseline runs on packs built without the auxiliary slot so it is
/// not penalized by double counting. Reported as packed (rotation-free) vs
/// singular (baseline) columns; rotation counts come from the op traces.
inline BenchReport run_aggregation_bench(const PackContext& pc, const std::string& dataset,
                                         const std::vector<u64>& values, u64 group_size) {
  const Context& ctx = pc.context();
  if (pc.sk == nullptr) throw ParameterError("aggregation bench requires the secret key");
  BenchReport rep;
  rep.suite = "aggregate";
  rep.dataset = dataset;
  rep.profile = detail::profile_string(ctx);
  rep.tuples = values.size();
  rep.group_size = group_size;

  auto chunks = detail::chunk_by_group(values, group_size);
  rep.ops = chunks.size();

  u64 expected = 0;
  for (const auto& c : chunks) {
    for (u64 v : c) expected = add_mod(expected, v % ctx.plain_modulus(), ctx.plain_modulus());
  }

  // rotation-free: aux-embedded packs, one fold of ciphertext additions
  std::vector<PackedVector> packs;
  for (std::size_t g = 0; g < chunks.size(); ++g) {
    auto vals = chunks[g];
    for (auto& v : vals) v %= ctx.plain_modulus();
    packs.push_back(pack_group(pc, vals, g));
  }
  OpTrace rotfree_trace;
  PackContext traced = pc;
  traced.trace = &rotfree_trace;
  u64 got_rotfree = 0;
  {
    detail::Stopwatch sw;
    Ciphertext agg = global_sum(traced, packs);
    rep.packed_total_ms = sw.ms();
    got_rotfree = extract_sum(ctx, *pc.sk, agg);
  }
  rep.packed_avg_us = rep.ops ? rep.packed_total_ms * 1000.0 / rep.ops : 0;
  rep.rotations_packed = rotfree_trace.rotations;

  // baseline: payload-only packs (no aux slot), log2(n) rotations each
  std::vector<Ciphertext> plain_packs;
  for (const auto& c : chunks) {
    std::vector<u64> vals;
    vals.reserve(c.size());
    for (u64 v : c) vals.push_back(v % ctx.plain_modulus());
    plain_packs.push_back(encrypt(ctx, *pc.pk, encode_slots(ctx, vals), pc.randomness()));
  }
  OpTrace baseline_trace;
  traced.trace = &baseline_trace;
  u64 got_baseline = 0;
  {
    detail::Stopwatch sw;
    Ciphertext folded;
    bool first = true;
    for (const auto& ct : plain_packs) {
      Ciphertext summed = rotate_baseline_sum(traced, ct);
      folded = first ? summed : eval_add(ctx, folded, summed);
      first = false;
    }
    rep.singular_total_ms = sw.ms();
    got_baseline = decrypt(ctx, *pc.sk, folded).slots[0];
  }
  rep.singular_avg_us = rep.ops ? rep.singular_total_ms * 1000.0 / rep.ops : 0;
  rep.rotations_singular = baseline_trace.rotations / std::max<u64>(1, rep.ops);
  rep.speedup = rep.packed_total_ms > 0 ? rep.singular_total_ms / rep.packed_total_ms : 0;
  rep.oracle_ok = (got_rotfree == expected) && (got_baseline == expected);
  return rep;
}

// --- randomized oracle replay -------------------------------------------

struct FuzzResult {
  bool ok = true;
  u64 seed = 0;
  std::size_t ops_executed = 0;
  std::vector<std::string> failing_prefix;  // shortest op log reproducing the divergence
};

/// Replay a random operation sequence on the engine and the oracle, checking
/// slot-for-slot equality (and thereby the sum invariant) after every step.
/// On divergence the op log up to and including the failing step is returned.
inline FuzzResult oracle_fuzz(const PackContext& pc, u64 seed, std::size_t op_count,
                              std::size_t group_count = 3, bool mixed_modes = true) {
  const Context& ctx = pc.context();
  if (pc.sk == nullptr) throw ParameterError("oracle_fuzz requires the secret key");
  FuzzResult res;
  res.seed = seed;
  Rng rng(seed);
  const u64 t = ctx.plain_modulus();
  const std::uint32_t cap = pack_capacity(ctx);

  PlaintextOracle oracle(t, ctx.slot_count());
  std::map<u64, PackedVector> packs;
  std::vector<std::string> log;

  auto check = [&](u64 gid) -> bool {
    return detail::matches_oracle(pc, packs.at(gid), oracle);
  };

  for (u64 g = 0; g < group_count; ++g) {
    std::size_t count = rng.below(cap + 1);
    std::vector<u64> vals(count);
    for (auto& v : vals) v = rng.below(t);
    packs[g] = pack_group(pc, vals, g);
    oracle.pack(g, vals);
    log.push_back("pack g=" + std::to_string(g) + " count=" + std::to_string(count));
    if (!check(g)) {
      res.ok = false;
      res.failing_prefix = log;
      return res;
    }
  }

  for (std::size_t i = 0; i < op_count; ++i) {
    u64 gid = rng.below(group_count);
    PackedVector& pv = packs[gid];
    std::uint32_t len = oracle.length(gid);
    unsigned action = static_cast<unsigned>(rng.below(4));  // 0 insert, 1 append, 2 delete, 3 sum
    std::ostringstream op;
    switch (action) {
      case 0: {
        if (len >= cap) {
          op << "skip-full g=" << gid;
          break;
        }
        std::uint32_t idx = static_cast<std::uint32_t>(rng.below(len + 1));
        u64 v = rng.below(t);
        InsertMode mode =
            (mixed_modes && rng.coin()) ? InsertMode::Encrypted : InsertMode::Plain;
        pv = insert_at(pc, pv, idx, v, mode);
        oracle.insert_at(gid, idx, v);
        op << "insert g=" << gid << " i=" << idx << " v=" << v
           << " mode=" << (mode == InsertMode::Plain ? "plain" : "encrypted");
        break;
      }
      case 1: {
        if (len >= cap) {
          op << "skip-full g=" << gid;
          break;
        }
        u64 v = rng.below(t);
        pv = append(pc, pv, v);
        oracle.append(gid, v);
        op << "append g=" << gid << " v=" << v;
        break;
      }
      case 2: {
        std::uint32_t idx = len == 0 ? 0 : static_cast<std::uint32_t>(rng.below(len));
        u64 v = oracle.delete_at(gid, idx);
        pv = delete_at(pc, pv, idx, v);
        op << "delete g=" << gid << " i=" << idx << " v=" << v << (len == 0 ? " (inert)" : "");
        break;
      }
      case 3: {
        std::vector<PackedVector> all;
        for (auto& [g, p] : packs) all.push_back(p);
        u64 got = extract_sum(ctx, *pc.sk, global_sum(pc, all));
        op << "global_sum got=" << got << " want=" << oracle.total();
        if (got != oracle.total()) {
          log.push_back(op.str());
          res.ok = false;
          res.ops_executed = i + 1;
          res.failing_prefix = log;
          return res;
        }
        break;
      }
    }
    log.push_back(op.str());
    if (action <= 2 && !check(gid)) {
      res.ok = false;
      res.ops_executed = i + 1;
      res.failing_prefix = log;
      return res;
    }
    res.ops_executed = i + 1;
  }
  return res;
}

}  // namespace hermes
