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

// hermes: embedded encrypted-table engine.
//
// Subcommands: keygen, ingest, insert, delete, sum, get, tables, bench.
// All sums are defined modulo the plaintext modulus t. Ingestion refuses
// values >= t unless --reduce-mod-t is passed explicitly.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hermes/hermes.hpp"

namespace fs = std::filesystem;
using namespace hermes;

namespace {

// Exit codes, also documented in the README.
enum ExitCode : int {
  kOk = 0,
  kGeneric = 1,
  kUsage = 2,
  kRange = 3,
  kCapacity = 4,
  kParamsMismatch = 5,
  kMissingKey = 6,
  kIndex = 7,
  kRefreshRequired = 8,
  kIo = 9,
  kNotFound = 10,
};

struct GlobalOpts {
  fs::path data_dir;
  bool machine = false;
  std::optional<u64> seed;
};

Rng make_rng(const GlobalOpts& g) { return g.seed ? Rng(*g.seed) : Rng::from_entropy(); }

fs::path keys_dir(const GlobalOpts& g) { return g.data_dir / "keys"; }

SchemeParams profile_params(const std::string& profile, u64 t) {
  if (profile == "paper") return SchemeParams::desk(1u << 14, t);
  if (profile.rfind("desk", 0) == 0) {
    std::uint32_t degree = 16;
    if (profile.size() > 4) degree = static_cast<std::uint32_t>(std::stoul(profile.substr(4)));
    if (degree < 16 || degree > 1024 || !is_power_of_two(degree)) {
      throw ParameterError("desk profiles cover N = 16..1024 (powers of two)");
    }
    return SchemeParams::desk(degree, t);
  }
  throw ParameterError("unknown profile: " + profile);
}

/// Loaded engine state shared by the table commands.
struct Engine {
  std::unique_ptr<Context> ctx;
  KeyBundle keys;
  std::unique_ptr<TableStore> store;
  Rng rng;
  PackContext pc;

  explicit Engine(const GlobalOpts& g, bool need_galois) : rng(make_rng(g)) {
    fs::path kd = keys_dir(g);
    if (!fs::exists(kd / kPublicKeyFile)) {
      throw IoError("no keys under " + kd.string() + " (run `hermes keygen` first)");
    }
    SchemeParams params = read_key_params(kd / kPublicKeyFile);
    ctx = std::make_unique<Context>(params);
    keys.sk = deserialize_secret_key(*ctx, detail::read_file(kd / kSecretKeyFile));
    keys.pk = deserialize_public_key(*ctx, detail::read_file(kd / kPublicKeyFile));
    if (need_galois) {
      keys.galois = deserialize_galois_keys(*ctx, detail::read_file(kd / kGaloisKeyFile));
    }
    store = std::make_unique<TableStore>(g.data_dir);
    pc.ctx = ctx.get();
    pc.pk = &keys.pk;
    pc.sk = &keys.sk;
    pc.galois = need_galois ? &keys.galois : nullptr;
    pc.rng = &rng;
  }
};

std::vector<PackedVector> load_all_groups(Engine& eng, const std::string& table) {
  std::vector<PackedVector> packs;
  for (auto [gid, len] : eng.store->list_groups(table)) {
    packs.push_back(eng.store->get_group(*eng.ctx, table, gid));
  }
  return packs;
}

// --- subcommands ---------------------------------------------------------

int cmd_keygen(const GlobalOpts& g, const std::string& profile, u64 t, bool force) {
  fs::path kd = keys_dir(g);
  if (fs::exists(kd / kSecretKeyFile) && !force) {
    throw IoError("keys already exist under " + kd.string() + " (pass --force to overwrite)");
  }
  SchemeParams params = profile_params(profile, t);
  Context ctx(params);
  Rng rng = make_rng(g);
  auto [sk, pk] = keygen(ctx, rng);
  auto steps = default_rotation_steps(ctx);
  auto galois = gen_rotation_keys(ctx, sk, steps, rng);
  save_keys(ctx, sk, pk, galois, kd);
  if (g.machine) {
    std::cout << "record=keygen profile=" << profile << " N=" << ctx.degree()
              << " n=" << ctx.slot_count() << " capacity=" << pack_capacity(ctx) << " t=" << t
              << " log2_q=" << ctx.log2_q() << " rotation_steps=" << steps.size()
              << " params_id=" << params_id_hex(ctx.params_id()) << "\n";
  } else {
    std::cout << "generated keys under " << kd.string() << "\n"
              << "  profile:  " << profile << " (N=" << ctx.degree() << ")\n"
              << "  slots:    n=" << ctx.slot_count() << " (payload capacity " << pack_capacity(ctx)
              << " + 1 sum slot)\n"
              << "  t:        " << t << " (all sums are mod t)\n"
              << "  log2(q):  " << ctx.log2_q() << "\n"
              << "  rotation steps: " << steps.size() << "\n"
              << "  params id: " << params_id_hex(ctx.params_id()) << "\n"
              << "note: " << kSecretKeyFile << " grants full decryption; guard it.\n";
  }
  return kOk;
}

int cmd_ingest(const GlobalOpts& g, const std::string& table, const fs::path& csv, u64 group_size,
               const std::string& scale_str, bool reduce_mod_t) {
  Engine eng(g, /*need_galois=*/false);
  auto column = read_csv_column(csv);
  Scale scale = scale_str.empty() ? Scale{} : Scale::parse(scale_str);
  auto values = prepare_for_ingest(column.values, scale, eng.ctx->plain_modulus(), reduce_mod_t);
  if (group_size == 0) group_size = std::min<u64>(4096, pack_capacity(*eng.ctx));

  auto start = std::chrono::steady_clock::now();
  auto stats = eng.store->ingest_values(eng.pc, table, values, group_size);
  double total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  double per_tuple_us = stats.tuples ? total_ms * 1000.0 / stats.tuples : 0.0;

  if (g.machine) {
    std::cout << "record=ingest table=" << table << " tuples=" << stats.tuples
              << " groups=" << stats.groups << " group_size=" << group_size
              << " packed_total_ms=" << total_ms << " packed_avg_us=" << per_tuple_us << "\n";
  } else {
    std::cout << "ingested " << stats.tuples << " tuples into '" << table << "' as "
              << stats.groups << " group(s) of size " << group_size << "\n"
              << "  encryption total: " << total_ms << " ms (" << per_tuple_us
              << " us/tuple)\n";
  }
  return kOk;
}

int cmd_insert(const GlobalOpts& g, const std::string& table, u64 group,
               std::optional<u64> index, bool do_append, u64 value, const std::string& mode_str,
               bool verbose) {
  Engine eng(g, /*need_galois=*/true);
  OpTrace trace;
  eng.pc.trace = &trace;
  auto pv = eng.store->get_group(*eng.ctx, table, group);
  InsertMode mode = mode_str == "encrypted" ? InsertMode::Encrypted : InsertMode::Plain;
  PackedVector out;
  u64 at = do_append ? pv.length : index.value();
  if (do_append) {
    out = append(eng.pc, pv, value);
  } else {
    out = insert_at(eng.pc, pv, static_cast<std::uint32_t>(at), value, mode);
  }
  eng.store->put_group(*eng.ctx, table, out);
  if (g.machine) {
    std::cout << "record=insert table=" << table << " group=" << group << " index=" << at
              << " value=" << value << " length=" << out.length
              << " rotations=" << trace.rotations << " mask_mults=" << trace.plain_mults
              << " refreshes=" << trace.refreshes << "\n";
  } else {
    std::cout << "inserted " << value << " into '" << table << "' group " << group
              << " at slot " << at << "; new length L=" << out.length << "\n";
    if (verbose) {
      std::cout << "  ops: rotations=" << trace.rotations << " mask_mults=" << trace.plain_mults
                << " refreshes=" << trace.refreshes << " [" << trace.sequence_string() << "]\n";
    }
  }
  return kOk;
}

int cmd_delete(const GlobalOpts& g, const std::string& table, u64 group, u64 index,
               bool verbose) {
  Engine eng(g, /*need_galois=*/true);
  OpTrace trace;
  eng.pc.trace = &trace;
  auto pv = eng.store->get_group(*eng.ctx, table, group);
  // the engine needs the deleted value in cleartext; resolve it locally
  auto v = decrypt_slot(*eng.ctx, eng.keys.sk, pv, static_cast<std::uint32_t>(index));
  if (!v) throw IndexError("slot index out of range");
  auto out = delete_at(eng.pc, pv, static_cast<std::uint32_t>(index), *v);
  eng.store->put_group(*eng.ctx, table, out);
  if (g.machine) {
    std::cout << "record=delete table=" << table << " group=" << group << " index=" << index
              << " value=" << *v << " length=" << out.length << " rotations=" << trace.rotations
              << " mask_mults=" << trace.plain_mults << " refreshes=" << trace.refreshes << "\n";
  } else {
    std::cout << "deleted slot " << index << " (value " << *v << ") from '" << table
              << "' group " << group << "; new length L=" << out.length << "\n";
    if (verbose) {
      std::cout << "  ops: rotations=" << trace.rotations << " mask_mults=" << trace.plain_mults
                << " refreshes=" << trace.refreshes << " [" << trace.sequence_string() << "]\n";
    }
  }
  return kOk;
}

int cmd_sum(const GlobalOpts& g, const std::string& table, std::optional<u64> group,
            const std::string& baseline) {
  bool use_baseline = baseline == "rotate";
  Engine eng(g, /*need_galois=*/use_baseline);
  OpTrace trace;
  eng.pc.trace = &trace;

  std::vector<PackedVector> packs;
  if (group) {
    packs.push_back(eng.store->get_group(*eng.ctx, table, *group));
  } else {
    packs = load_all_groups(eng, table);
    if (packs.empty()) {
      if (g.machine) {
        std::cout << "record=sum table=" << table << " scope=table total=0 groups=0 rotations=0"
                  << " rotations_per_ct=0 mode=rotation_free\n";
      } else {
        std::cout << "sum(" << table << ") = 0 (empty table, mod t=" << eng.ctx->plain_modulus()
                  << ")\n";
      }
      return kOk;
    }
  }

  u64 total = 0;
  u64 rotations_per_ct = 0;
  if (!use_baseline) {
    Ciphertext agg = global_sum(eng.pc, packs);
    total = extract_sum(*eng.ctx, eng.keys.sk, agg);
  } else {
    // mask out the sum slot first so the tree does not double count it, then
    // fold every payload slot with the rotation tree
    const std::uint32_t n = eng.ctx->slot_count();
    std::vector<u64> payload_mask(n, 1);
    payload_mask[n - 1] = 0;
    PlaintextVec mask = encode_slots(*eng.ctx, payload_mask);
    Ciphertext folded;
    bool first = true;
    for (const auto& pv : packs) {
      Ciphertext masked = eval_mult_plain(*eng.ctx, pv.ct, mask);
      Ciphertext treed = rotate_baseline_sum(eng.pc, masked);
      folded = first ? treed : eval_add(*eng.ctx, folded, treed);
      first = false;
    }
    total = decrypt(*eng.ctx, eng.keys.sk, folded).slots[0];
    rotations_per_ct = log2_exact(eng.ctx->slot_count());
  }

  std::string scope = group ? "group" : "table";
  if (g.machine) {
    std::cout << "record=sum table=" << table << " scope=" << scope;
    if (group) std::cout << " group=" << *group;
    std::cout << " total=" << total << " groups=" << packs.size()
              << " rotations=" << trace.rotations << " rotations_per_ct=" << rotations_per_ct
              << " mode=" << (use_baseline ? "rotation_baseline" : "rotation_free") << "\n";
  } else {
    std::cout << "sum(" << table;
    if (group) std::cout << ", group " << *group;
    std::cout << ") = " << total << "  (mod t=" << eng.ctx->plain_modulus() << ")\n"
              << "  path: " << (use_baseline ? "rotation baseline" : "rotation-free")
              << ", rotations=" << trace.rotations;
    if (use_baseline) std::cout << " (" << rotations_per_ct << " per ciphertext)";
    std::cout << "\n";
  }
  return kOk;
}

int cmd_get(const GlobalOpts& g, const std::string& table, u64 group, u64 slot) {
  Engine eng(g, /*need_galois=*/false);
  auto pv = eng.store->get_group(*eng.ctx, table, group);
  auto v = decrypt_slot(*eng.ctx, eng.keys.sk, pv, static_cast<std::uint32_t>(slot));
  if (!v) {
    // absent value: warn, print the NULL marker, and still exit cleanly
    std::cerr << "warning: slot " << slot << " is outside [0, " << eng.ctx->slot_count() - 1
              << "]\n";
    if (g.machine) {
      std::cout << "record=get table=" << table << " group=" << group << " slot=" << slot
                << " value=NULL\n";
    } else {
      std::cout << "NULL\n";
    }
    return kOk;
  }
  if (g.machine) {
    std::cout << "record=get table=" << table << " group=" << group << " slot=" << slot
              << " value=" << *v << "\n";
  } else {
    std::cout << *v << "\n";
  }
  return kOk;
}

int cmd_tables(const GlobalOpts& g) {
  TableStore store(g.data_dir);
  for (const auto& name : store.list_tables()) {
    auto groups = store.list_groups(name);
    u64 tuples = 0;
    for (auto [gid, len] : groups) tuples += len;
    if (g.machine) {
      std::cout << "record=table name=" << name << " groups=" << groups.size()
                << " tuples=" << tuples << "\n";
    } else {
      std::cout << name << ": " << groups.size() << " group(s), " << tuples << " tuple(s)\n";
    }
  }
  return kOk;
}

std::vector<u64> resolve_dataset(const std::string& name, const fs::path& dataset_dir, u64 t) {
  std::vector<u64> raw;
  if (name == "hg38") {
    raw = synth_hg38();
  } else {
    fs::path path = name;
    if (!fs::exists(path)) path = dataset_dir / (name + ".csv");
    if (!fs::exists(path)) throw IoError("dataset not found: " + name);
    raw = read_csv_column(path).values;
  }
  // benches measure cryptographic cost; fold values into Z_t up front
  return prepare_for_ingest(raw, Scale{}, t, /*reduce_mod_t=*/true);
}

int cmd_bench(const GlobalOpts& g, const std::string& suite, const std::string& dataset,
              const fs::path& dataset_dir, u64 group_size, std::vector<u64> group_sizes, u64 ops,
              const std::string& csv_out, bool parallel) {
  Engine eng(g, /*need_galois=*/true);
  const Context& ctx = *eng.ctx;
  auto values = resolve_dataset(dataset, dataset_dir, ctx.plain_modulus());
  if (group_size == 0) group_size = std::min<u64>(4096, pack_capacity(ctx));

  std::vector<std::string> lines;
  auto emit = [&](const std::string& line) {
    lines.push_back(line);
    std::cout << line << "\n";
  };

  if (suite == "encrypt") {
    auto rep = run_encrypt_bench(eng.pc, dataset, values, group_size, parallel);
    emit(rep.machine_line());
    if (!g.machine) {
      std::cout << "packed " << rep.packed_total_ms << " ms vs singular " << rep.singular_total_ms
                << " ms (est. from " << rep.singular_sample << " samples) -> speedup "
                << rep.speedup << "x\n";
    }
  } else if (suite == "insert") {
    auto rep = run_insert_bench(eng.pc, dataset, values, group_size, ops, g.seed.value_or(1));
    emit(rep.machine_line());
    if (!rep.oracle_ok) throw Error("insert bench diverged from the plaintext oracle");
  } else if (suite == "delete") {
    auto rep = run_delete_bench(eng.pc, dataset, values, group_size, ops, g.seed.value_or(2));
    emit(rep.machine_line());
    if (!rep.oracle_ok) throw Error("delete bench diverged from the plaintext oracle");
  } else if (suite == "aggregate") {
    auto rep = run_aggregation_bench(eng.pc, dataset, values, group_size);
    emit(rep.machine_line());
    if (!g.machine) {
      std::cout << "rotation-free " << rep.packed_total_ms << " ms vs baseline "
                << rep.singular_total_ms << " ms -> ratio " << rep.speedup << "x; rotations "
                << rep.rotations_packed << " vs " << rep.rotations_singular
                << " per ciphertext\n";
    }
    if (!rep.oracle_ok) throw Error("aggregation totals disagree with the plaintext oracle");
  } else if (suite == "sweep") {
    if (group_sizes.empty()) group_sizes = {128, 256, 512, 1024, 2048, 4096};
    for (u64 s : group_sizes) {
      if (s > pack_capacity(ctx)) throw ParameterError("sweep size exceeds pack capacity");
    }
    auto res = run_group_size_sweep(eng.pc, dataset, values, group_sizes, ops);
    for (const auto& pt : res.points) emit(pt.machine_line(res.dataset, res.profile));
    emit(std::string("record=sweep_summary dataset=") + res.dataset +
         " encrypt_monotone=" + (res.encrypt_monotone ? "1" : "0"));
  } else {
    throw ParameterError("unknown bench suite: " + suite);
  }

  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    if (!out) throw IoError("cannot write " + csv_out);
    out << "# one key=value record per line\n";
    for (const auto& l : lines) out << l << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  const char* env_dir = std::getenv("HERMES_DATA_DIR");
  g.data_dir = env_dir != nullptr ? fs::path(env_dir) : fs::path("hermes-data");

  CLI::App app{"hermes: embedded encrypted-table engine (BFV packed vectors)"};
  app.require_subcommand(1);
  std::string data_dir_flag;
  app.add_option("--data-dir", data_dir_flag, "data directory (overrides HERMES_DATA_DIR)");
  app.add_flag("--machine", g.machine, "machine-readable key=value output");
  u64 seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "deterministic randomness (test mode)");

  // keygen
  auto* kg = app.add_subcommand("keygen", "generate secret/public/rotation keys");
  std::string profile = "paper";
  u64 t_choice = 65537;
  bool force = false;
  kg->add_option("--profile", profile, "desk, desk32..desk1024, or paper (default)");
  kg->add_option("--t", t_choice, "plaintext modulus")
      ->check(CLI::IsMember({65537, 786433, 5767169}));
  kg->add_flag("--force", force, "overwrite existing keys");

  // ingest
  auto* ig = app.add_subcommand("ingest", "pack a CSV column into an encrypted table");
  std::string table, scale_str;
  std::string csv_path;
  u64 group_size = 0;
  bool reduce_mod_t = false;
  ig->add_option("--table", table)->required();
  ig->add_option("--csv", csv_path)->required();
  ig->add_option("--group-size", group_size, "tuples per ciphertext (default min(4096, n-1))");
  ig->add_option("--scale", scale_str, "rational rescale k/d applied before range checks");
  ig->add_flag("--reduce-mod-t", reduce_mod_t, "explicitly fold out-of-range values into Z_t");

  // insert
  auto* ins = app.add_subcommand("insert", "homomorphic slot insertion");
  std::string ins_table, ins_mode = "plain";
  u64 ins_group = 0, ins_value = 0, ins_index = 0;
  bool ins_append = false, verbose = false;
  ins->add_option("--table", ins_table)->required();
  ins->add_option("--group", ins_group)->required();
  auto* idx_opt = ins->add_option("--index", ins_index, "slot index (0..L)");
  ins->add_flag("--append", ins_append, "append at slot L (fast path)");
  ins->add_option("--value", ins_value)->required();
  ins->add_option("--mode", ins_mode)->check(CLI::IsMember({"plain", "encrypted"}));
  ins->add_flag("--verbose", verbose, "print the homomorphic op trace");

  // delete
  auto* del = app.add_subcommand("delete", "homomorphic slot deletion");
  std::string del_table;
  u64 del_group = 0, del_index = 0;
  del->add_option("--table", del_table)->required();
  del->add_option("--group", del_group)->required();
  del->add_option("--index", del_index)->required();
  del->add_flag("--verbose", verbose);

  // sum
  auto* sum = app.add_subcommand("sum", "encrypted aggregation (rotation-free by default)");
  std::string sum_table, baseline;
  u64 sum_group = 0;
  sum->add_option("--table", sum_table)->required();
  auto* sum_group_opt = sum->add_option("--group", sum_group, "restrict to one group");
  sum->add_option("--baseline", baseline, "'rotate' runs the rotation-tree baseline")
      ->check(CLI::IsMember({"rotate"}));

  // get
  auto* get = app.add_subcommand("get", "decrypt a single slot");
  std::string get_table;
  u64 get_group = 0, get_slot = 0;
  get->add_option("--table", get_table)->required();
  get->add_option("--group", get_group)->required();
  get->add_option("--slot", get_slot)->required();

  // tables
  auto* tbl = app.add_subcommand("tables", "list tables");

  // bench
  auto* bench = app.add_subcommand("bench", "measurement suites");
  std::string suite, dataset = "covid19", csv_out;
  std::string dataset_dir_flag;
  std::vector<u64> sweep_sizes;
  u64 bench_group_size = 0, bench_ops = 100;
  bool parallel = false;
  bench->add_option("--suite", suite, "encrypt|insert|delete|aggregate|sweep")->required();
  bench->add_option("--dataset", dataset, "covid19|bitcoin|hg38 or a CSV path");
  bench->add_option("--dataset-dir", dataset_dir_flag, "directory holding named datasets");
  bench->add_option("--group-size", bench_group_size);
  bench->add_option("--group-sizes", sweep_sizes, "ascending sizes for the sweep suite");
  bench->add_option("--ops", bench_ops, "update count per run (default 100)");
  bench->add_option("--csv-out", csv_out, "also write report lines to this file");
  bench->add_flag("--parallel", parallel,
                  "parallel group encryption (marked in the report, excluded from comparisons)");

  // global flags (--data-dir, --machine, --seed) may follow the subcommand
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (!data_dir_flag.empty()) g.data_dir = data_dir_flag;
  if (seed_opt->count() > 0) g.seed = seed_flag;

  try {
    if (kg->parsed()) return cmd_keygen(g, profile, t_choice, force);
    if (ig->parsed()) return cmd_ingest(g, table, csv_path, group_size, scale_str, reduce_mod_t);
    if (ins->parsed()) {
      std::optional<u64> idx;
      if (idx_opt->count() > 0) idx = ins_index;
      if (!idx && !ins_append) throw ParameterError("pass --index or --append");
      return cmd_insert(g, ins_table, ins_group, idx, ins_append, ins_value, ins_mode, verbose);
    }
    if (del->parsed()) return cmd_delete(g, del_table, del_group, del_index, verbose);
    if (sum->parsed()) {
      std::optional<u64> grp;
      if (sum_group_opt->count() > 0) grp = sum_group;
      return cmd_sum(g, sum_table, grp, baseline);
    }
    if (get->parsed()) return cmd_get(g, get_table, get_group, get_slot);
    if (tbl->parsed()) return cmd_tables(g);
    if (bench->parsed()) {
      fs::path ds_dir = dataset_dir_flag.empty() ? fs::path("data") : fs::path(dataset_dir_flag);
      return cmd_bench(g, suite, dataset, ds_dir, bench_group_size, sweep_sizes, bench_ops,
                       csv_out, parallel);
    }
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRange;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const ParamsMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamsMismatch;
  } catch (const MissingKeyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingKey;
  } catch (const IndexError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIndex;
  } catch (const RefreshRequiredError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRefreshRequired;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotFound;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeneric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeneric;
  }
  return kUsage;
}
