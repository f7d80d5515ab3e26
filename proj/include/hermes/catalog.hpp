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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hermes/pack.hpp"
#include "hermes/serial.hpp"

// Encrypted table persistence: one blob file per table plus a human-readable
// manifest. The blob is the source of truth; it is replaced via write-temp
// then rename, so a reader always sees either the previous or the new table
// version, never a torn one. The manifest (names, params hash, group size,
// per-group L and offsets) is regenerated after each commit and healed from
// the blob if a crash left it stale.
//
// Blob layout ("HTB1"):
//   magic[4] | version u16 | params_id[32] | group_size u64 | group_count u64 |
//   records, each: gid u64 | length u64 | noise_w f64 | blob_len u64 | bytes

namespace hermes {

struct GroupRecord {
  u64 group_id = 0;
  std::uint32_t length = 0;
  double noise_w = 0.0;
  std::vector<std::uint8_t> container;  // serialized ciphertext
};

struct TableCatalog {
  std::string name;
  ParamsId params_id{};
  u64 group_size = 0;
  std::map<u64, GroupRecord> groups;  // ordered by group id
};

/// Deterministic, index-driven partition: tuple k belongs to group k / size.
inline u64 group_of_tuple(u64 tuple_index, u64 group_size) {
  if (group_size == 0) throw ParameterError("group size must be positive");
  return tuple_index / group_size;
}

/// Number of groups an ingest of `tuple_count` tuples produces.
inline u64 group_count_for(u64 tuple_count, u64 group_size) {
  if (group_size == 0) throw ParameterError("group size must be positive");
  return (tuple_count + group_size - 1) / group_size;
}

namespace detail {

inline std::vector<std::uint8_t> encode_table_blob(const TableCatalog& cat) {
  ByteWriter w;
  w.tag("HTB1");
  w.u16(kContainerVersion);
  w.bytes(cat.params_id.data(), cat.params_id.size());
  w.u64(cat.group_size);
  w.u64(cat.groups.size());
  for (const auto& [gid, rec] : cat.groups) {
    w.u64(gid);
    w.u64(rec.length);
    w.f64(rec.noise_w);
    w.u64(rec.container.size());
    w.bytes(rec.container.data(), rec.container.size());
  }
  return w.take();
}

inline TableCatalog decode_table_blob(const std::string& name,
                                      const std::vector<std::uint8_t>& data) {
  ByteReader r(data);
  if (!r.tag_matches("HTB1")) throw BadMagicError("not a table blob");
  if (r.u16() != kContainerVersion) throw BadVersionError("unsupported table blob version");
  TableCatalog cat;
  cat.name = name;
  r.bytes(cat.params_id.data(), cat.params_id.size());
  cat.group_size = r.u64();
  u64 count = r.u64();
  for (u64 i = 0; i < count; ++i) {
    GroupRecord rec;
    rec.group_id = r.u64();
    rec.length = static_cast<std::uint32_t>(r.u64());
    rec.noise_w = r.f64();
    u64 len = r.u64();
    rec.container.resize(len);
    r.bytes(rec.container.data(), len);
    cat.groups.emplace(rec.group_id, std::move(rec));
  }
  r.expect_end();
  return cat;
}

inline std::string render_manifest(const TableCatalog& cat) {
  std::ostringstream os;
  os << "hermes-table-manifest-v1\n";
  os << "table=" << cat.name << "\n";
  os << "params_id=" << params_id_hex(cat.params_id) << "\n";
  os << "group_size=" << cat.group_size << "\n";
  os << "groups=" << cat.groups.size() << "\n";
  // offsets into the blob: fixed header, then variable-length records
  std::size_t offset = 4 + 2 + 32 + 8 + 8;
  for (const auto& [gid, rec] : cat.groups) {
    std::size_t payload_offset = offset + 8 + 8 + 8 + 8;
    os << "group id=" << gid << " length=" << rec.length << " offset=" << payload_offset
       << " size=" << rec.container.size() << "\n";
    offset = payload_offset + rec.container.size();
  }
  return os.str();
}

}  // namespace detail

/// Catalog rooted at a data directory. Single writer per table; readers see
/// complete table versions only.
class TableStore {
 public:
  explicit TableStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(tables_dir());
  }

  const std::filesystem::path& root() const { return dir_; }
  std::filesystem::path tables_dir() const { return dir_ / "tables"; }
  std::filesystem::path blob_path(const std::string& name) const {
    return tables_dir() / (name + ".blob");
  }
  std::filesystem::path manifest_path(const std::string& name) const {
    return tables_dir() / (name + ".manifest");
  }

  bool has_table(const std::string& name) const {
    return std::filesystem::exists(blob_path(name));
  }

  void create_table(const Context& ctx, const std::string& name, u64 group_size,
                    bool replace = false) {
    if (group_size == 0 || group_size > pack_capacity(ctx)) {
      throw ParameterError("group size must be in [1, n-1]");
    }
    if (has_table(name) && !replace) throw IoError("table already exists: " + name);
    TableCatalog cat;
    cat.name = name;
    cat.params_id = ctx.params_id();
    cat.group_size = group_size;
    commit(cat);
  }

  void drop_table(const std::string& name) {
    if (!has_table(name)) throw NotFoundError("unknown table: " + name);
    std::filesystem::remove(blob_path(name));
    std::filesystem::remove(manifest_path(name));
  }

  std::vector<std::string> list_tables() const {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(tables_dir())) {
      if (e.path().extension() == ".blob") names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
  }

  TableCatalog load_catalog(const std::string& name) const {
    if (!has_table(name)) throw NotFoundError("unknown table: " + name);
    auto cat = detail::decode_table_blob(name, detail::read_file(blob_path(name)));
    heal_manifest(cat);
    return cat;
  }

  void put_group(const Context& ctx, const std::string& name, const PackedVector& pv) {
    TableCatalog cat = load_catalog(name);
    if (cat.params_id != ctx.params_id()) {
      throw ParamsMismatchError("table was created under different parameters");
    }
    GroupRecord rec;
    rec.group_id = pv.group_id;
    rec.length = pv.length;
    rec.noise_w = pv.ct.noise_w;
    rec.container = serialize_ciphertext(ctx, pv.ct);
    cat.groups[rec.group_id] = std::move(rec);
    commit(cat);
  }

  PackedVector get_group(const Context& ctx, const std::string& name, u64 group_id) const {
    TableCatalog cat = load_catalog(name);
    if (cat.params_id != ctx.params_id()) {
      throw ParamsMismatchError("table was created under different parameters");
    }
    auto it = cat.groups.find(group_id);
    if (it == cat.groups.end()) {
      throw NotFoundError("unknown group " + std::to_string(group_id) + " in table " + name);
    }
    PackedVector pv;
    pv.ct = deserialize_ciphertext(ctx, it->second.container, it->second.noise_w);
    pv.group_id = group_id;
    pv.length = it->second.length;
    return pv;
  }

  std::vector<std::pair<u64, std::uint32_t>> list_groups(const std::string& name) const {
    TableCatalog cat = load_catalog(name);
    std::vector<std::pair<u64, std::uint32_t>> out;
    out.reserve(cat.groups.size());
    for (const auto& [gid, rec] : cat.groups) out.emplace_back(gid, rec.length);
    return out;
  }

  /// Full commit: stage the new blob, atomically swap it in, then refresh the
  /// manifest. Exposed stages keep the crash window testable.
  void commit(const TableCatalog& cat) {
    stage_blob(cat);
    commit_blob(cat.name);
    write_manifest(cat);
  }

  void stage_blob(const TableCatalog& cat) const {
    auto tmp = blob_path(cat.name);
    tmp += ".tmp";
    auto data = detail::encode_table_blob(cat);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }

  void commit_blob(const std::string& name) const {
    auto tmp = blob_path(name);
    tmp += ".tmp";
    std::filesystem::rename(tmp, blob_path(name));
  }

  void write_manifest(const TableCatalog& cat) const {
    auto tmp = manifest_path(cat.name);
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      out << detail::render_manifest(cat);
    }
    std::filesystem::rename(tmp, manifest_path(cat.name));
  }

  /// Build an in-memory catalog from already-range-checked values, one
  /// encryption per group, then commit it in one shot.
  TableCatalog build_catalog(const PackContext& pc, const std::string& name,
                             const std::vector<u64>& values, u64 group_size) const {
    const Context& ctx = pc.context();
    if (group_size == 0 || group_size > pack_capacity(ctx)) {
      throw ParameterError("group size must be in [1, n-1]");
    }
    TableCatalog cat;
    cat.name = name;
    cat.params_id = ctx.params_id();
    cat.group_size = group_size;
    for (std::size_t start = 0, gid = 0; start < values.size(); start += group_size, ++gid) {
      std::span<const u64> chunk(values.data() + start,
                                 std::min<std::size_t>(group_size, values.size() - start));
      PackedVector pv = pack_group(pc, chunk, gid);
      GroupRecord rec;
      rec.group_id = gid;
      rec.length = pv.length;
      rec.noise_w = pv.ct.noise_w;
      rec.container = serialize_ciphertext(ctx, pv.ct);
      cat.groups.emplace(gid, std::move(rec));
    }
    return cat;
  }

 public:
  struct IngestStats {
    u64 tuples = 0;
    u64 groups = 0;
  };

  /// Pack a value column group by group and persist it as `name`,
  /// replacing any previous table of that name.
  IngestStats ingest_values(const PackContext& pc, const std::string& name,
                            const std::vector<u64>& values, u64 group_size) {
    TableCatalog cat = build_catalog(pc, name, values, group_size);
    commit(cat);
    return IngestStats{values.size(), cat.groups.size()};
  }

 private:
  void heal_manifest(const TableCatalog& cat) const {
    std::string want = detail::render_manifest(cat);
    std::ifstream in(manifest_path(cat.name));
    if (in) {
      std::stringstream have;
      have << in.rdbuf();
      if (have.str() == want) return;
    }
    write_manifest(cat);  // stale or missing after a crash window
  }

  std::filesystem::path dir_;
};

}  // namespace hermes
