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

// Integration tests driving the built `hermes` binary end to end at the desk
// profile. Machine-readable output lines are pinned here as golden schemas.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "hermes/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(HERMES_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (fgets(buf, sizeof buf, pipe) != nullptr) res.out += buf;
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

/// Parse one `key=value ...` record line into a map.
std::map<std::string, std::string> parse_record(const std::string& out, const std::string& type) {
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("record=" + type, 0) != 0) continue;
    std::map<std::string, std::string> kv;
    std::istringstream fields(line);
    std::string field;
    while (fields >> field) {
      auto eq = field.find('=');
      if (eq != std::string::npos) kv[field.substr(0, eq)] = field.substr(eq + 1);
    }
    return kv;
  }
  FAIL("no record=" + type + " line in output:\n" + out);
  return {};
}

struct CliFixture {
  fs::path dir;
  std::string dd;  // --data-dir argument

  CliFixture() {
    dir = fs::temp_directory_path() /
          ("hermes-cli-" + std::to_string(hermes::Rng::from_entropy().next_u64()));
    fs::create_directories(dir);
    dd = " --data-dir " + (dir / "d").string();
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string repo_csv(const std::string& name) const {
    return std::string(HERMES_REPO_DATA_DIR) + "/" + name;
  }
};

}  // namespace

TEST_CASE("keygen: reporting, refusal without --force, desk profile slot counts") {
  CliFixture fx;
  auto kg = run("--machine keygen --profile desk --seed 1" + fx.dd);
  REQUIRE(kg.exit_code == 0);
  auto rec = parse_record(kg.out, "keygen");
  REQUIRE(rec.at("N") == "16");
  REQUIRE(rec.at("n") == "8");
  REQUIRE(rec.at("capacity") == "7");
  REQUIRE(rec.at("t") == "65537");

  auto again = run("keygen --profile desk" + fx.dd);
  REQUIRE(again.exit_code == 9);
  REQUIRE(again.out.find("--force") != std::string::npos);
  auto forced = run("keygen --profile desk --force --seed 2" + fx.dd);
  REQUIRE(forced.exit_code == 0);
}

TEST_CASE("end-to-end: ingest, sum, get, insert, delete at desk scale") {
  CliFixture fx;
  REQUIRE(run("keygen --profile desk64 --seed 3" + fx.dd).exit_code == 0);  // n = 32

  // 9 tuples, groups of 4 -> 3 groups
  auto csv = fx.dir / "v.csv";
  {
    std::ofstream out(csv);
    out << "v\n10\n20\n30\n40\n50\n60\n70\n80\n90\n";
  }
  auto ig = run("--machine ingest --table demo --csv " + csv.string() + " --group-size 4" + fx.dd);
  REQUIRE(ig.exit_code == 0);
  auto igrec = parse_record(ig.out, "ingest");
  REQUIRE(igrec.at("tuples") == "9");
  REQUIRE(igrec.at("groups") == "3");

  auto sum = run("--machine sum --table demo" + fx.dd);
  REQUIRE(sum.exit_code == 0);
  auto sumrec = parse_record(sum.out, "sum");
  REQUIRE(sumrec.at("total") == "450");
  REQUIRE(sumrec.at("rotations") == "0");
  REQUIRE(sumrec.at("mode") == "rotation_free");

  // group-scoped sum and the slot view agree
  auto gsum = run("--machine sum --table demo --group 1" + fx.dd);
  REQUIRE(parse_record(gsum.out, "sum").at("total") == "260");
  auto top = run("--machine get --table demo --group 1 --slot 31" + fx.dd);
  REQUIRE(parse_record(top.out, "get").at("value") == "260");

  // the baseline path reports log2(n) rotations per ciphertext, same total
  auto base = run("--machine sum --table demo --baseline rotate" + fx.dd);
  auto baserec = parse_record(base.out, "sum");
  REQUIRE(baserec.at("total") == "450");
  REQUIRE(baserec.at("rotations_per_ct") == "5");  // log2(32)
  REQUIRE(baserec.at("mode") == "rotation_baseline");

  // append then sum reflects +v
  auto app = run("--machine insert --table demo --group 2 --append --value 5" + fx.dd);
  REQUIRE(app.exit_code == 0);
  auto apprec = parse_record(app.out, "insert");
  REQUIRE(apprec.at("length") == "2");
  REQUIRE(apprec.at("rotations") == "0");  // append fast path
  REQUIRE(parse_record(run("--machine sum --table demo" + fx.dd).out, "sum").at("total") ==
          "455");

  // general insert uses 2 mask multiplies + 1 rotation
  auto ins = run("--machine insert --table demo --group 0 --index 1 --value 7" + fx.dd);
  REQUIRE(parse_record(ins.out, "insert").at("mask_mults") == "2");
  REQUIRE(parse_record(ins.out, "insert").at("rotations") == "1");

  // delete resolves the deleted value via local slot decryption
  auto del = run("--machine delete --table demo --group 0 --index 0" + fx.dd);
  auto delrec = parse_record(del.out, "delete");
  REQUIRE(delrec.at("value") == "10");
  REQUIRE(delrec.at("length") == "4");
  REQUIRE(parse_record(run("--machine sum --table demo" + fx.dd).out, "sum").at("total") ==
          "452");

  // encrypted insert mode round-trips too
  auto enc = run("--machine insert --table demo --group 0 --index 0 --value 3 --mode encrypted" +
                 fx.dd);
  REQUIRE(enc.exit_code == 0);
  REQUIRE(parse_record(run("--machine sum --table demo" + fx.dd).out, "sum").at("total") ==
          "455");

  auto tables = run("--machine tables" + fx.dd);
  REQUIRE(parse_record(tables.out, "table").at("name") == "demo");
}

TEST_CASE("error paths map to distinct exit codes") {
  CliFixture fx;
  REQUIRE(run("keygen --profile desk --seed 4" + fx.dd).exit_code == 0);  // n=8, capacity 7

  auto csv = fx.dir / "v.csv";
  {
    std::ofstream out(csv);
    out << "1\n2\n3\n";
  }
  REQUIRE(run("ingest --table t --csv " + csv.string() + " --group-size 3" + fx.dd).exit_code ==
          0);

  // usage error: unknown flag
  REQUIRE(run("sum --table t --wat" + fx.dd).exit_code == 2);
  // range error: oversized value
  REQUIRE(run("insert --table t --group 0 --append --value 70000" + fx.dd).exit_code == 3);
  // index error
  REQUIRE(run("insert --table t --group 0 --index 9 --value 1" + fx.dd).exit_code == 7);
  // not-found errors
  REQUIRE(run("sum --table nope" + fx.dd).exit_code == 10);
  REQUIRE(run("get --table t --group 5 --slot 0" + fx.dd).exit_code == 10);
  // capacity error: fill the group, then insert once more
  for (int i = 0; i < 4; ++i) {
    REQUIRE(run("insert --table t --group 0 --append --value 1" + fx.dd).exit_code == 0);
  }
  REQUIRE(run("insert --table t --group 0 --append --value 1" + fx.dd).exit_code == 4);

  // out-of-range slot read warns, prints NULL, exits 0
  auto oob = run("--machine get --table t --group 0 --slot 8" + fx.dd);
  REQUIRE(oob.exit_code == 0);
  REQUIRE(parse_record(oob.out, "get").at("value") == "NULL");
  REQUIRE(oob.out.find("warning") != std::string::npos);
}

TEST_CASE("ingest range policy: bundled bitcoin data needs explicit reduction") {
  CliFixture fx;
  REQUIRE(run("keygen --profile desk --seed 5" + fx.dd).exit_code == 0);

  // scaled by 1/24 the values still exceed t; the error names the row
  auto r = run("ingest --table btc --csv " + fx.repo_csv("bitcoin.csv") + " --scale 1/24" + fx.dd);
  REQUIRE(r.exit_code == 3);
  REQUIRE(r.out.find("row ") != std::string::npos);
  REQUIRE(r.out.find("--reduce-mod-t") != std::string::npos);

  auto ok = run("--machine ingest --table btc --csv " + fx.repo_csv("bitcoin.csv") +
                " --scale 1/24 --reduce-mod-t --group-size 7" + fx.dd);
  REQUIRE(ok.exit_code == 0);
  REQUIRE(parse_record(ok.out, "ingest").at("tuples") == "1086");

  // empty file ingests into a valid, zero-sum table
  auto empty_csv = fx.dir / "empty.csv";
  { std::ofstream out(empty_csv); }
  REQUIRE(run("ingest --table none --csv " + empty_csv.string() + fx.dd).exit_code == 0);
  auto sum = run("--machine sum --table none" + fx.dd);
  REQUIRE(parse_record(sum.out, "sum").at("total") == "0");
}

TEST_CASE("HERMES_DATA_DIR env var selects the data directory") {
  CliFixture fx;
  std::string env = "HERMES_DATA_DIR=" + (fx.dir / "d").string() + " ";
  // run() prefixes work because commands go through the shell
  std::string cli = HERMES_CLI_PATH;
  auto kg = run("keygen --profile desk --seed 11" + fx.dd);
  REQUIRE(kg.exit_code == 0);
  RunResult via_env;
  {
    std::string cmd = env + cli + " --machine tables 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (fgets(buf, sizeof buf, pipe) != nullptr) via_env.out += buf;
    via_env.exit_code = WEXITSTATUS(pclose(pipe));
  }
  REQUIRE(via_env.exit_code == 0);  // found the keys/tables dir via the env var
}

TEST_CASE("sum and get are idempotent read paths") {
  CliFixture fx;
  REQUIRE(run("keygen --profile desk --seed 6" + fx.dd).exit_code == 0);
  auto csv = fx.dir / "v.csv";
  {
    std::ofstream out(csv);
    out << "3\n4\n5\n";
  }
  REQUIRE(run("ingest --table t --csv " + csv.string() + fx.dd).exit_code == 0);
  auto a = run("--machine sum --table t" + fx.dd);
  auto b = run("--machine sum --table t" + fx.dd);
  REQUIRE(a.out == b.out);
  auto g1 = run("--machine get --table t --group 0 --slot 1" + fx.dd);
  auto g2 = run("--machine get --table t --group 0 --slot 1" + fx.dd);
  REQUIRE(g1.out == g2.out);
  REQUIRE(parse_record(g1.out, "get").at("value") == "4");
}

TEST_CASE("bench subcommand emits machine report lines at desk scale") {
  CliFixture fx;
  REQUIRE(run("keygen --profile desk256 --seed 7" + fx.dd).exit_code == 0);  // n = 128

  auto enc = run("--machine bench --suite encrypt --dataset " + fx.repo_csv("covid19.csv") +
                 " --group-size 100" + fx.dd);
  REQUIRE(enc.exit_code == 0);
  auto rec = parse_record(enc.out, "bench");
  REQUIRE(rec.at("suite") == "encrypt");
  REQUIRE(rec.at("tuples") == "341");
  REQUIRE(rec.at("profile") == "N=256,t=65537");

  auto agg = run("--machine bench --suite aggregate --dataset " + fx.repo_csv("covid19.csv") +
                 " --group-size 80" + fx.dd);
  REQUIRE(agg.exit_code == 0);
  auto arec = parse_record(agg.out, "bench");
  REQUIRE(arec.at("rotations_packed") == "0");
  REQUIRE(arec.at("rotations_singular") == "7");  // log2(128)
  REQUIRE(arec.at("oracle_ok") == "1");

  auto csv_out = (fx.dir / "report.csv").string();
  auto ins = run("--machine bench --suite insert --dataset " + fx.repo_csv("covid19.csv") +
                 " --group-size 100 --ops 10 --csv-out " + csv_out + fx.dd);
  REQUIRE(ins.exit_code == 0);
  REQUIRE(fs::exists(csv_out));
  auto sweep = run("--machine bench --suite sweep --dataset " + fx.repo_csv("covid19.csv") +
                   " --group-sizes 40 80 --ops 5" + fx.dd);
  REQUIRE(sweep.exit_code == 0);
  REQUIRE(sweep.out.find("record=sweep_summary") != std::string::npos);
  REQUIRE(run("bench --suite what --dataset hg38" + fx.dd).exit_code == 2);
}
