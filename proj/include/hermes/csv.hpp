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

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hermes/errors.hpp"
#include "hermes/numeric.hpp"

// Ingestion input: a single numeric column, UTF-8, one value per line,
// optional header line. Values are non-negative integers.

namespace hermes {

struct CsvColumn {
  std::vector<u64> values;
  bool had_header = false;
};

namespace detail {

inline std::optional<u64> parse_u64(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = s.find_last_not_of(" \t\r");
  if (s[begin] == '+') ++begin;
  if (begin > end) return std::nullopt;
  u64 v = 0;
  for (std::size_t i = begin; i <= end; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    u64 digit = static_cast<u64>(s[i] - '0');
    if (v > (~u64(0) - digit) / 10) return std::nullopt;  // overflow
    v = v * 10 + digit;
  }
  return v;
}

}  // namespace detail

inline CsvColumn read_csv_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvColumn out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // allow and skip blank lines
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto v = detail::parse_u64(line);
    if (!v) {
      if (out.values.empty() && !out.had_header && line_no == 1) {
        out.had_header = true;  // non-numeric first line is treated as a header
        continue;
      }
      throw RangeError("row " + std::to_string(line_no) + ": not a non-negative integer: " + line);
    }
    out.values.push_back(*v);
  }
  return out;
}

/// Rational rescaling k/d applied before range checks, rounding half up.
struct Scale {
  u64 num = 1;
  u64 den = 1;

  u64 apply(u64 v) const {
    u128 scaled = (u128(v) * num + den / 2) / den;
    if (scaled > ~u64(0)) throw RangeError("scaled value overflows 64 bits");
    return static_cast<u64>(scaled);
  }

  bool identity() const { return num == 1 && den == 1; }

  /// Parse "k" or "k/d".
  static Scale parse(const std::string& s) {
    Scale out;
    auto slash = s.find('/');
    auto num = detail::parse_u64(slash == std::string::npos ? s : s.substr(0, slash));
    if (!num || *num == 0) throw RangeError("bad scale: " + s);
    out.num = *num;
    if (slash != std::string::npos) {
      auto den = detail::parse_u64(s.substr(slash + 1));
      if (!den || *den == 0) throw RangeError("bad scale: " + s);
      out.den = *den;
    }
    return out;
  }
};

/// Scale the column and enforce the Z_t range. Without reduce_mod_t any
/// value >= t is an error naming its row: silent modular wraparound of real
/// data is a correctness trap, so reduction is always explicit.
inline std::vector<u64> prepare_for_ingest(const std::vector<u64>& values, const Scale& scale,
                                           u64 plain_modulus, bool reduce_mod_t) {
  std::vector<u64> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    u64 v = scale.identity() ? values[i] : scale.apply(values[i]);
    if (v >= plain_modulus) {
      if (!reduce_mod_t) {
        throw RangeError("row " + std::to_string(i + 1) + ": value " + std::to_string(v) +
                         " is not below t=" + std::to_string(plain_modulus) +
                         " (pass --reduce-mod-t to fold values into Z_t explicitly)");
      }
      v %= plain_modulus;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace hermes
