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
#include <string>
#include <vector>

namespace hermes {

enum class OpKind : std::uint8_t {
  Rotate,
  MultPlain,
  AddCt,
  AddPlain,
  SubPlain,
  Encrypt,
  Refresh,
};

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Rotate: return "rotate";
    case OpKind::MultPlain: return "mult_plain";
    case OpKind::AddCt: return "add_ct";
    case OpKind::AddPlain: return "add_plain";
    case OpKind::SubPlain: return "sub_plain";
    case OpKind::Encrypt: return "encrypt";
    case OpKind::Refresh: return "refresh";
  }
  return "?";
}

/// Records the homomorphic operations a code path executed. Update paths must
/// run an index-independent sequence of operation types; this recorder is what
/// the tests assert that against, and what rotation accounting reads.
struct OpTrace {
  std::uint64_t rotations = 0;
  std::uint64_t plain_mults = 0;
  std::uint64_t ct_adds = 0;
  std::uint64_t plain_adds = 0;
  std::uint64_t plain_subs = 0;
  std::uint64_t encryptions = 0;
  std::uint64_t refreshes = 0;
  std::vector<OpKind> sequence;

  void record(OpKind k) {
    switch (k) {
      case OpKind::Rotate: ++rotations; break;
      case OpKind::MultPlain: ++plain_mults; break;
      case OpKind::AddCt: ++ct_adds; break;
      case OpKind::AddPlain: ++plain_adds; break;
      case OpKind::SubPlain: ++plain_subs; break;
      case OpKind::Encrypt: ++encryptions; break;
      case OpKind::Refresh: ++refreshes; break;
    }
    sequence.push_back(k);
  }

  void reset() { *this = OpTrace{}; }

  std::string sequence_string() const {
    std::string s;
    for (auto k : sequence) {
      if (!s.empty()) s.push_back(',');
      s += to_string(k);
    }
    return s;
  }
};

}  // namespace hermes
