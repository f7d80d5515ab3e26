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
#include <random>

#include "hermes/numeric.hpp"

namespace hermes {

/// Seedable randomness source. A fixed seed reproduces the same stream
/// (deterministic test mode); from_entropy() draws the seed from the OS.
/// Raw mt19937_64 output is used directly so streams are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(u64 seed) : gen_(seed) {}

  static Rng from_entropy() {
    std::random_device rd;
    u64 seed = (u64(rd()) << 32) ^ rd();
    return Rng(seed);
  }

  u64 next_u64() { return gen_(); }

  /// Uniform value in [0, bound) by rejection; bound must be nonzero.
  u64 below(u64 bound) {
    u64 mask = ~u64(0);
    if (bound > 1) {
      unsigned bits = 64 - static_cast<unsigned>(__builtin_clzll(bound - 1));
      mask = (bits >= 64) ? ~u64(0) : ((u64(1) << bits) - 1);
    } else {
      return 0;
    }
    for (;;) {
      u64 v = gen_() & mask;
      if (v < bound) return v;
    }
  }

  bool coin() { return (gen_() & 1) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hermes
