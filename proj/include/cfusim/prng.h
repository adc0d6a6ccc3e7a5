// Copyright 2026 The cfusim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFUSIM_PRNG_H_
#define CFUSIM_PRNG_H_

#include <cstdint>

namespace cfusim {

// SplitMix64. Deterministic across platforms; used for workload data
// generation and every seeded search so results are reproducible.
class Prng64 {
 public:
  explicit Prng64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  // Low byte of the next value, reinterpreted as two's-complement int8.
  int8_t next_int8() { return static_cast<int8_t>(next() & 0xFF); }

  // Uniform value in [0, n) via rejection sampling (no modulo bias).
  uint64_t next_below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t v = next();
      if (v >= threshold) return v % n;
    }
  }

  // Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

}  // namespace cfusim

#endif  // CFUSIM_PRNG_H_
