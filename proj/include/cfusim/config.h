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

#ifndef CFUSIM_CONFIG_H_
#define CFUSIM_CONFIG_H_

#include <cstdint>
#include <string>

namespace cfusim {

enum class Predictor { kNone, kStatic, kDynamic, kDynamicTarget };
enum class Multiplier { kIterative, kSingleCycle };
enum class Divider { kNone, kIterative };
enum class Shifter { kIterative, kBarrel };
enum class FlashMode { kSpi, kQuadSpi };
enum class Placement { kFlash, kSram };
enum class CfuKind { kNone, kDemo, kPostproc, kMac4, kCfu1, kCfu2 };

// Soft-CPU configuration point. Cache sizes of 0 mean the cache is absent.
// The L2 sits in front of SRAM only; flash is uncached XIP.
struct CpuConfig {
  uint32_t icache_bytes = 4096;
  uint32_t dcache_bytes = 4096;
  uint32_t l2_bytes = 0;
  uint32_t line_bytes = 32;
  uint32_t assoc = 2;
  Predictor predictor = Predictor::kDynamic;
  Multiplier multiplier = Multiplier::kIterative;
  Divider divider = Divider::kNone;
  Shifter shifter = Shifter::kBarrel;
  FlashMode flash = FlashMode::kQuadSpi;
  Placement code_region = Placement::kSram;
  Placement weights_region = Placement::kSram;
  CfuKind cfu = CfuKind::kNone;
  std::string board = "arty-a7-35t";
};

// Per-event cycle costs. A load/store that hits costs its base value; a
// dcache miss adds l2_hit_penalty (L2 hit) or dcache_miss_penalty (fill
// from SRAM); an uncached SRAM access adds sram_latency; any flash access
// pays one flash word transfer. An iterative shift adds min(amount, 31)
// cycles; a barrel shift adds none.
struct TimingParams {
  uint32_t alu = 1;
  uint32_t load_hit = 1;
  uint32_t store_hit = 1;
  uint32_t icache_miss_penalty = 10;
  uint32_t dcache_miss_penalty = 10;
  uint32_t l2_hit_penalty = 6;
  uint32_t sram_latency = 1;
  uint32_t flash_word_cycles_spi = 64;
  uint32_t flash_word_cycles_quad = 16;
  uint32_t mul_iterative = 30;
  uint32_t mul_single = 1;
  uint32_t div_iterative = 34;
  uint32_t mispredict_penalty = 3;
  uint32_t cfu_fixed_issue = 1;

  uint32_t flash_word_cycles(FlashMode m) const {
    return m == FlashMode::kSpi ? flash_word_cycles_spi
                                : flash_word_cycles_quad;
  }
  uint32_t mul_cycles(Multiplier m) const {
    return m == Multiplier::kIterative ? mul_iterative : mul_single;
  }
};

const char* to_string(Predictor p);
const char* to_string(Multiplier m);
const char* to_string(Divider d);
const char* to_string(Shifter s);
const char* to_string(FlashMode f);
const char* to_string(Placement p);
const char* to_string(CfuKind c);

CfuKind cfu_kind_from_string(const std::string& s);  // throws ParseError

// Applies "key = value" to a config; key is any CpuConfig field name.
// Throws ParseError on unknown keys or bad values.
void apply_config_key(CpuConfig* cfg, const std::string& key,
                      const std::string& value);

// Applies a key from the [timing] section.
void apply_timing_key(TimingParams* tp, const std::string& key,
                      const std::string& value);

// Parses a config file: "key = value" lines for CpuConfig fields, plus an
// optional "[timing]" section for TimingParams fields. '#' comments.
void parse_config_text(const std::string& text, CpuConfig* cfg,
                       TimingParams* tp);

// Validates structural constraints (line size power of two, cache sizes
// divisible by line*assoc, ...). Throws ParseError on violation.
void validate_config(const CpuConfig& cfg);

}  // namespace cfusim

#endif  // CFUSIM_CONFIG_H_
