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

// Additive FPGA resource estimation for a CpuConfig plus attached unit,
// checked against a board catalog. LUT increments are calibration
// constants that claim ordering plausibility, not measurements; cache BRAM
// carries a fixed 12.5% tag overhead.

#ifndef CFUSIM_COSTMODEL_H_
#define CFUSIM_COSTMODEL_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/cfu.h"
#include "cfusim/config.h"

namespace cfusim {

struct Board {
  std::string name;
  uint32_t luts = 0;
  uint32_t dsps = 0;
  uint64_t bram_bytes = 0;
  uint64_t sram_bytes = 0;
  uint64_t rom_bytes = 0;
  uint32_t clk_mhz = 0;
};

// Per-feature increments over the base core. Unit entries default to the
// models' declared costs; every field is overridable from the calibration
// file.
struct FeatureCosts {
  FeatureCosts();

  uint32_t base_cpu_luts;
  uint32_t predictor_static_luts;
  uint32_t predictor_dynamic_luts;
  uint32_t predictor_dynamic_target_luts;
  uint32_t barrel_shifter_luts;
  uint32_t iterative_divider_luts;
  uint32_t iterative_multiplier_luts;
  uint32_t single_cycle_multiplier_dsps;
  std::array<ResourceCost, 6> cfu;  // indexed by CfuKind
};

struct EstimateItem {
  std::string feature;
  ResourceCost cost;
};

// Totals always equal the sum over items.
struct ResourceEstimate {
  uint32_t luts = 0;
  uint32_t dsps = 0;
  uint64_t bram_bytes = 0;
  std::vector<EstimateItem> items;
};

// The six supported boards.
std::vector<Board> builtin_boards();

// "[name]" sections of "key = value" lines; '#' comments. Keys: luts,
// dsps, bram_bytes, sram_bytes, rom_bytes, clk_mhz. All capacities must be
// positive. Throws ParseError.
std::vector<Board> parse_boards_text(const std::string& text);
std::vector<Board> load_boards_file(const std::string& path);

// Throws ParseError when the name is not in the catalog.
const Board& find_board(const std::vector<Board>& catalog,
                        const std::string& name);

// Flat "key = value" lines; '#' comments. Keys are the FeatureCosts field
// names plus cfu_<name>_{luts,dsps,bram_bytes}. Throws ParseError.
FeatureCosts parse_feature_costs_text(const std::string& text);
FeatureCosts load_feature_costs_file(const std::string& path);

// Deterministic additive estimate; every enabled feature contributes one
// item. Cache BRAM per cache = bytes + bytes/8.
ResourceEstimate estimate(const CpuConfig& config,
                          const FeatureCosts& costs = FeatureCosts());

// Storage a workload needs: code and weights in their configured regions,
// both activation arenas in SRAM.
struct PlacementDemand {
  uint64_t code_bytes = 0;
  uint64_t weight_bytes = 0;
  uint64_t activation_bytes = 0;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<std::string> violations;  // "dsps 12 > 8"
};

// Fabric budgets only.
FeasibilityVerdict feasible(const ResourceEstimate& est, const Board& board);

// Fabric budgets plus workload placement against sram_bytes / rom_bytes.
FeasibilityVerdict feasible(const ResourceEstimate& est, const Board& board,
                            const CpuConfig& config,
                            const PlacementDemand& demand);

}  // namespace cfusim

#endif  // CFUSIM_COSTMODEL_H_
