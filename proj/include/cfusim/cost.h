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
//
// Cycle accounting over abstract execution traces. Data-side costs are
// simulated event by event (cache state, branch predictor state); the
// instruction side is charged with an analytical refill model driven by the
// dynamic instruction count and the kernel's static code size.

#ifndef CFUSIM_COST_H_
#define CFUSIM_COST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/cache.h"
#include "cfusim/config.h"
#include "cfusim/predictor.h"
#include "cfusim/trace.h"

namespace cfusim {

// Static properties of the code behind a trace.
struct KernelMeta {
  uint32_t code_bytes = 0;
  Placement code_placement = Placement::kSram;
};

struct RegionStat {
  std::string name;
  uint64_t invocations = 0;
  uint64_t cycles = 0;
  double percent = 0.0;
};

struct CycleReport {
  uint64_t total_cycles = 0;
  uint64_t execute_cycles = 0;
  uint64_t ifetch_cycles = 0;
  uint64_t instructions = 0;
  uint64_t loads = 0;
  uint64_t stores = 0;
  uint64_t muls = 0;
  uint64_t divs = 0;
  uint64_t shifts = 0;
  uint64_t alus = 0;
  uint64_t branches = 0;
  uint64_t cfu_issues = 0;
  uint64_t dcache_hits = 0;
  uint64_t dcache_misses = 0;
  uint64_t branch_mispredicts = 0;
  std::vector<RegionStat> regions;  // order of first appearance
};

// Instruction-side refill cycles for a straight-line-dominated kernel.
// Cold misses fill every line once; capacity misses are charged on the
// fraction of the footprint that does not fit in the instruction cache.
uint64_t ifetch_cycles(const CpuConfig& config, const TimingParams& timing,
                       const KernelMeta& meta, uint64_t dyn_instructions);

class TraceCoster : public TraceSink {
 public:
  TraceCoster(const CpuConfig& config, const TimingParams& timing);

  void on_event(const TraceEvent& event) override;
  void set_code(const KernelMeta& meta) { meta_ = meta; }

  // Finalizes the instruction-side charge and region percentages.
  CycleReport report() const;

 private:
  uint64_t data_access_cycles(const TraceEvent& event, bool is_store);
  void add_cycles(uint64_t cycles);

  CpuConfig config_;
  TimingParams timing_;
  KernelMeta meta_;
  CacheSim dcache_;
  CacheSim l2_;
  PredictorSim predictor_;
  CycleReport acc_;
  std::vector<size_t> region_stack_;
};

}  // namespace cfusim

#endif  // CFUSIM_COST_H_
