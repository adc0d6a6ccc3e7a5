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

// Whole-workload benchmarking: feasibility gate, variant execution into the
// trace coster, golden verification, and the two built-in optimization
// ladders.

#ifndef CFUSIM_BENCH_H_
#define CFUSIM_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/config.h"
#include "cfusim/cost.h"
#include "cfusim/costmodel.h"
#include "cfusim/variants.h"
#include "cfusim/workloads.h"

namespace cfusim {

struct BenchResult {
  Variant variant;
  CycleReport report;
  std::vector<int8_t> outputs;
  std::vector<LayerAudit> audits;
  ResourceEstimate estimate;
};

// Storage the workload asks of the board under this variant: static code,
// weights, and both activation arenas.
PlacementDemand placement_demand(const WorkloadSpec& w, Variant v);

// Validates the config, gates on estimate + placement feasibility, runs
// the variant with its unit attached, costs the trace, and verifies the
// outputs bit-exactly against the reference (stored golden when present).
// Throws InfeasibleError (resources or unsupported variant),
// GoldenMismatchError, ParseError (bad config / unknown board).
BenchResult run_benchmark(const CpuConfig& config, const TimingParams& timing,
                          const WorkloadSpec& w, Variant v);

struct LadderStage {
  std::string label;
  CpuConfig config;
  Variant variant;
};

// Image-model ladder: one config, progressively specialized variants.
std::vector<LadderStage> mnv2_ladder();

// Audio-model ladder: one small-board story, system knobs first, then the
// streaming unit.
std::vector<LadderStage> kws_ladder();

// Bundled workload name each ladder runs on.
std::string ladder_workload_name(const std::string& case_name);  // mnv2|kws

// Stage lookup by case name. Throws ParseError for unknown cases.
std::vector<LadderStage> ladder_stages(const std::string& case_name);

struct LadderRow {
  LadderStage stage;
  BenchResult result;
  double speedup = 1.0;  // first-stage cycles / this stage's cycles
};

std::vector<LadderRow> run_ladder(const std::vector<LadderStage>& stages,
                                  const WorkloadSpec& w,
                                  const TimingParams& timing);

}  // namespace cfusim

#endif  // CFUSIM_BENCH_H_
