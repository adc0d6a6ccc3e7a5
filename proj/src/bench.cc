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

#include "cfusim/bench.h"

#include <algorithm>

#include "cfusim/cfu.h"
#include "cfusim/error.h"

namespace cfusim {
namespace {

uint64_t align4(uint64_t n) { return (n + 3) & ~uint64_t{3}; }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

}  // namespace

PlacementDemand placement_demand(const WorkloadSpec& w, Variant v) {
  PlacementDemand d;
  d.code_bytes = variant_info(v).code_bytes;
  d.weight_bytes = total_weight_bytes(w);
  d.activation_bytes = 2 * align4(std::max<uint64_t>(
                               max_activation_bytes(w), 64));
  return d;
}

BenchResult run_benchmark(const CpuConfig& config, const TimingParams& timing,
                          const WorkloadSpec& w, Variant v) {
  validate_config(config);
  if (!variant_supported(v, config.cfu)) {
    throw InfeasibleError(std::string("variant ") + variant_info(v).name +
                          " is not supported by cfu " + to_string(config.cfu));
  }
  BenchResult res;
  res.variant = v;
  res.estimate = estimate(config);
  const Board& board = find_board(builtin_boards(), config.board);
  FeasibilityVerdict verdict =
      feasible(res.estimate, board, config, placement_demand(w, v));
  if (!verdict.feasible) {
    throw InfeasibleError("config infeasible on " + board.name + ": " +
                          join(verdict.violations));
  }

  auto unit = make_cfu(config.cfu);
  TraceCoster coster(config, timing);
  coster.set_code(
      KernelMeta{variant_info(v).code_bytes, config.code_region});
  VariantRun run = run_variant(v, w, config, unit.get(), coster);
  res.report = coster.report();
  res.outputs = std::move(run.outputs);
  res.audits = std::move(run.audits);

  if (w.has_golden) {
    GoldenVerdict g = golden_check(w, res.outputs);
    if (!g.pass) {
      throw GoldenMismatchError(
          "workload " + w.name + " variant " + variant_info(v).name +
          ": outputs diverge from golden at byte " +
          std::to_string(g.first_diff) + " (digest " +
          digest_hex(g.actual_digest) + " vs " +
          digest_hex(g.expected_digest) + ")");
    }
  } else {
    std::vector<int8_t> ref = reference_run(w);
    if (ref != res.outputs) {
      size_t n = std::min(ref.size(), res.outputs.size());
      size_t diff = n;
      for (size_t i = 0; i < n; ++i) {
        if (ref[i] != res.outputs[i]) {
          diff = i;
          break;
        }
      }
      throw GoldenMismatchError(
          "workload " + w.name + " variant " + variant_info(v).name +
          ": outputs diverge from reference at byte " + std::to_string(diff));
    }
  }
  return res;
}

std::vector<LadderStage> mnv2_ladder() {
  CpuConfig base;  // defaults: arty-a7-35t, 4K caches, dynamic predictor
  auto with_cfu = [&](CfuKind kind) {
    CpuConfig c = base;
    c.cfu = kind;
    return c;
  };
  std::vector<LadderStage> stages;
  const Variant order[] = {
      Variant::kBaseline,     Variant::kSwSpec,     Variant::kCfuPostproc,
      Variant::kCfuHoldFilt,  Variant::kCfuHoldInp, Variant::kCfuMac4,
      Variant::kMac4Run1,     Variant::kInclPostproc,
      Variant::kMac4Run4,     Variant::kOverlap,
  };
  for (Variant v : order) {
    CfuKind kind = CfuKind::kNone;
    if (v == Variant::kCfuPostproc) {
      kind = CfuKind::kPostproc;
    } else if (v != Variant::kBaseline && v != Variant::kSwSpec) {
      kind = CfuKind::kCfu1;
    }
    stages.push_back({variant_info(v).name, with_cfu(kind), v});
  }
  return stages;
}

std::vector<LadderStage> kws_ladder() {
  CpuConfig base;
  base.board = "fomu";
  base.icache_bytes = 1024;
  base.dcache_bytes = 1024;
  base.l2_bytes = 0;
  base.predictor = Predictor::kNone;
  base.multiplier = Multiplier::kIterative;
  base.divider = Divider::kNone;
  base.shifter = Shifter::kIterative;
  base.flash = FlashMode::kSpi;
  base.code_region = Placement::kFlash;
  base.weights_region = Placement::kFlash;
  base.cfu = CfuKind::kNone;

  std::vector<LadderStage> stages;
  CpuConfig c = base;
  stages.push_back({"baseline_spi", c, Variant::kKwsBaseline});
  c.flash = FlashMode::kQuadSpi;
  stages.push_back({"quad_spi", c, Variant::kKwsBaseline});
  c.code_region = Placement::kSram;
  c.weights_region = Placement::kSram;
  stages.push_back({"sram_placement", c, Variant::kKwsBaseline});
  c.icache_bytes = 8192;
  stages.push_back({"larger_icache", c, Variant::kKwsBaseline});
  c.multiplier = Multiplier::kSingleCycle;
  stages.push_back({"fast_mult", c, Variant::kKwsFastmult});
  c.cfu = CfuKind::kCfu2;
  stages.push_back({"mac_conv", c, Variant::kKwsMacconv});
  stages.push_back({"unit_postproc", c, Variant::kKwsPostproc});
  return stages;
}

std::string ladder_workload_name(const std::string& case_name) {
  if (case_name == "mnv2") return "mnv2_slice";
  if (case_name == "kws") return "kws_slice";
  throw ParseError("unknown ladder case '" + case_name + "'");
}

std::vector<LadderStage> ladder_stages(const std::string& case_name) {
  if (case_name == "mnv2") return mnv2_ladder();
  if (case_name == "kws") return kws_ladder();
  throw ParseError("unknown ladder case '" + case_name + "'");
}

std::vector<LadderRow> run_ladder(const std::vector<LadderStage>& stages,
                                  const WorkloadSpec& w,
                                  const TimingParams& timing) {
  std::vector<LadderRow> rows;
  uint64_t first = 0;
  for (const LadderStage& s : stages) {
    LadderRow row;
    row.stage = s;
    row.result = run_benchmark(s.config, timing, w, s.variant);
    if (first == 0) first = row.result.report.total_cycles;
    row.speedup = row.result.report.total_cycles == 0
                      ? 0.0
                      : static_cast<double>(first) /
                            static_cast<double>(row.result.report.total_cycles);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cfusim
