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

#include "cfusim/cost.h"

#include <algorithm>
#include <stdexcept>

namespace cfusim {

uint64_t ifetch_cycles(const CpuConfig& config, const TimingParams& timing,
                       const KernelMeta& meta, uint64_t dyn_instructions) {
  if (meta.code_bytes == 0 || dyn_instructions == 0) return 0;
  uint64_t line = config.line_bytes;
  uint64_t insns_per_line = line / 4;
  uint64_t code = meta.code_bytes;
  uint64_t cold_fills = (code + line - 1) / line;
  uint64_t capacity_fills = 0;
  if (code > config.icache_bytes) {
    capacity_fills =
        dyn_instructions * (code - config.icache_bytes) / (insns_per_line * code);
  }
  uint64_t fill = meta.code_placement == Placement::kFlash
                      ? insns_per_line * timing.flash_word_cycles(config.flash)
                      : timing.icache_miss_penalty;
  return (cold_fills + capacity_fills) * fill;
}

namespace {

CacheSim make_cache(uint32_t bytes, uint32_t line, uint32_t assoc) {
  if (bytes == 0) return CacheSim();
  return CacheSim(bytes, line, assoc);
}

}  // namespace

TraceCoster::TraceCoster(const CpuConfig& config, const TimingParams& timing)
    : config_(config),
      timing_(timing),
      dcache_(make_cache(config.dcache_bytes, config.line_bytes,
                         config.assoc)),
      l2_(make_cache(config.l2_bytes, config.line_bytes, config.assoc)),
      predictor_(config.predictor, timing.mispredict_penalty) {}

uint64_t TraceCoster::data_access_cycles(const TraceEvent& event,
                                         bool is_store) {
  uint64_t cycles = is_store ? timing_.store_hit : timing_.load_hit;
  if (event.region == MemRegion::kFlash) {
    return cycles + timing_.flash_word_cycles(config_.flash);
  }
  if (dcache_.present()) {
    if (!dcache_.access(event.a, is_store)) {
      if (l2_.present() && l2_.access(event.a, is_store)) {
        cycles += timing_.l2_hit_penalty;
      } else {
        cycles += timing_.dcache_miss_penalty;
      }
    }
  } else if (l2_.present()) {
    cycles += l2_.access(event.a, is_store) ? timing_.l2_hit_penalty
                                            : timing_.dcache_miss_penalty;
  } else {
    cycles += timing_.sram_latency;
  }
  return cycles;
}

void TraceCoster::add_cycles(uint64_t cycles) {
  acc_.execute_cycles += cycles;
  if (!region_stack_.empty())
    acc_.regions[region_stack_.back()].cycles += cycles;
}

void TraceCoster::on_event(const TraceEvent& event) {
  switch (event.kind) {
    case EventKind::kLoad:
      ++acc_.loads;
      ++acc_.instructions;
      add_cycles(data_access_cycles(event, false));
      break;
    case EventKind::kStore:
      ++acc_.stores;
      ++acc_.instructions;
      add_cycles(data_access_cycles(event, true));
      break;
    case EventKind::kMul:
      ++acc_.muls;
      ++acc_.instructions;
      add_cycles(timing_.mul_cycles(config_.multiplier));
      break;
    case EventKind::kDiv:
      ++acc_.divs;
      ++acc_.instructions;
      add_cycles(timing_.div_iterative);
      break;
    case EventKind::kShift: {
      ++acc_.shifts;
      ++acc_.instructions;
      uint64_t cycles = 1;
      if (config_.shifter == Shifter::kIterative)
        cycles += std::min<uint32_t>(event.a, 31);
      add_cycles(cycles);
      break;
    }
    case EventKind::kAlu:
      acc_.alus += event.a;
      acc_.instructions += event.a;
      add_cycles(static_cast<uint64_t>(event.a) * timing_.alu);
      break;
    case EventKind::kBranch:
      ++acc_.branches;
      ++acc_.instructions;
      add_cycles(1 + predictor_.on_branch(event.a, event.b, event.taken));
      break;
    case EventKind::kCfuIssue:
      ++acc_.cfu_issues;
      ++acc_.instructions;
      add_cycles(timing_.cfu_fixed_issue + event.b);
      break;
    case EventKind::kRegionBegin: {
      size_t idx = 0;
      for (; idx < acc_.regions.size(); ++idx)
        if (acc_.regions[idx].name == event.name) break;
      if (idx == acc_.regions.size())
        acc_.regions.push_back({event.name, 0, 0, 0.0});
      ++acc_.regions[idx].invocations;
      region_stack_.push_back(idx);
      break;
    }
    case EventKind::kRegionEnd:
      if (region_stack_.empty())
        throw std::logic_error("trace region end without begin");
      region_stack_.pop_back();
      break;
  }
}

CycleReport TraceCoster::report() const {
  CycleReport r = acc_;
  r.dcache_hits = dcache_.hits();
  r.dcache_misses = dcache_.misses();
  r.branch_mispredicts = predictor_.mispredicts();
  r.ifetch_cycles = ifetch_cycles(config_, timing_, meta_, r.instructions);
  r.total_cycles = r.execute_cycles + r.ifetch_cycles;
  for (RegionStat& s : r.regions) {
    s.percent = r.total_cycles == 0
                    ? 0.0
                    : 100.0 * static_cast<double>(s.cycles) /
                          static_cast<double>(r.total_cycles);
  }
  return r;
}

}  // namespace cfusim
