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
// Instruction-set simulator with cycle accounting. Memory map: flash (XIP,
// read-only during execution) at 0x00000000, SRAM at 0x40000000. ebreak
// halts cleanly; ecall and architectural faults (unaligned or unmapped
// access, stores to flash, divide without a divider, illegal instructions,
// CFU issue without an attached unit) end the run as traps.

#ifndef CFUSIM_ISS_H_
#define CFUSIM_ISS_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "cfusim/cache.h"
#include "cfusim/cfu.h"
#include "cfusim/config.h"
#include "cfusim/isa.h"
#include "cfusim/predictor.h"

namespace cfusim {

inline constexpr uint32_t kFlashBase = 0x00000000;
inline constexpr uint32_t kSramBase = 0x40000000;

struct RunResult {
  bool halted = false;  // reached ebreak
  bool trapped = false;
  bool limit_hit = false;
  std::string trap_reason;
  uint32_t stop_pc = 0;
  uint64_t instructions = 0;
  uint64_t cycles = 0;
  uint64_t loads = 0;
  uint64_t stores = 0;
  uint64_t muls = 0;
  uint64_t divs = 0;
  uint64_t shifts = 0;
  uint64_t branches = 0;
  uint64_t cfu_issues = 0;
  uint64_t icache_hits = 0;
  uint64_t icache_misses = 0;
  uint64_t dcache_hits = 0;
  uint64_t dcache_misses = 0;
  uint64_t branch_mispredicts = 0;
};

class Machine {
 public:
  Machine(const CpuConfig& config, const TimingParams& timing,
          uint32_t flash_bytes = 1u << 20, uint32_t sram_bytes = 1u << 20);

  // Copies the image into its region and points pc at the origin.
  void load_program(const ProgramImage& image);

  // Setup-time raw memory access; throws std::out_of_range when the range
  // does not sit inside one region.
  void write_bytes(uint32_t addr, const void* data, size_t n);
  void read_bytes(uint32_t addr, void* out, size_t n) const;

  uint32_t reg(uint32_t idx) const { return regs_[idx & 31]; }
  void set_reg(uint32_t idx, uint32_t value) {
    if ((idx & 31) != 0) regs_[idx & 31] = value;
  }
  uint32_t pc() const { return pc_; }
  void set_pc(uint32_t pc) { pc_ = pc; }

  CfuModel* cfu() { return cfu_.get(); }

  // Executes until ebreak, a trap, or the instruction limit. When trace is
  // given, each retired instruction is printed one per line as
  // "pc:  word  disassembly".
  RunResult run(uint64_t max_instructions = 50'000'000,
                std::ostream* trace = nullptr);

 private:
  struct Span {
    uint8_t* data = nullptr;
    bool writable = false;
  };
  Span resolve(uint32_t addr, uint32_t bytes) const;

  uint64_t fetch_penalty(uint32_t pc);
  uint64_t data_cycles(uint32_t addr, bool is_store, bool in_flash);

  CpuConfig config_;
  TimingParams timing_;
  std::vector<uint8_t> flash_;
  std::vector<uint8_t> sram_;
  uint32_t regs_[32] = {};
  uint32_t pc_ = kSramBase;
  std::unique_ptr<CfuModel> cfu_;
  CacheSim icache_;
  CacheSim dcache_;
  CacheSim l2_;
  PredictorSim predictor_;
  uint32_t last_fetch_line_ = 0xFFFFFFFF;
};

}  // namespace cfusim

#endif  // CFUSIM_ISS_H_
