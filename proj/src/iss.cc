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

#include "cfusim/iss.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace cfusim {

namespace {

CacheSim make_cache(uint32_t bytes, uint32_t line, uint32_t assoc) {
  if (bytes == 0) return CacheSim();
  return CacheSim(bytes, line, assoc);
}

struct Trap {
  std::string reason;
};

}  // namespace

Machine::Machine(const CpuConfig& config, const TimingParams& timing,
                 uint32_t flash_bytes, uint32_t sram_bytes)
    : config_(config),
      timing_(timing),
      flash_(flash_bytes, 0),
      sram_(sram_bytes, 0),
      cfu_(make_cfu(config.cfu)),
      icache_(make_cache(config.icache_bytes, config.line_bytes,
                         config.assoc)),
      dcache_(make_cache(config.dcache_bytes, config.line_bytes,
                         config.assoc)),
      l2_(make_cache(config.l2_bytes, config.line_bytes, config.assoc)),
      predictor_(config.predictor, timing.mispredict_penalty) {}

Machine::Span Machine::resolve(uint32_t addr, uint32_t bytes) const {
  uint64_t end = static_cast<uint64_t>(addr) + bytes;
  if (end <= flash_.size())
    return {const_cast<uint8_t*>(flash_.data()) + addr, false};
  if (addr >= kSramBase && end - kSramBase <= sram_.size())
    return {const_cast<uint8_t*>(sram_.data()) + (addr - kSramBase), true};
  return {nullptr, false};
}

void Machine::load_program(const ProgramImage& image) {
  Span s = resolve(image.origin,
                   static_cast<uint32_t>(image.words.size() * 4));
  if (!s.data) throw std::out_of_range("program image outside memory map");
  std::memcpy(s.data, image.words.data(), image.words.size() * 4);
  pc_ = image.origin;
}

void Machine::write_bytes(uint32_t addr, const void* data, size_t n) {
  Span s = resolve(addr, static_cast<uint32_t>(n));
  if (!s.data) throw std::out_of_range("address range outside memory map");
  std::memcpy(s.data, data, n);
}

void Machine::read_bytes(uint32_t addr, void* out, size_t n) const {
  Span s = resolve(addr, static_cast<uint32_t>(n));
  if (!s.data) throw std::out_of_range("address range outside memory map");
  std::memcpy(out, s.data, n);
}

uint64_t Machine::fetch_penalty(uint32_t pc) {
  bool in_flash = pc < kSramBase;
  uint32_t words_per_line = config_.line_bytes / 4;
  if (icache_.present()) {
    if (icache_.access(pc, false)) return 0;
    if (in_flash)
      return static_cast<uint64_t>(words_per_line) *
             timing_.flash_word_cycles(config_.flash);
    return timing_.icache_miss_penalty;
  }
  if (in_flash) return timing_.flash_word_cycles(config_.flash);
  uint32_t line = pc / config_.line_bytes;
  if (line == last_fetch_line_) return 0;
  last_fetch_line_ = line;
  return timing_.sram_latency;
}

uint64_t Machine::data_cycles(uint32_t addr, bool is_store, bool in_flash) {
  uint64_t cycles = is_store ? timing_.store_hit : timing_.load_hit;
  if (in_flash) return cycles + timing_.flash_word_cycles(config_.flash);
  if (dcache_.present()) {
    if (!dcache_.access(addr, is_store)) {
      if (l2_.present() && l2_.access(addr, is_store))
        cycles += timing_.l2_hit_penalty;
      else
        cycles += timing_.dcache_miss_penalty;
    }
  } else if (l2_.present()) {
    cycles += l2_.access(addr, is_store) ? timing_.l2_hit_penalty
                                         : timing_.dcache_miss_penalty;
  } else {
    cycles += timing_.sram_latency;
  }
  return cycles;
}

RunResult Machine::run(uint64_t max_instructions, std::ostream* trace) {
  RunResult r;
  uint64_t base_icache_hits = icache_.hits();
  uint64_t base_icache_misses = icache_.misses();
  uint64_t base_dcache_hits = dcache_.hits();
  uint64_t base_dcache_misses = dcache_.misses();
  uint64_t base_mispredicts = predictor_.mispredicts();

  auto read_mem = [&](uint32_t addr, uint32_t bytes, bool sign) -> uint32_t {
    if (addr % bytes != 0) throw Trap{"unaligned load"};
    Span s = resolve(addr, bytes);
    if (!s.data) throw Trap{"unmapped load"};
    uint32_t v = 0;
    std::memcpy(&v, s.data, bytes);
    if (sign && bytes == 1) v = static_cast<uint32_t>(static_cast<int8_t>(v));
    if (sign && bytes == 2) v = static_cast<uint32_t>(static_cast<int16_t>(v));
    r.cycles += data_cycles(addr, false, addr < kSramBase);
    ++r.loads;
    return v;
  };
  auto write_mem = [&](uint32_t addr, uint32_t bytes, uint32_t value) {
    if (addr % bytes != 0) throw Trap{"unaligned store"};
    Span s = resolve(addr, bytes);
    if (!s.data) throw Trap{"unmapped store"};
    if (!s.writable) throw Trap{"store to flash"};
    std::memcpy(s.data, &value, bytes);
    r.cycles += data_cycles(addr, true, false);
    ++r.stores;
  };

  try {
    while (r.instructions < max_instructions) {
      uint32_t pc = pc_;
      if (pc % 4 != 0) throw Trap{"unaligned fetch"};
      Span s = resolve(pc, 4);
      if (!s.data) throw Trap{"unmapped fetch"};
      uint32_t word = 0;
      std::memcpy(&word, s.data, 4);
      r.cycles += fetch_penalty(pc);

      Decoded d = decode(word);
      if (trace) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%08x:  %08x  ", pc, word);
        *trace << buf << disassemble(word) << "\n";
      }
      ++r.instructions;
      uint32_t next_pc = pc + 4;
      uint32_t a = regs_[d.rs1];
      uint32_t b = regs_[d.rs2];
      int32_t sa = static_cast<int32_t>(a);
      int32_t sb = static_cast<int32_t>(b);
      uint32_t result = 0;
      bool write_rd = false;

      auto shift_cost = [&](uint32_t amount) {
        ++r.shifts;
        r.cycles += 1;
        if (config_.shifter == Shifter::kIterative)
          r.cycles += std::min<uint32_t>(amount, 31);
      };
      auto alu_cost = [&] { r.cycles += timing_.alu; };
      auto mul_cost = [&] {
        ++r.muls;
        r.cycles += timing_.mul_cycles(config_.multiplier);
      };
      auto div_cost = [&] {
        if (config_.divider == Divider::kNone)
          throw Trap{"divide without divider"};
        ++r.divs;
        r.cycles += timing_.div_iterative;
      };
      auto branch_cost = [&](uint32_t target, bool taken) {
        ++r.branches;
        r.cycles += 1 + predictor_.on_branch(pc, target, taken);
        if (taken) next_pc = target;
      };

      switch (d.op) {
        case Op::kAdd: result = a + b; write_rd = true; alu_cost(); break;
        case Op::kSub: result = a - b; write_rd = true; alu_cost(); break;
        case Op::kXor: result = a ^ b; write_rd = true; alu_cost(); break;
        case Op::kOr: result = a | b; write_rd = true; alu_cost(); break;
        case Op::kAnd: result = a & b; write_rd = true; alu_cost(); break;
        case Op::kSlt: result = sa < sb; write_rd = true; alu_cost(); break;
        case Op::kSltu: result = a < b; write_rd = true; alu_cost(); break;
        case Op::kSll:
          result = a << (b & 31);
          write_rd = true;
          shift_cost(b & 31);
          break;
        case Op::kSrl:
          result = a >> (b & 31);
          write_rd = true;
          shift_cost(b & 31);
          break;
        case Op::kSra:
          result = static_cast<uint32_t>(sa >> (b & 31));
          write_rd = true;
          shift_cost(b & 31);
          break;
        case Op::kMul:
          result = a * b;
          write_rd = true;
          mul_cost();
          break;
        case Op::kMulh:
          result = static_cast<uint32_t>(
              (static_cast<int64_t>(sa) * sb) >> 32);
          write_rd = true;
          mul_cost();
          break;
        case Op::kMulhsu:
          result = static_cast<uint32_t>(
              (static_cast<int64_t>(sa) * static_cast<int64_t>(b)) >> 32);
          write_rd = true;
          mul_cost();
          break;
        case Op::kMulhu:
          result = static_cast<uint32_t>(
              (static_cast<uint64_t>(a) * b) >> 32);
          write_rd = true;
          mul_cost();
          break;
        case Op::kDiv:
          div_cost();
          if (sb == 0)
            result = 0xFFFFFFFFu;
          else if (sa == std::numeric_limits<int32_t>::min() && sb == -1)
            result = a;
          else
            result = static_cast<uint32_t>(sa / sb);
          write_rd = true;
          break;
        case Op::kDivu:
          div_cost();
          result = b == 0 ? 0xFFFFFFFFu : a / b;
          write_rd = true;
          break;
        case Op::kRem:
          div_cost();
          if (sb == 0)
            result = a;
          else if (sa == std::numeric_limits<int32_t>::min() && sb == -1)
            result = 0;
          else
            result = static_cast<uint32_t>(sa % sb);
          write_rd = true;
          break;
        case Op::kRemu:
          div_cost();
          result = b == 0 ? a : a % b;
          write_rd = true;
          break;
        case Op::kAddi:
          result = a + static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kSlti:
          result = sa < d.imm;
          write_rd = true;
          alu_cost();
          break;
        case Op::kSltiu:
          result = a < static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kXori:
          result = a ^ static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kOri:
          result = a | static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kAndi:
          result = a & static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kSlli:
          result = a << (d.imm & 31);
          write_rd = true;
          shift_cost(d.imm & 31);
          break;
        case Op::kSrli:
          result = a >> (d.imm & 31);
          write_rd = true;
          shift_cost(d.imm & 31);
          break;
        case Op::kSrai:
          result = static_cast<uint32_t>(sa >> (d.imm & 31));
          write_rd = true;
          shift_cost(d.imm & 31);
          break;
        case Op::kLb:
          result = read_mem(a + d.imm, 1, true);
          write_rd = true;
          break;
        case Op::kLbu:
          result = read_mem(a + d.imm, 1, false);
          write_rd = true;
          break;
        case Op::kLh:
          result = read_mem(a + d.imm, 2, true);
          write_rd = true;
          break;
        case Op::kLhu:
          result = read_mem(a + d.imm, 2, false);
          write_rd = true;
          break;
        case Op::kLw:
          result = read_mem(a + d.imm, 4, false);
          write_rd = true;
          break;
        case Op::kSb:
          write_mem(a + d.imm, 1, b);
          break;
        case Op::kSh:
          write_mem(a + d.imm, 2, b);
          break;
        case Op::kSw:
          write_mem(a + d.imm, 4, b);
          break;
        case Op::kBeq: branch_cost(pc + d.imm, a == b); break;
        case Op::kBne: branch_cost(pc + d.imm, a != b); break;
        case Op::kBlt: branch_cost(pc + d.imm, sa < sb); break;
        case Op::kBge: branch_cost(pc + d.imm, sa >= sb); break;
        case Op::kBltu: branch_cost(pc + d.imm, a < b); break;
        case Op::kBgeu: branch_cost(pc + d.imm, a >= b); break;
        case Op::kLui:
          result = static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kAuipc:
          result = pc + static_cast<uint32_t>(d.imm);
          write_rd = true;
          alu_cost();
          break;
        case Op::kJal:
          result = pc + 4;
          write_rd = true;
          next_pc = pc + d.imm;
          alu_cost();
          break;
        case Op::kJalr:
          result = pc + 4;
          write_rd = true;
          next_pc = (a + static_cast<uint32_t>(d.imm)) & ~1u;
          alu_cost();
          break;
        case Op::kEbreak:
          r.halted = true;
          r.stop_pc = pc;
          r.cycles += timing_.alu;
          break;
        case Op::kEcall:
          throw Trap{"ecall"};
        case Op::kFence:
          alu_cost();
          break;
        case Op::kCfu: {
          if (!cfu_) throw Trap{"cfu issue without attached cfu"};
          CfuIssueResult res = cfu_->issue(d.funct3, d.funct7, a, b);
          result = res.value;
          write_rd = true;
          ++r.cfu_issues;
          r.cycles += timing_.cfu_fixed_issue + res.extra_latency;
          break;
        }
        case Op::kUnknown:
          throw Trap{"illegal instruction"};
      }

      if (r.halted) break;
      if (write_rd && d.rd != 0) regs_[d.rd] = result;
      pc_ = next_pc;
    }
    if (!r.halted) {
      r.limit_hit = true;
      r.stop_pc = pc_;
    }
  } catch (const Trap& t) {
    r.trapped = true;
    r.trap_reason = t.reason;
    r.stop_pc = pc_;
  }
  r.icache_hits = icache_.present() ? icache_.hits() - base_icache_hits : 0;
  r.icache_misses =
      icache_.present() ? icache_.misses() - base_icache_misses : 0;
  r.dcache_hits = dcache_.present() ? dcache_.hits() - base_dcache_hits : 0;
  r.dcache_misses =
      dcache_.present() ? dcache_.misses() - base_dcache_misses : 0;
  r.branch_mispredicts = predictor_.mispredicts() - base_mispredicts;
  return r;
}

}  // namespace cfusim
