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

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cfusim/cost.h"
#include "cfusim/iss.h"
#include "cfusim/prng.h"
#include "doctest.h"

using namespace cfusim;

namespace {

CpuConfig plain_config() {
  CpuConfig c;
  c.predictor = Predictor::kNone;
  c.multiplier = Multiplier::kSingleCycle;
  c.divider = Divider::kIterative;
  c.shifter = Shifter::kBarrel;
  return c;
}

RunResult run_asm(const CpuConfig& config, const std::string& body,
                  Machine** out = nullptr) {
  static std::unique_ptr<Machine> live;
  live = std::make_unique<Machine>(config, TimingParams{});
  live->load_program(assemble(".org 0x40000000\n" + body, kSramBase));
  RunResult r = live->run(100000);
  if (out) *out = live.get();
  return r;
}

}  // namespace

TEST_CASE("the four-instruction accumulate sequence leaves 19 in memory") {
  CpuConfig c = plain_config();
  c.cfu = CfuKind::kDemo;
  Machine m(c, TimingParams{});
  // lw a5,8(sp); cfu[0,0] a5,a5,a3; cfu[1,0] a5,a5,a3; sw a5,8(sp)
  m.load_program(
      {kSramBase, {0x00812783, 0x00D7878B, 0x00D7978B, 0x00F12423,
                   0x00100073}});
  m.set_reg(2, kSramBase + 0x100);
  m.set_reg(13, 7);
  uint32_t five = 5;
  m.write_bytes(kSramBase + 0x108, &five, 4);

  RunResult r = m.run();
  REQUIRE(r.halted);
  CHECK(r.instructions == 5);
  CHECK(r.cfu_issues == 2);
  uint32_t word = 0;
  m.read_bytes(kSramBase + 0x108, &word, 4);
  CHECK(word == 19);
  CHECK(m.reg(15) == 19);
}

TEST_CASE("register zero ignores writes") {
  Machine* m = nullptr;
  RunResult r = run_asm(plain_config(),
                        "addi zero, zero, 5\n"
                        "lui zero, 0x12345\n"
                        "add a0, zero, zero\n"
                        "ebreak\n",
                        &m);
  REQUIRE(r.halted);
  CHECK(m->reg(0) == 0);
  CHECK(m->reg(10) == 0);
}

TEST_CASE("multiplier choice changes cycle count by its latency only") {
  std::string body = "mul a0, a1, a2\nebreak\n";
  CpuConfig it = plain_config();
  it.multiplier = Multiplier::kIterative;
  CpuConfig single = plain_config();
  RunResult a = run_asm(it, body);
  RunResult b = run_asm(single, body);
  REQUIRE(a.halted);
  REQUIRE(b.halted);
  CHECK(a.muls == 1);
  CHECK(b.muls == 1);
  CHECK(a.cycles - b.cycles == TimingParams{}.mul_iterative -
                                   TimingParams{}.mul_single);
}

TEST_CASE("wide multiply high halves are signed correctly") {
  CpuConfig c = plain_config();
  Machine machine(c, TimingParams{});
  machine.load_program(assemble(
      ".org 0x40000000\n"
      "mulh a0, a1, a2\n"
      "mulhsu a3, a1, a2\n"
      "mulhu a4, a1, a2\n"
      "ebreak\n",
      kSramBase));
  machine.set_reg(11, 0xFFFFFFFF);  // -1 signed
  machine.set_reg(12, 0xFFFFFFFF);  // 2^32-1 unsigned
  RunResult r = machine.run();
  REQUIRE(r.halted);
  CHECK(machine.reg(10) == 0);           // (-1)*(-1) >> 32
  CHECK(machine.reg(13) == 0xFFFFFFFF);  // (-1)*(2^32-1) >> 32
  CHECK(machine.reg(14) == 0xFFFFFFFE);  // (2^32-1)^2 >> 32
}

TEST_CASE("division edge cases follow the architectural contract") {
  CpuConfig c = plain_config();
  Machine machine(c, TimingParams{});
  machine.load_program(assemble(
      ".org 0x40000000\n"
      "div a0, a1, zero\n"   // x/0 = -1
      "rem a3, a1, zero\n"   // x%0 = x
      "div a4, a5, a6\n"     // INT_MIN / -1 = INT_MIN
      "rem a7, a5, a6\n"     // INT_MIN % -1 = 0
      "ebreak\n",
      kSramBase));
  machine.set_reg(11, 1234);
  machine.set_reg(15, 0x80000000);
  machine.set_reg(16, 0xFFFFFFFF);
  RunResult r = machine.run();
  REQUIRE(r.halted);
  CHECK(machine.reg(10) == 0xFFFFFFFF);
  CHECK(machine.reg(13) == 1234);
  CHECK(machine.reg(14) == 0x80000000);
  CHECK(machine.reg(17) == 0);
  CHECK(r.divs == 4);
}

TEST_CASE("subword loads sign- and zero-extend") {
  CpuConfig c = plain_config();
  Machine m(c, TimingParams{});
  m.load_program(assemble(
      ".org 0x40000000\n"
      "lb a0, 0(sp)\n"
      "lbu a1, 0(sp)\n"
      "lh a2, 0(sp)\n"
      "lhu a3, 0(sp)\n"
      "ebreak\n",
      kSramBase));
  m.set_reg(2, kSramBase + 0x200);
  uint8_t bytes[2] = {0x80, 0xFF};
  m.write_bytes(kSramBase + 0x200, bytes, 2);
  RunResult r = m.run();
  REQUIRE(r.halted);
  CHECK(m.reg(10) == 0xFFFFFF80);
  CHECK(m.reg(11) == 0x80);
  CHECK(m.reg(12) == 0xFFFFFF80);
  CHECK(m.reg(13) == 0xFF80);
}

TEST_CASE("traps carry a precise reason") {
  CpuConfig c = plain_config();

  SUBCASE("unaligned fetch") {
    Machine m(c, TimingParams{});
    m.set_pc(kSramBase + 2);
    RunResult r = m.run();
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "unaligned fetch");
  }
  SUBCASE("unmapped fetch") {
    Machine m(c, TimingParams{});
    m.set_pc(0x80000000);
    RunResult r = m.run();
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "unmapped fetch");
  }
  SUBCASE("fetch at the top of the address space does not wrap") {
    Machine m(c, TimingParams{});
    m.set_pc(0xFFFFFFFC);
    RunResult r = m.run();
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "unmapped fetch");
  }
  SUBCASE("store to flash") {
    RunResult r = run_asm(c, "li a1, 0x100\nsw a0, 0(a1)\nebreak\n");
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "store to flash");
  }
  SUBCASE("unaligned load") {
    Machine m(c, TimingParams{});
    m.load_program(
        assemble(".org 0x40000000\nlw a0, 2(sp)\nebreak\n", kSramBase));
    m.set_reg(2, kSramBase + 0x100);
    RunResult r = m.run();
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "unaligned load");
  }
  SUBCASE("divide without a divider") {
    CpuConfig nd = plain_config();
    nd.divider = Divider::kNone;
    RunResult r = run_asm(nd, "div a0, a1, a2\nebreak\n");
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "divide without divider");
  }
  SUBCASE("illegal instruction") {
    RunResult r = run_asm(c, ".word 0x00000000\nebreak\n");
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "illegal instruction");
  }
  SUBCASE("cfu issue with no unit attached") {
    RunResult r = run_asm(c, "cfu[0,0] a0, a0, a1\nebreak\n");
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "cfu issue without attached cfu");
  }
  SUBCASE("ecall") {
    RunResult r = run_asm(c, "ecall\n");
    REQUIRE(r.trapped);
    CHECK(r.trap_reason == "ecall");
  }
}

TEST_CASE("the instruction limit stops a runaway program distinctly") {
  RunResult r = run_asm(plain_config(), "loop:\nj loop\n");
  CHECK(r.limit_hit);
  CHECK_FALSE(r.halted);
  CHECK_FALSE(r.trapped);
}

TEST_CASE("a countdown loop pays the predictor penalty per taken branch") {
  CpuConfig c = plain_config();  // predictor none
  RunResult r = run_asm(c,
                        "li t0, 10\n"
                        "loop:\n"
                        "addi t0, t0, -1\n"
                        "bne t0, zero, loop\n"
                        "ebreak\n");
  REQUIRE(r.halted);
  CHECK(r.branches == 10);
  CHECK(r.branch_mispredicts == 9);  // nine taken, final fall-through free
}

TEST_CASE("setup memory access rejects out-of-map ranges") {
  Machine m(plain_config(), TimingParams{});
  uint32_t v = 0;
  CHECK_THROWS_AS(m.write_bytes(0x20000000, &v, 4), std::out_of_range);
  CHECK_THROWS_AS(m.read_bytes(0xFFFFFFFC, &v, 4), std::out_of_range);
  CHECK_NOTHROW(m.write_bytes(0, &v, 4));  // flash is writable at setup time
}

TEST_CASE("cache hits repeat and thrash under conflict") {
  CacheSim c(1024, 32, 2);  // 16 sets
  CHECK_FALSE(c.access(0x1000, false));
  CHECK(c.access(0x1000, false));
  CHECK(c.access(0x1010, false));  // same line
  CHECK(c.hits() == 2);
  CHECK(c.misses() == 1);

  c.reset();
  CHECK(c.hits() == 0);
  // Three distinct tags into one 2-way set always miss under LRU.
  uint32_t stride = 16 * 32;
  for (int round = 0; round < 4; ++round)
    for (uint32_t k = 0; k < 3; ++k) CHECK_FALSE(c.access(k * stride, false));
}

TEST_CASE("adding ways with the set count fixed never adds misses") {
  Prng64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    CacheSim narrow(1024, 32, 2);  // 16 sets, 2 ways
    CacheSim wide(2048, 32, 4);    // 16 sets, 4 ways
    for (int i = 0; i < 2000; ++i) {
      uint32_t addr = static_cast<uint32_t>(rng.next_below(1 << 14));
      bool is_write = rng.next_below(4) == 0;
      narrow.access(addr, is_write);
      wide.access(addr, is_write);
    }
    CHECK(wide.misses() <= narrow.misses());
  }
}

TEST_CASE("predictor penalties per kind") {
  const uint32_t kPen = 3;
  SUBCASE("none charges every taken branch") {
    PredictorSim p(Predictor::kNone, kPen);
    CHECK(p.on_branch(0x100, 0x80, true) == kPen);
    CHECK(p.on_branch(0x100, 0x80, false) == 0);
    CHECK(p.mispredicts() == 1);
  }
  SUBCASE("static predicts backward taken") {
    PredictorSim p(Predictor::kStatic, kPen);
    CHECK(p.on_branch(0x100, 0x80, true) == 0);    // backward taken
    CHECK(p.on_branch(0x100, 0x80, false) == kPen);
    CHECK(p.on_branch(0x100, 0x200, true) == kPen);  // forward taken
    CHECK(p.on_branch(0x100, 0x200, false) == 0);
  }
  SUBCASE("dynamic mispredicts an alternating branch every time") {
    PredictorSim p(Predictor::kDynamic, kPen);
    for (int i = 0; i < 32; ++i) {
      CHECK(p.on_branch(0x100, 0x80, (i & 1) == 0) == kPen);
    }
    CHECK(p.mispredicts() == 32);
  }
  SUBCASE("dynamic converges on a loop but still pays the redirect") {
    PredictorSim p(Predictor::kDynamic, kPen);
    CHECK(p.on_branch(0x100, 0x80, true) == kPen);  // warmup
    for (int i = 0; i < 16; ++i) CHECK(p.on_branch(0x100, 0x80, true) == 1);
  }
  SUBCASE("target buffer removes the redirect for a stable target") {
    PredictorSim p(Predictor::kDynamicTarget, kPen);
    CHECK(p.on_branch(0x100, 0x80, true) == kPen);  // warmup, fills buffer
    for (int i = 0; i < 16; ++i) CHECK(p.on_branch(0x100, 0x80, true) == 0);
    // Same direction, new target: direction right, redirect needed once.
    CHECK(p.on_branch(0x100, 0x90, true) == 1);
    CHECK(p.on_branch(0x100, 0x90, true) == 0);
  }
}

TEST_CASE("trace costing prices an empty stream at zero") {
  TraceCoster tc(plain_config(), TimingParams{});
  CycleReport r = tc.report();
  CHECK(r.total_cycles == 0);
  CHECK(r.instructions == 0);
  CHECK(r.regions.empty());
}

TEST_CASE("trace costing separates multiplier latencies exactly") {
  CpuConfig it = plain_config();
  it.multiplier = Multiplier::kIterative;
  CpuConfig single = plain_config();
  TraceCoster a(it, TimingParams{});
  TraceCoster b(single, TimingParams{});
  for (int i = 0; i < 10; ++i) {
    a.on_event(TraceEvent::mul());
    b.on_event(TraceEvent::mul());
  }
  CHECK(a.report().total_cycles - b.report().total_cycles == 290);
  CHECK(a.report().muls == 10);
}

TEST_CASE("quad flash transfers never price a stream slower than single") {
  Prng64 rng(31);
  CpuConfig spi = plain_config();
  spi.flash = FlashMode::kSpi;
  CpuConfig quad = plain_config();
  quad.flash = FlashMode::kQuadSpi;
  TraceCoster a(spi, TimingParams{});
  TraceCoster b(quad, TimingParams{});
  for (int i = 0; i < 500; ++i) {
    MemRegion region =
        rng.next_below(3) == 0 ? MemRegion::kFlash : MemRegion::kSram;
    uint32_t addr = static_cast<uint32_t>(rng.next_below(1 << 16));
    TraceEvent e = rng.next_below(2) ? TraceEvent::load(addr, 4, region)
                                     : TraceEvent::store(addr, 4, region);
    if (region == MemRegion::kFlash && e.kind == EventKind::kStore)
      e = TraceEvent::load(addr, 4, region);
    a.on_event(e);
    b.on_event(e);
  }
  CHECK(b.report().total_cycles <= a.report().total_cycles);
}

TEST_CASE("region accounting attributes cycles to the innermost region") {
  TraceCoster tc(plain_config(), TimingParams{});
  tc.on_event(TraceEvent::region_begin("outer"));
  tc.on_event(TraceEvent::alu(2));
  tc.on_event(TraceEvent::region_begin("inner"));
  tc.on_event(TraceEvent::alu(5));
  tc.on_event(TraceEvent::region_end("inner"));
  tc.on_event(TraceEvent::alu(1));
  tc.on_event(TraceEvent::region_end("outer"));
  CycleReport r = tc.report();
  REQUIRE(r.regions.size() == 2);
  CHECK(r.regions[0].name == "outer");
  CHECK(r.regions[0].cycles == 3);
  CHECK(r.regions[0].invocations == 1);
  CHECK(r.regions[1].name == "inner");
  CHECK(r.regions[1].cycles == 5);
  CHECK(r.total_cycles == 8);
}

TEST_CASE("a region end without a begin is rejected") {
  TraceCoster tc(plain_config(), TimingParams{});
  CHECK_THROWS_AS(tc.on_event(TraceEvent::region_end("x")),
                  std::logic_error);
}

TEST_CASE("instruction-side refill model") {
  TimingParams t;
  KernelMeta meta{8192, Placement::kSram};
  CpuConfig big = plain_config();
  big.icache_bytes = 8192;
  SUBCASE("a fitting kernel pays cold fills only") {
    // 8192/32 = 256 lines at 10 cycles each.
    CHECK(ifetch_cycles(big, t, meta, 1000000) == 2560);
  }
  SUBCASE("shrinking the cache adds capacity refills monotonically") {
    uint64_t prev = ifetch_cycles(big, t, meta, 1000000);
    for (uint32_t bytes : {4096u, 2048u, 1024u}) {
      CpuConfig c = plain_config();
      c.icache_bytes = bytes;
      uint64_t now = ifetch_cycles(c, t, meta, 1000000);
      CHECK(now >= prev);
      prev = now;
    }
  }
  SUBCASE("flash-resident code pays word transfers per fill") {
    KernelMeta fm{8192, Placement::kFlash};
    CpuConfig c = plain_config();
    c.icache_bytes = 8192;
    c.flash = FlashMode::kQuadSpi;
    // 256 cold fills, 8 words per line at 16 cycles per word.
    CHECK(ifetch_cycles(c, t, fm, 1000000) == 256 * 8 * 16);
  }
  SUBCASE("no code or no instructions prices to zero") {
    CHECK(ifetch_cycles(big, t, KernelMeta{0, Placement::kSram}, 100) == 0);
    CHECK(ifetch_cycles(big, t, meta, 0) == 0);
  }
}

TEST_CASE("icache counters reflect line reuse in straight-line code") {
  CpuConfig c = plain_config();
  RunResult r = run_asm(c,
                        "addi a0, zero, 1\n"
                        "addi a0, a0, 1\n"
                        "addi a0, a0, 1\n"
                        "addi a0, a0, 1\n"
                        "addi a0, a0, 1\n"
                        "addi a0, a0, 1\n"
                        "addi a0, a0, 1\n"
                        "ebreak\n");
  REQUIRE(r.halted);
  // Eight words in one 32-byte line: one miss, seven hits.
  CHECK(r.icache_misses == 1);
  CHECK(r.icache_hits == 7);
}
