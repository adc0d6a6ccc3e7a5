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

#ifndef CFUSIM_TRACE_H_
#define CFUSIM_TRACE_H_

#include <cstdint>
#include <vector>

namespace cfusim {

enum class MemRegion : uint8_t { kFlash, kSram };

enum class EventKind : uint8_t {
  kLoad,
  kStore,
  kMul,
  kDiv,
  kShift,
  kAlu,
  kBranch,
  kCfuIssue,
  kRegionBegin,
  kRegionEnd,
};

// One dynamic micro-event emitted by an instrumented kernel. The trace is
// the timing-model input; the matching architectural work happens in the
// kernel itself, so a trace stream plus a config prices a run without
// re-executing instructions one by one.
struct TraceEvent {
  EventKind kind;
  MemRegion region = MemRegion::kSram;  // Load/Store.
  bool taken = false;                   // Branch.
  uint8_t funct3 = 0;                   // CfuIssue.
  uint8_t funct7 = 0;                   // CfuIssue.
  uint16_t size = 0;                    // Load/Store bytes.
  uint32_t a = 0;  // Load/Store/Branch: address. Shift: amount. Alu: count.
  uint32_t b = 0;  // Branch: target. CfuIssue: extra_latency.
  // RegionBegin/RegionEnd. Borrowed from the emitter; valid only for the
  // duration of on_event, so retaining sinks must copy it.
  const char* name = nullptr;

  static TraceEvent load(uint32_t addr, uint16_t bytes, MemRegion r) {
    TraceEvent e{EventKind::kLoad};
    e.addr_init(addr, bytes, r);
    return e;
  }
  static TraceEvent store(uint32_t addr, uint16_t bytes, MemRegion r) {
    TraceEvent e{EventKind::kStore};
    e.addr_init(addr, bytes, r);
    return e;
  }
  static TraceEvent mul() { return TraceEvent{EventKind::kMul}; }
  static TraceEvent div() { return TraceEvent{EventKind::kDiv}; }
  static TraceEvent shift(uint32_t amount) {
    TraceEvent e{EventKind::kShift};
    e.a = amount;
    return e;
  }
  static TraceEvent alu(uint32_t count) {
    TraceEvent e{EventKind::kAlu};
    e.a = count;
    return e;
  }
  static TraceEvent branch(uint32_t pc, uint32_t target, bool is_taken) {
    TraceEvent e{EventKind::kBranch};
    e.a = pc;
    e.b = target;
    e.taken = is_taken;
    return e;
  }
  static TraceEvent cfu_issue(uint8_t f3, uint8_t f7, uint32_t extra) {
    TraceEvent e{EventKind::kCfuIssue};
    e.funct3 = f3;
    e.funct7 = f7;
    e.b = extra;
    return e;
  }
  static TraceEvent region_begin(const char* n) {
    TraceEvent e{EventKind::kRegionBegin};
    e.name = n;
    return e;
  }
  static TraceEvent region_end(const char* n) {
    TraceEvent e{EventKind::kRegionEnd};
    e.name = n;
    return e;
  }

 private:
  void addr_init(uint32_t addr, uint16_t bytes, MemRegion r) {
    a = addr;
    size = bytes;
    region = r;
  }
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_event(const TraceEvent& e) = 0;
};

class VectorSink : public TraceSink {
 public:
  void on_event(const TraceEvent& e) override { events.push_back(e); }
  std::vector<TraceEvent> events;
};

}  // namespace cfusim

#endif  // CFUSIM_TRACE_H_
