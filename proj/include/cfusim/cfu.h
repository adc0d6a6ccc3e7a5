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
// Behavioral models of the custom function units. A model owns all
// architectural state behind the custom-0 opcode; issue() is total and never
// throws. Faults (bad sub-op, out-of-range access, sequencing errors) return
// value 0 and latch a sticky error readable through the unit's status group.

#ifndef CFUSIM_CFU_H_
#define CFUSIM_CFU_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "cfusim/config.h"

namespace cfusim {

struct ResourceCost {
  uint32_t luts = 0;
  uint32_t dsps = 0;
  uint32_t bram_bytes = 0;
};

struct CfuIssueResult {
  uint32_t value = 0;
  // Stall cycles beyond the fixed issue cost charged by the timing model.
  uint32_t extra_latency = 0;
};

class CfuModel {
 public:
  virtual ~CfuModel() = default;
  virtual const char* name() const = 0;
  virtual ResourceCost resources() const = 0;
  virtual CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                               uint32_t rs2) = 0;
  virtual void reset() = 0;
};

// Feature classes a kernel variant may require from the attached unit.
enum class CfuCap : uint8_t {
  kPostproc = 0,  // per-channel requantize/clamp pipeline
  kMac4 = 1,      // packed 4-lane multiply-accumulate
  kMac1 = 2,      // single-lane multiply-accumulate
  kSession = 3,   // on-unit filter/input scratch memories and run engine
  kOverlap = 4,   // pipelined run engine overlapping compute with drain
};

uint32_t cfu_capabilities(CfuKind kind);

inline bool has_cap(uint32_t mask, CfuCap cap) {
  return (mask >> static_cast<uint32_t>(cap)) & 1u;
}

inline uint32_t cap_bit(CfuCap cap) { return 1u << static_cast<uint32_t>(cap); }

// Primary models. Returns null for CfuKind::kNone.
std::unique_ptr<CfuModel> make_cfu(CfuKind kind);

// Independently written second implementations used for cross-checking.
std::unique_ptr<CfuModel> make_cfu_twin(CfuKind kind);

struct IssueRecord {
  uint32_t funct3 = 0;
  uint32_t funct7 = 0;
  uint32_t rs1 = 0;
  uint32_t rs2 = 0;
};

// Deterministic mixed stream for a unit: mostly well-formed op sequences with
// a sprinkling of malformed ones so error latching is exercised too.
std::vector<IssueRecord> random_issue_stream(CfuKind kind, uint64_t seed,
                                             size_t count);

// Replays the stream through both models after resetting them. Returns the
// index of the first result-value divergence, or -1 when they agree
// throughout. Latency is not compared; it is a cost-model attribute.
int64_t check_equivalence(CfuModel& a, CfuModel& b,
                          const std::vector<IssueRecord>& stream);

// Packed little-endian int8 lane helpers shared by models and emitters.
inline int8_t lane8(uint32_t word, uint32_t i) {
  return static_cast<int8_t>(word >> (8 * i));
}

inline uint32_t pack4(int8_t b0, int8_t b1, int8_t b2, int8_t b3) {
  return (static_cast<uint32_t>(static_cast<uint8_t>(b3)) << 24) |
         (static_cast<uint32_t>(static_cast<uint8_t>(b2)) << 16) |
         (static_cast<uint32_t>(static_cast<uint8_t>(b1)) << 8) |
         static_cast<uint32_t>(static_cast<uint8_t>(b0));
}

inline uint32_t sext8(int32_t v) {
  return static_cast<uint32_t>(static_cast<int32_t>(static_cast<int8_t>(v)));
}

inline uint32_t pack_activation(int32_t act_min, int32_t act_max) {
  return (static_cast<uint32_t>(static_cast<uint16_t>(act_max)) << 16) |
         static_cast<uint32_t>(static_cast<uint16_t>(act_min));
}

// Sub-op numbering. funct3 selects a group, funct7 an operation inside it.

namespace demo_op {
// Group is ignored; funct7 alone selects the operation.
inline constexpr uint32_t kAdd = 0;
inline constexpr uint32_t kPopcount = 1;
inline constexpr uint32_t kBitReverse = 2;
inline constexpr uint32_t kSimdAdd = 3;
}  // namespace demo_op

namespace pp_op {
inline constexpr uint32_t kParams = 0;   // funct3
inline constexpr uint32_t kProcess = 1;  // funct3, rs1 = raw accumulator
inline constexpr uint32_t kStatus = 2;   // funct3
// params funct7
inline constexpr uint32_t kBias = 0;
inline constexpr uint32_t kMult = 1;
inline constexpr uint32_t kShift = 2;
inline constexpr uint32_t kOutputParams = 3;  // rs1 offset, rs2 packed min/max
inline constexpr uint32_t kResetParams = 4;
// status funct7
inline constexpr uint32_t kErrRead = 0;
inline constexpr uint32_t kErrClear = 1;
}  // namespace pp_op

namespace mac4_op {
inline constexpr uint32_t kCtrl = 0;  // funct3
inline constexpr uint32_t kMac = 1;   // funct3
// ctrl funct7
inline constexpr uint32_t kSetOffset = 0;
inline constexpr uint32_t kResetAcc = 1;  // returns the previous accumulator
inline constexpr uint32_t kReadAcc = 2;
// mac funct7
inline constexpr uint32_t kMac4 = 0;
}  // namespace mac4_op

namespace cfu1_op {
// funct3 groups
inline constexpr uint32_t kCtrl = 0;
inline constexpr uint32_t kParams = 1;  // funct7 as pp_op params
inline constexpr uint32_t kFilter = 2;
inline constexpr uint32_t kInput = 3;
inline constexpr uint32_t kAcc = 4;
inline constexpr uint32_t kRun = 5;
inline constexpr uint32_t kStatus = 6;  // funct7 as pp_op status
// ctrl funct7
inline constexpr uint32_t kSetDims = 0;  // rs1 depth, rs2 output channels
inline constexpr uint32_t kSetInputOffset = 1;
inline constexpr uint32_t kResetAll = 2;
inline constexpr uint32_t kResetInputWrite = 3;
inline constexpr uint32_t kResetAcc = 4;  // returns the previous accumulator
inline constexpr uint32_t kReadAcc = 5;
inline constexpr uint32_t kResetChan = 6;
// filter funct7
inline constexpr uint32_t kFiltWrite = 0;  // auto-incrementing index
inline constexpr uint32_t kFiltRead = 1;   // rs1 = word index
inline constexpr uint32_t kFiltResetIdx = 2;
// input funct7
inline constexpr uint32_t kInpWrite = 0;  // auto-incrementing index
inline constexpr uint32_t kInpRead = 1;   // rs1 = word index
// acc funct7
inline constexpr uint32_t kMac4 = 0;     // rs1 inputs, rs2 filters
inline constexpr uint32_t kProcess = 1;  // rs1 raw acc, advances channel
// run funct7
inline constexpr uint32_t kRunOne = 0;    // raw acc for current channel
inline constexpr uint32_t kRunOnePp = 1;  // postprocessed, advances channel
inline constexpr uint32_t kRun4Pp = 2;    // four channels into output queue
inline constexpr uint32_t kDrain = 3;     // pops one packed word
inline constexpr uint32_t kRun4PpOv = 4;  // as kRun4Pp, overlapped engine
}  // namespace cfu1_op

namespace cfu2_op {
// funct3 groups
inline constexpr uint32_t kCtrl = 0;
inline constexpr uint32_t kMac = 1;
inline constexpr uint32_t kParams = 2;      // funct7 as pp_op params
inline constexpr uint32_t kProcessAcc = 3;  // internal accumulator
inline constexpr uint32_t kStatus = 4;      // funct7 as pp_op status
// ctrl funct7
inline constexpr uint32_t kSetInputOffset = 0;
inline constexpr uint32_t kResetAcc = 1;  // returns the previous accumulator
inline constexpr uint32_t kReadAcc = 2;
inline constexpr uint32_t kResetAll = 3;
// mac funct7
inline constexpr uint32_t kMac4 = 0;
inline constexpr uint32_t kMac1 = 1;  // low lane of rs1 and rs2
}  // namespace cfu2_op

}  // namespace cfusim

#endif  // CFUSIM_CFU_H_
