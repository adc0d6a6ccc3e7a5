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
// Streaming accumulate unit: packed and single-lane multiply-accumulate into
// one internal accumulator, plus a per-channel postprocess of that
// accumulator. No on-unit vector storage; the CPU streams operands.

#include <cstdint>

#include "cfu_internal.h"
#include "cfusim/cfu.h"

namespace cfusim {
namespace {

class Cfu2 final : public CfuModel {
 public:
  static constexpr uint32_t kMaxChannels = 64;

  const char* name() const override { return "cfu2"; }
  ResourceCost resources() const override { return {500, 4, 0}; }

  void reset() override {
    acc_ = 0;
    input_offset_ = 0;
    cursor_ = 0;
    bank_.reset();
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    switch (funct3) {
      case cfu2_op::kCtrl:
        switch (funct7) {
          case cfu2_op::kSetInputOffset:
            input_offset_ = static_cast<int32_t>(rs1);
            return {0, 0};
          case cfu2_op::kResetAcc: {
            uint32_t old = static_cast<uint32_t>(acc_);
            acc_ = 0;
            return {old, 0};
          }
          case cfu2_op::kReadAcc:
            return {static_cast<uint32_t>(acc_), 0};
          case cfu2_op::kResetAll:
            reset();
            return {0, 0};
          default:
            return fault();
        }
      case cfu2_op::kMac:
        if (funct7 == cfu2_op::kMac4) {
          acc_ = static_cast<int32_t>(
              static_cast<uint32_t>(acc_) +
              static_cast<uint32_t>(dot4_lanes(rs1, rs2, input_offset_)));
          return {static_cast<uint32_t>(acc_), 0};
        }
        if (funct7 == cfu2_op::kMac1) {
          int64_t prod =
              (static_cast<int64_t>(lane8(rs1, 0)) + input_offset_) *
              lane8(rs2, 0);
          acc_ = static_cast<int32_t>(static_cast<uint32_t>(acc_) +
                                      wrap32(prod));
          return {static_cast<uint32_t>(acc_), 0};
        }
        return fault();
      case cfu2_op::kParams: {
        uint32_t v = bank_.handle_param(funct7, rs1, rs2, &error_);
        if (funct7 == pp_op::kResetParams) cursor_ = 0;
        return {v, 0};
      }
      case cfu2_op::kProcessAcc: {
        if (funct7 != 0 || !bank_.ready()) return fault();
        int32_t v = bank_.process_at(acc_, cursor_);
        cursor_ = (cursor_ + 1) % bank_.count();
        return {sext8(v), kProcessLatency};
      }
      case cfu2_op::kStatus:
        if (funct7 == pp_op::kErrRead) return {error_ ? 1u : 0u, 0};
        if (funct7 == pp_op::kErrClear) {
          error_ = false;
          return {0, 0};
        }
        return fault();
      default:
        return fault();
    }
  }

 private:
  CfuIssueResult fault() {
    error_ = true;
    return {0, 0};
  }

  static constexpr uint32_t kProcessLatency = 2;

  int32_t acc_ = 0;
  int32_t input_offset_ = 0;
  uint32_t cursor_ = 0;
  PostprocBank bank_{kMaxChannels};
  bool error_ = false;
};

}  // namespace

std::unique_ptr<CfuModel> make_cfu2() { return std::make_unique<Cfu2>(); }

}  // namespace cfusim
