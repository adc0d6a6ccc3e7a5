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

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cfusim/cfu.h"

namespace cfusim {

// Per-channel requantization parameter bank shared by the units that carry a
// postprocessing pipeline. Callers own cursor policy; process_at() does not
// advance anything.
class PostprocBank {
 public:
  explicit PostprocBank(uint32_t capacity) : capacity_(capacity) {}

  // Handles a pp_op::kParams sub-op. Returns the result value; *error is set
  // on capacity overflow or unknown funct7.
  uint32_t handle_param(uint32_t funct7, uint32_t rs1, uint32_t rs2,
                        bool* error);

  bool ready() const {
    return !bias_.empty() && bias_.size() == mult_.size() &&
           bias_.size() == shift_.size();
  }
  uint32_t count() const { return static_cast<uint32_t>(bias_.size()); }

  // Requantize, offset, clamp for the given channel. Caller checks ready()
  // and channel < count().
  int32_t process_at(int32_t acc, uint32_t channel) const;

  void reset() {
    bias_.clear();
    mult_.clear();
    shift_.clear();
    output_offset_ = 0;
    act_min_ = -128;
    act_max_ = 127;
  }

 private:
  uint32_t capacity_;
  std::vector<int32_t> bias_, mult_, shift_;
  int32_t output_offset_ = 0;
  int32_t act_min_ = -128;
  int32_t act_max_ = 127;
};

// Low 32 bits of a signed product, as a two's-complement wrap-around adder
// input. Keeps extreme operand combinations well defined.
inline uint32_t wrap32(int64_t v) {
  return static_cast<uint32_t>(static_cast<uint64_t>(v));
}

// Offset-adjusted packed dot product over the four int8 lanes of each word.
// Accumulates with 32-bit wrap-around semantics.
inline int32_t dot4_lanes(uint32_t inputs, uint32_t filters,
                          int32_t input_offset) {
  uint32_t acc = 0;
  for (uint32_t i = 0; i < 4; ++i) {
    int64_t prod = (static_cast<int64_t>(lane8(inputs, i)) + input_offset) *
                   lane8(filters, i);
    acc += wrap32(prod);
  }
  return static_cast<int32_t>(acc);
}

std::unique_ptr<CfuModel> make_cfu1();
std::unique_ptr<CfuModel> make_cfu2();

std::unique_ptr<CfuModel> make_demo_twin();
std::unique_ptr<CfuModel> make_postproc_twin();
std::unique_ptr<CfuModel> make_mac4_twin();
std::unique_ptr<CfuModel> make_cfu1_twin();
std::unique_ptr<CfuModel> make_cfu2_twin();

}  // namespace cfusim
