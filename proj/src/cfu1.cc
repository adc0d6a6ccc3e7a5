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
// Session unit: holds packed filter and input vectors in on-unit scratch
// memories and computes whole output channels per issue. Works on flattened
// 1x1 convolution columns: depth d elements per channel, o output channels.

#include <array>
#include <cstdint>
#include <deque>

#include "cfu_internal.h"
#include "cfusim/cfu.h"

namespace cfusim {
namespace {

class Cfu1 final : public CfuModel {
 public:
  static constexpr uint32_t kMaxDepth = 256;
  static constexpr uint32_t kMaxChannels = 256;
  static constexpr uint32_t kFilterWords = 512;
  static constexpr uint32_t kInputWords = 64;
  static constexpr uint32_t kQueueWords = 8;

  const char* name() const override { return "cfu1"; }
  ResourceCost resources() const override {
    return {1200, 8, kFilterWords * 4};
  }

  void reset() override {
    depth_ = 0;
    chans_ = 0;
    groups_ = 0;
    input_offset_ = 0;
    filt_n_ = 0;
    inp_n_ = 0;
    acc_ = 0;
    chan_ = 0;
    queue_.clear();
    bank_.reset();
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    switch (funct3) {
      case cfu1_op::kCtrl:
        return ctrl(funct7, rs1, rs2);
      case cfu1_op::kParams:
        return {bank_.handle_param(funct7, rs1, rs2, &error_), 0};
      case cfu1_op::kFilter:
        return filter(funct7, rs1);
      case cfu1_op::kInput:
        return input(funct7, rs1);
      case cfu1_op::kAcc:
        return acc(funct7, rs1, rs2);
      case cfu1_op::kRun:
        return run(funct7);
      case cfu1_op::kStatus:
        if (funct7 == pp_op::kErrRead) return {error_ ? 1u : 0u, 0};
        if (funct7 == pp_op::kErrClear) {
          error_ = false;
          return {0, 0};
        }
        break;
      default:
        break;
    }
    return fault();
  }

 private:
  CfuIssueResult fault() {
    error_ = true;
    return {0, 0};
  }

  CfuIssueResult ctrl(uint32_t funct7, uint32_t rs1, uint32_t rs2) {
    switch (funct7) {
      case cfu1_op::kSetDims: {
        uint32_t d = rs1, o = rs2;
        uint32_t g = (d + 3) / 4;
        if (d < 1 || d > kMaxDepth || o < 1 || o > kMaxChannels ||
            o * g > kFilterWords)
          return fault();
        depth_ = d;
        chans_ = o;
        groups_ = g;
        filt_n_ = 0;
        inp_n_ = 0;
        acc_ = 0;
        chan_ = 0;
        queue_.clear();
        bank_.reset();
        return {0, 0};
      }
      case cfu1_op::kSetInputOffset:
        input_offset_ = static_cast<int32_t>(rs1);
        return {0, 0};
      case cfu1_op::kResetAll:
        reset();
        return {0, 0};
      case cfu1_op::kResetInputWrite:
        inp_n_ = 0;
        return {0, 0};
      case cfu1_op::kResetAcc: {
        uint32_t old = static_cast<uint32_t>(acc_);
        acc_ = 0;
        return {old, 0};
      }
      case cfu1_op::kReadAcc:
        return {static_cast<uint32_t>(acc_), 0};
      case cfu1_op::kResetChan:
        chan_ = 0;
        return {0, 0};
      default:
        return fault();
    }
  }

  CfuIssueResult filter(uint32_t funct7, uint32_t rs1) {
    switch (funct7) {
      case cfu1_op::kFiltWrite:
        if (depth_ == 0 || filt_n_ >= chans_ * groups_) return fault();
        filt_[filt_n_] = rs1;
        return {filt_n_++, 0};
      case cfu1_op::kFiltRead:
        if (rs1 >= filt_n_) return fault();
        return {filt_[rs1], 0};
      case cfu1_op::kFiltResetIdx:
        filt_n_ = 0;
        return {0, 0};
      default:
        return fault();
    }
  }

  CfuIssueResult input(uint32_t funct7, uint32_t rs1) {
    switch (funct7) {
      case cfu1_op::kInpWrite:
        if (depth_ == 0 || inp_n_ >= groups_) return fault();
        inp_[inp_n_] = rs1;
        return {inp_n_++, 0};
      case cfu1_op::kInpRead:
        if (rs1 >= inp_n_) return fault();
        return {inp_[rs1], 0};
      default:
        return fault();
    }
  }

  CfuIssueResult acc(uint32_t funct7, uint32_t rs1, uint32_t rs2) {
    switch (funct7) {
      case cfu1_op::kMac4:
        acc_ = static_cast<int32_t>(
            static_cast<uint32_t>(acc_) +
            static_cast<uint32_t>(dot4_lanes(rs1, rs2, input_offset_)));
        return {static_cast<uint32_t>(acc_), 0};
      case cfu1_op::kProcess: {
        if (chans_ == 0 || !postproc_ready()) return fault();
        int32_t v = bank_.process_at(static_cast<int32_t>(rs1), chan_);
        chan_ = (chan_ + 1) % chans_;
        return {sext8(v), kProcessLatency};
      }
      default:
        return fault();
    }
  }

  bool postproc_ready() const {
    return bank_.ready() && bank_.count() >= chans_;
  }

  bool engine_ready() const {
    return depth_ > 0 && filt_n_ >= chans_ * groups_ && inp_n_ >= groups_;
  }

  int32_t run_channel(uint32_t c) const {
    uint32_t sum = 0;
    for (uint32_t w = 0; w < groups_; ++w) {
      uint32_t fw = filt_[c * groups_ + w];
      uint32_t iw = inp_[w];
      for (uint32_t l = 0; l < 4; ++l) {
        if (w * 4 + l >= depth_) break;
        int64_t prod = (static_cast<int64_t>(lane8(iw, l)) + input_offset_) *
                       lane8(fw, l);
        sum += wrap32(prod);
      }
    }
    return static_cast<int32_t>(sum);
  }

  CfuIssueResult run(uint32_t funct7) {
    switch (funct7) {
      case cfu1_op::kRunOne:
        if (!engine_ready()) return fault();
        return {static_cast<uint32_t>(run_channel(chan_)), groups_};
      case cfu1_op::kRunOnePp: {
        if (!engine_ready() || !postproc_ready()) return fault();
        int32_t v = bank_.process_at(run_channel(chan_), chan_);
        chan_ = (chan_ + 1) % chans_;
        return {sext8(v), groups_ + kProcessLatency};
      }
      case cfu1_op::kRun4Pp:
      case cfu1_op::kRun4PpOv: {
        if (!engine_ready() || !postproc_ready() ||
            queue_.size() >= kQueueWords)
          return fault();
        int8_t b[4];
        for (uint32_t i = 0; i < 4; ++i) {
          uint32_t c = (chan_ + i) % chans_;
          b[i] = static_cast<int8_t>(bank_.process_at(run_channel(c), c));
        }
        chan_ = (chan_ + 4) % chans_;
        queue_.push_back(pack4(b[0], b[1], b[2], b[3]));
        uint32_t batch = 4 * groups_;
        if (funct7 == cfu1_op::kRun4PpOv) batch = (batch + 1) / 2;
        return {static_cast<uint32_t>(queue_.size()),
                batch + kProcessLatency};
      }
      case cfu1_op::kDrain: {
        if (queue_.empty()) return fault();
        uint32_t w = queue_.front();
        queue_.pop_front();
        return {w, 0};
      }
      default:
        return fault();
    }
  }

  static constexpr uint32_t kProcessLatency = 2;

  uint32_t depth_ = 0;
  uint32_t chans_ = 0;
  uint32_t groups_ = 0;
  int32_t input_offset_ = 0;
  std::array<uint32_t, kFilterWords> filt_{};
  uint32_t filt_n_ = 0;
  std::array<uint32_t, kInputWords> inp_{};
  uint32_t inp_n_ = 0;
  int32_t acc_ = 0;
  uint32_t chan_ = 0;
  std::deque<uint32_t> queue_;
  PostprocBank bank_{kMaxChannels};
  bool error_ = false;
};

}  // namespace

std::unique_ptr<CfuModel> make_cfu1() { return std::make_unique<Cfu1>(); }

}  // namespace cfusim
