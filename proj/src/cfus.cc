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

#include <bit>
#include <cstdint>

#include "cfu_internal.h"
#include "cfusim/cfu.h"
#include "cfusim/kernels.h"
#include "cfusim/prng.h"

namespace cfusim {

uint32_t PostprocBank::handle_param(uint32_t funct7, uint32_t rs1,
                                    uint32_t rs2, bool* error) {
  switch (funct7) {
    case pp_op::kBias:
      if (bias_.size() >= capacity_) break;
      bias_.push_back(static_cast<int32_t>(rs1));
      return static_cast<uint32_t>(bias_.size() - 1);
    case pp_op::kMult:
      if (mult_.size() >= capacity_) break;
      mult_.push_back(static_cast<int32_t>(rs1));
      return static_cast<uint32_t>(mult_.size() - 1);
    case pp_op::kShift: {
      int32_t s = static_cast<int32_t>(rs1);
      if (shift_.size() >= capacity_ || s < -31 || s > 8) break;
      shift_.push_back(s);
      return static_cast<uint32_t>(shift_.size() - 1);
    }
    case pp_op::kOutputParams:
      output_offset_ = static_cast<int32_t>(rs1);
      act_min_ = static_cast<int16_t>(rs2 & 0xFFFF);
      act_max_ = static_cast<int16_t>(rs2 >> 16);
      return 0;
    case pp_op::kResetParams:
      reset();
      return 0;
    default:
      break;
  }
  *error = true;
  return 0;
}

int32_t PostprocBank::process_at(int32_t acc, uint32_t channel) const {
  int32_t biased = static_cast<int32_t>(static_cast<uint32_t>(acc) +
                                        static_cast<uint32_t>(bias_[channel]));
  int32_t v = mbqm(biased, mult_[channel], shift_[channel]);
  v += output_offset_;
  // Bounds apply in order min then max, so max wins if a raw issue programs
  // an inverted activation range.
  if (v < act_min_) v = act_min_;
  if (v > act_max_) v = act_max_;
  return v;
}

namespace {

class DemoCfu final : public CfuModel {
 public:
  const char* name() const override { return "demo"; }
  ResourceCost resources() const override { return {100, 0, 0}; }
  void reset() override {}

  CfuIssueResult issue(uint32_t, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    switch (funct7) {
      case demo_op::kAdd:
        return {rs1 + rs2, 0};
      case demo_op::kPopcount:
        return {static_cast<uint32_t>(std::popcount(rs1)), 0};
      case demo_op::kBitReverse: {
        uint32_t v = 0;
        for (uint32_t i = 0; i < 32; ++i) v |= ((rs1 >> i) & 1u) << (31 - i);
        return {v, 0};
      }
      case demo_op::kSimdAdd: {
        uint32_t v = 0;
        for (uint32_t i = 0; i < 4; ++i) {
          uint32_t sum = ((rs1 >> (8 * i)) + (rs2 >> (8 * i))) & 0xFF;
          v |= sum << (8 * i);
        }
        return {v, 0};
      }
      default:
        return {0, 0};
    }
  }
};

class PostprocCfu final : public CfuModel {
 public:
  const char* name() const override { return "postproc"; }
  ResourceCost resources() const override { return {300, 0, 0}; }

  void reset() override {
    bank_.reset();
    cursor_ = 0;
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    switch (funct3) {
      case pp_op::kParams: {
        uint32_t v = bank_.handle_param(funct7, rs1, rs2, &error_);
        if (funct7 == pp_op::kResetParams) cursor_ = 0;
        return {v, 0};
      }
      case pp_op::kProcess: {
        if (funct7 != 0 || !bank_.ready()) break;
        int32_t v = bank_.process_at(static_cast<int32_t>(rs1), cursor_);
        cursor_ = (cursor_ + 1) % bank_.count();
        return {sext8(v), kProcessLatency};
      }
      case pp_op::kStatus:
        if (funct7 == pp_op::kErrRead) return {error_ ? 1u : 0u, 0};
        if (funct7 == pp_op::kErrClear) {
          error_ = false;
          return {0, 0};
        }
        break;
      default:
        break;
    }
    error_ = true;
    return {0, 0};
  }

  static constexpr uint32_t kProcessLatency = 2;

 private:
  PostprocBank bank_{256};
  uint32_t cursor_ = 0;
  bool error_ = false;
};

class Mac4Cfu final : public CfuModel {
 public:
  const char* name() const override { return "mac4"; }
  ResourceCost resources() const override { return {250, 4, 0}; }

  void reset() override {
    acc_ = 0;
    input_offset_ = 0;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct3 == mac4_op::kCtrl) {
      switch (funct7) {
        case mac4_op::kSetOffset:
          input_offset_ = static_cast<int32_t>(rs1);
          return {0, 0};
        case mac4_op::kResetAcc: {
          uint32_t old = static_cast<uint32_t>(acc_);
          acc_ = 0;
          return {old, 0};
        }
        case mac4_op::kReadAcc:
          return {static_cast<uint32_t>(acc_), 0};
        default:
          return {0, 0};
      }
    }
    if (funct3 == mac4_op::kMac && funct7 == mac4_op::kMac4) {
      acc_ = static_cast<int32_t>(
          static_cast<uint32_t>(acc_) +
          static_cast<uint32_t>(dot4_lanes(rs1, rs2, input_offset_)));
      return {static_cast<uint32_t>(acc_), 0};
    }
    return {0, 0};
  }

 private:
  int32_t acc_ = 0;
  int32_t input_offset_ = 0;
};

}  // namespace

uint32_t cfu_capabilities(CfuKind kind) {
  switch (kind) {
    case CfuKind::kPostproc:
      return cap_bit(CfuCap::kPostproc);
    case CfuKind::kMac4:
      return cap_bit(CfuCap::kMac4);
    case CfuKind::kCfu1:
      return cap_bit(CfuCap::kPostproc) | cap_bit(CfuCap::kMac4) |
             cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kOverlap);
    case CfuKind::kCfu2:
      return cap_bit(CfuCap::kPostproc) | cap_bit(CfuCap::kMac4) |
             cap_bit(CfuCap::kMac1);
    case CfuKind::kNone:
    case CfuKind::kDemo:
      return 0;
  }
  return 0;
}

std::unique_ptr<CfuModel> make_cfu(CfuKind kind) {
  switch (kind) {
    case CfuKind::kNone:
      return nullptr;
    case CfuKind::kDemo:
      return std::make_unique<DemoCfu>();
    case CfuKind::kPostproc:
      return std::make_unique<PostprocCfu>();
    case CfuKind::kMac4:
      return std::make_unique<Mac4Cfu>();
    case CfuKind::kCfu1:
      return make_cfu1();
    case CfuKind::kCfu2:
      return make_cfu2();
  }
  return nullptr;
}

std::unique_ptr<CfuModel> make_cfu_twin(CfuKind kind) {
  switch (kind) {
    case CfuKind::kNone:
      return nullptr;
    case CfuKind::kDemo:
      return make_demo_twin();
    case CfuKind::kPostproc:
      return make_postproc_twin();
    case CfuKind::kMac4:
      return make_mac4_twin();
    case CfuKind::kCfu1:
      return make_cfu1_twin();
    case CfuKind::kCfu2:
      return make_cfu2_twin();
  }
  return nullptr;
}

namespace {

void push_params(std::vector<IssueRecord>* out, uint32_t params_f3,
                 uint32_t channels, Prng64* rng) {
  out->push_back({params_f3, pp_op::kResetParams, 0, 0});
  for (uint32_t c = 0; c < channels; ++c) {
    uint32_t bias = static_cast<uint32_t>(rng->next()) & 0x1FFFFF;
    out->push_back({params_f3, pp_op::kBias, bias, 0});
    uint32_t mult = 0x40000000u + static_cast<uint32_t>(rng->next_below(1u << 30));
    out->push_back({params_f3, pp_op::kMult, mult, 0});
    uint32_t shift = static_cast<uint32_t>(-static_cast<int32_t>(rng->next_below(10)));
    out->push_back({params_f3, pp_op::kShift, shift, 0});
  }
  uint32_t offset = static_cast<uint32_t>(
      static_cast<int32_t>(rng->next_below(256)) - 128);
  out->push_back({params_f3, pp_op::kOutputParams, offset,
                  pack_activation(-128, 127)});
}

IssueRecord wild_record(Prng64* rng) {
  return {static_cast<uint32_t>(rng->next_below(8)),
          static_cast<uint32_t>(rng->next_below(128)),
          static_cast<uint32_t>(rng->next()),
          static_cast<uint32_t>(rng->next())};
}

void stream_demo(std::vector<IssueRecord>* out, Prng64* rng) {
  out->push_back({static_cast<uint32_t>(rng->next_below(8)),
                  static_cast<uint32_t>(rng->next_below(6)),
                  static_cast<uint32_t>(rng->next()),
                  static_cast<uint32_t>(rng->next())});
}

void stream_postproc(std::vector<IssueRecord>* out, Prng64* rng) {
  uint32_t channels = 1 + static_cast<uint32_t>(rng->next_below(8));
  push_params(out, pp_op::kParams, channels, rng);
  uint32_t n = 4 + static_cast<uint32_t>(rng->next_below(40));
  for (uint32_t i = 0; i < n; ++i) {
    if (rng->next_below(20) == 0) {
      out->push_back(wild_record(rng));
      out->push_back({pp_op::kStatus, pp_op::kErrClear, 0, 0});
      continue;
    }
    out->push_back({pp_op::kProcess, 0, static_cast<uint32_t>(rng->next()), 0});
  }
  out->push_back({pp_op::kStatus, pp_op::kErrRead, 0, 0});
}

void stream_mac4(std::vector<IssueRecord>* out, Prng64* rng) {
  switch (rng->next_below(6)) {
    case 0:
      out->push_back({mac4_op::kCtrl, mac4_op::kSetOffset,
                      static_cast<uint32_t>(
                          static_cast<int32_t>(rng->next_below(256)) - 128),
                      0});
      break;
    case 1:
      out->push_back({mac4_op::kCtrl, mac4_op::kResetAcc, 0, 0});
      break;
    case 2:
      out->push_back({mac4_op::kCtrl, mac4_op::kReadAcc, 0, 0});
      break;
    default:
      out->push_back({mac4_op::kMac, mac4_op::kMac4,
                      static_cast<uint32_t>(rng->next()),
                      static_cast<uint32_t>(rng->next())});
      break;
  }
}

void stream_cfu1(std::vector<IssueRecord>* out, Prng64* rng) {
  uint32_t d = 1 + static_cast<uint32_t>(rng->next_below(32));
  uint32_t o = 4 * (1 + static_cast<uint32_t>(rng->next_below(4)));
  uint32_t groups = (d + 3) / 4;
  if (rng->next_below(25) == 0) {
    out->push_back({cfu1_op::kCtrl, cfu1_op::kSetDims, 4096, 4096});
    out->push_back({cfu1_op::kStatus, pp_op::kErrRead, 0, 0});
    out->push_back({cfu1_op::kStatus, pp_op::kErrClear, 0, 0});
  }
  out->push_back({cfu1_op::kCtrl, cfu1_op::kSetDims, d, o});
  out->push_back({cfu1_op::kCtrl, cfu1_op::kSetInputOffset,
                  static_cast<uint32_t>(
                      static_cast<int32_t>(rng->next_below(256)) - 128),
                  0});
  push_params(out, cfu1_op::kParams, o, rng);
  for (uint32_t w = 0; w < o * groups; ++w)
    out->push_back({cfu1_op::kFilter, cfu1_op::kFiltWrite,
                    static_cast<uint32_t>(rng->next()), 0});
  for (uint32_t w = 0; w < groups; ++w)
    out->push_back({cfu1_op::kInput, cfu1_op::kInpWrite,
                    static_cast<uint32_t>(rng->next()), 0});
  uint32_t pending = 0;
  uint32_t n = 8 + static_cast<uint32_t>(rng->next_below(24));
  for (uint32_t i = 0; i < n; ++i) {
    switch (rng->next_below(12)) {
      case 0:
        out->push_back({cfu1_op::kAcc, cfu1_op::kMac4,
                        static_cast<uint32_t>(rng->next()),
                        static_cast<uint32_t>(rng->next())});
        break;
      case 1:
        out->push_back({cfu1_op::kAcc, cfu1_op::kProcess,
                        static_cast<uint32_t>(rng->next()), 0});
        break;
      case 2:
        out->push_back({cfu1_op::kRun, cfu1_op::kRunOne, 0, 0});
        break;
      case 3:
        out->push_back({cfu1_op::kRun, cfu1_op::kRunOnePp, 0, 0});
        break;
      case 4:
      case 5:
        if (pending < 4) {
          out->push_back({cfu1_op::kRun,
                          rng->next_below(2) ? cfu1_op::kRun4PpOv
                                             : cfu1_op::kRun4Pp,
                          0, 0});
          ++pending;
        }
        break;
      case 6:
        if (pending > 0) {
          out->push_back({cfu1_op::kRun, cfu1_op::kDrain, 0, 0});
          --pending;
        }
        break;
      case 7:
        out->push_back({cfu1_op::kFilter, cfu1_op::kFiltRead,
                        static_cast<uint32_t>(rng->next_below(o * groups)), 0});
        break;
      case 8:
        out->push_back({cfu1_op::kInput, cfu1_op::kInpRead,
                        static_cast<uint32_t>(rng->next_below(groups)), 0});
        break;
      case 9:
        out->push_back({cfu1_op::kCtrl, cfu1_op::kReadAcc, 0, 0});
        break;
      case 10:
        out->push_back({cfu1_op::kCtrl, cfu1_op::kResetAcc, 0, 0});
        break;
      default:
        out->push_back(wild_record(rng));
        out->push_back({cfu1_op::kStatus, pp_op::kErrClear, 0, 0});
        break;
    }
  }
  while (pending > 0) {
    out->push_back({cfu1_op::kRun, cfu1_op::kDrain, 0, 0});
    --pending;
  }
  out->push_back({cfu1_op::kStatus, pp_op::kErrRead, 0, 0});
}

void stream_cfu2(std::vector<IssueRecord>* out, Prng64* rng) {
  uint32_t channels = 1 + static_cast<uint32_t>(rng->next_below(16));
  out->push_back({cfu2_op::kCtrl, cfu2_op::kResetAll, 0, 0});
  out->push_back({cfu2_op::kCtrl, cfu2_op::kSetInputOffset,
                  static_cast<uint32_t>(
                      static_cast<int32_t>(rng->next_below(256)) - 128),
                  0});
  push_params(out, cfu2_op::kParams, channels, rng);
  uint32_t n = 8 + static_cast<uint32_t>(rng->next_below(32));
  for (uint32_t i = 0; i < n; ++i) {
    switch (rng->next_below(8)) {
      case 0:
        out->push_back({cfu2_op::kCtrl, cfu2_op::kResetAcc, 0, 0});
        break;
      case 1:
        out->push_back({cfu2_op::kCtrl, cfu2_op::kReadAcc, 0, 0});
        break;
      case 2:
        out->push_back({cfu2_op::kProcessAcc, 0, 0, 0});
        break;
      case 3:
        out->push_back({cfu2_op::kMac, cfu2_op::kMac1,
                        static_cast<uint32_t>(rng->next()),
                        static_cast<uint32_t>(rng->next())});
        break;
      case 7:
        out->push_back(wild_record(rng));
        out->push_back({cfu2_op::kStatus, pp_op::kErrClear, 0, 0});
        break;
      default:
        out->push_back({cfu2_op::kMac, cfu2_op::kMac4,
                        static_cast<uint32_t>(rng->next()),
                        static_cast<uint32_t>(rng->next())});
        break;
    }
  }
  out->push_back({cfu2_op::kStatus, pp_op::kErrRead, 0, 0});
}

}  // namespace

std::vector<IssueRecord> random_issue_stream(CfuKind kind, uint64_t seed,
                                             size_t count) {
  std::vector<IssueRecord> out;
  out.reserve(count + 64);
  Prng64 rng(seed);
  while (out.size() < count) {
    switch (kind) {
      case CfuKind::kDemo:
        stream_demo(&out, &rng);
        break;
      case CfuKind::kPostproc:
        stream_postproc(&out, &rng);
        break;
      case CfuKind::kMac4:
        stream_mac4(&out, &rng);
        break;
      case CfuKind::kCfu1:
        stream_cfu1(&out, &rng);
        break;
      case CfuKind::kCfu2:
        stream_cfu2(&out, &rng);
        break;
      case CfuKind::kNone:
        return out;
    }
  }
  out.resize(count);
  return out;
}

int64_t check_equivalence(CfuModel& a, CfuModel& b,
                          const std::vector<IssueRecord>& stream) {
  a.reset();
  b.reset();
  for (size_t i = 0; i < stream.size(); ++i) {
    const IssueRecord& r = stream[i];
    CfuIssueResult ra = a.issue(r.funct3, r.funct7, r.rs1, r.rs2);
    CfuIssueResult rb = b.issue(r.funct3, r.funct7, r.rs1, r.rs2);
    if (ra.value != rb.value) return static_cast<int64_t>(i);
  }
  return -1;
}

}  // namespace cfusim
