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
// Second implementations of every unit, written independently of the primary
// models: sign-magnitude rounding instead of nudge-and-truncate, SWAR lane
// math instead of per-lane loops, flat lane storage instead of packed words.
// Used only to cross-check the primary models issue by issue.

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "cfu_internal.h"
#include "cfusim/cfu.h"

namespace cfusim {
namespace {

int32_t t_srdhm(int32_t a, int32_t b) {
  if (a == std::numeric_limits<int32_t>::min() &&
      b == std::numeric_limits<int32_t>::min())
    return std::numeric_limits<int32_t>::max();
  if (a == 0 || b == 0) return 0;
  bool neg = (a < 0) != (b < 0);
  uint64_t mag = static_cast<uint64_t>(std::llabs(a)) *
                 static_cast<uint64_t>(std::llabs(b));
  if (neg)
    return -static_cast<int32_t>((mag + (1ull << 30) - 1) >> 31);
  return static_cast<int32_t>((mag + (1ull << 30)) >> 31);
}

int32_t t_rdbpot(int32_t x, int32_t e) {
  if (e <= 0) return x;
  int64_t adj = static_cast<int64_t>(x) + (1ll << (e - 1)) - (x < 0 ? 1 : 0);
  return static_cast<int32_t>(adj >> e);
}

int32_t t_requant(int32_t x, int32_t mult, int32_t shift) {
  int32_t left = shift < 0 ? 0 : shift;
  int32_t right = shift < 0 ? -shift : 0;
  int64_t pre = static_cast<int64_t>(x) << left;
  if (pre > std::numeric_limits<int32_t>::max())
    pre = std::numeric_limits<int32_t>::max();
  if (pre < std::numeric_limits<int32_t>::min())
    pre = std::numeric_limits<int32_t>::min();
  return t_rdbpot(t_srdhm(static_cast<int32_t>(pre), mult), right);
}

int8_t t_lane(uint32_t w, uint32_t i) {
  return static_cast<int8_t>((w >> (8 * i)) & 0xFF);
}

uint32_t t_wrap_mac(uint32_t acc, int32_t in, int32_t off, int32_t f) {
  int64_t prod = (static_cast<int64_t>(in) + off) * f;
  return acc + static_cast<uint32_t>(static_cast<uint64_t>(prod));
}

struct TwinBank {
  explicit TwinBank(uint32_t capacity) : cap(capacity) {
    bias.resize(cap);
    mult.resize(cap);
    shiftv.resize(cap);
  }

  uint32_t cap;
  std::vector<int32_t> bias, mult;
  std::vector<int8_t> shiftv;
  uint32_t nb = 0, nm = 0, ns = 0;
  int32_t off = 0, lo = -128, hi = 127;

  void clear() {
    nb = nm = ns = 0;
    off = 0;
    lo = -128;
    hi = 127;
  }

  bool ready() const { return nb > 0 && nb == nm && nb == ns; }

  uint32_t param(uint32_t funct7, uint32_t rs1, uint32_t rs2, bool* err) {
    if (funct7 == pp_op::kBias) {
      if (nb >= cap) {
        *err = true;
        return 0;
      }
      bias[nb] = static_cast<int32_t>(rs1);
      return nb++;
    }
    if (funct7 == pp_op::kMult) {
      if (nm >= cap) {
        *err = true;
        return 0;
      }
      mult[nm] = static_cast<int32_t>(rs1);
      return nm++;
    }
    if (funct7 == pp_op::kShift) {
      int32_t s = static_cast<int32_t>(rs1);
      if (ns >= cap || s < -31 || s > 8) {
        *err = true;
        return 0;
      }
      shiftv[ns] = static_cast<int8_t>(s);
      return ns++;
    }
    if (funct7 == pp_op::kOutputParams) {
      off = static_cast<int32_t>(rs1);
      lo = static_cast<int16_t>(rs2 & 0xFFFF);
      hi = static_cast<int16_t>(rs2 >> 16);
      return 0;
    }
    if (funct7 == pp_op::kResetParams) {
      clear();
      return 0;
    }
    *err = true;
    return 0;
  }

  int32_t apply(int32_t acc, uint32_t c) const {
    int32_t biased = static_cast<int32_t>(static_cast<uint32_t>(acc) +
                                          static_cast<uint32_t>(bias[c]));
    int32_t v = t_requant(biased, mult[c], shiftv[c]) + off;
    // Lower bound first, upper bound last: a raw issue can program lo > hi,
    // and the architectural contract is that the upper bound then wins.
    if (v < lo) v = lo;
    return v > hi ? hi : v;
  }
};

class DemoTwin final : public CfuModel {
 public:
  const char* name() const override { return "demo-twin"; }
  ResourceCost resources() const override { return {100, 0, 0}; }
  void reset() override {}

  CfuIssueResult issue(uint32_t, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct7 == demo_op::kAdd)
      return {static_cast<uint32_t>(
                  (static_cast<uint64_t>(rs1) + rs2) & 0xFFFFFFFFull),
              0};
    if (funct7 == demo_op::kPopcount) {
      uint32_t c = 0, v = rs1;
      while (v) {
        v &= v - 1;
        ++c;
      }
      return {c, 0};
    }
    if (funct7 == demo_op::kBitReverse) {
      uint32_t v = rs1;
      v = ((v >> 1) & 0x55555555u) | ((v & 0x55555555u) << 1);
      v = ((v >> 2) & 0x33333333u) | ((v & 0x33333333u) << 2);
      v = ((v >> 4) & 0x0F0F0F0Fu) | ((v & 0x0F0F0F0Fu) << 4);
      v = ((v >> 8) & 0x00FF00FFu) | ((v & 0x00FF00FFu) << 8);
      v = (v >> 16) | (v << 16);
      return {v, 0};
    }
    if (funct7 == demo_op::kSimdAdd) {
      uint32_t low = (rs1 & 0x7F7F7F7Fu) + (rs2 & 0x7F7F7F7Fu);
      return {low ^ ((rs1 ^ rs2) & 0x80808080u), 0};
    }
    return {0, 0};
  }
};

class PostprocTwin final : public CfuModel {
 public:
  const char* name() const override { return "postproc-twin"; }
  ResourceCost resources() const override { return {300, 0, 0}; }

  void reset() override {
    bank_.clear();
    cursor_ = 0;
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct3 == pp_op::kParams) {
      uint32_t v = bank_.param(funct7, rs1, rs2, &error_);
      if (funct7 == pp_op::kResetParams) cursor_ = 0;
      return {v, 0};
    }
    if (funct3 == pp_op::kProcess && funct7 == 0 && bank_.ready()) {
      int32_t v = bank_.apply(static_cast<int32_t>(rs1), cursor_);
      cursor_ = (cursor_ + 1) % bank_.nb;
      return {sext8(v), 2};
    }
    if (funct3 == pp_op::kStatus && funct7 == pp_op::kErrRead)
      return {error_ ? 1u : 0u, 0};
    if (funct3 == pp_op::kStatus && funct7 == pp_op::kErrClear) {
      error_ = false;
      return {0, 0};
    }
    error_ = true;
    return {0, 0};
  }

 private:
  TwinBank bank_{256};
  uint32_t cursor_ = 0;
  bool error_ = false;
};

class Mac4Twin final : public CfuModel {
 public:
  const char* name() const override { return "mac4-twin"; }
  ResourceCost resources() const override { return {250, 4, 0}; }

  void reset() override {
    acc_ = 0;
    off_ = 0;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct3 == mac4_op::kCtrl && funct7 == mac4_op::kSetOffset) {
      off_ = static_cast<int32_t>(rs1);
      return {0, 0};
    }
    if (funct3 == mac4_op::kCtrl && funct7 == mac4_op::kResetAcc) {
      uint32_t old = acc_;
      acc_ = 0;
      return {old, 0};
    }
    if (funct3 == mac4_op::kCtrl && funct7 == mac4_op::kReadAcc)
      return {acc_, 0};
    if (funct3 == mac4_op::kMac && funct7 == mac4_op::kMac4) {
      for (uint32_t i = 0; i < 4; ++i)
        acc_ = t_wrap_mac(acc_, t_lane(rs1, i), off_, t_lane(rs2, i));
      return {acc_, 0};
    }
    return {0, 0};
  }

 private:
  uint32_t acc_ = 0;
  int32_t off_ = 0;
};

class Cfu1Twin final : public CfuModel {
 public:
  static constexpr uint32_t kMaxDepth = 256;
  static constexpr uint32_t kMaxChannels = 256;
  static constexpr uint32_t kFilterWords = 512;
  static constexpr uint32_t kInputWords = 64;
  static constexpr uint32_t kQueueWords = 8;

  Cfu1Twin() : filt_(kFilterWords * 4), inp_(kInputWords * 4) {}

  const char* name() const override { return "cfu1-twin"; }
  ResourceCost resources() const override {
    return {1200, 8, kFilterWords * 4};
  }

  void reset() override {
    d_ = o_ = g_ = 0;
    off_ = 0;
    filt_n_ = inp_n_ = 0;
    acc_ = 0;
    chan_ = 0;
    q_head_ = q_size_ = 0;
    bank_.clear();
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct3 == cfu1_op::kCtrl) return ctrl(funct7, rs1, rs2);
    if (funct3 == cfu1_op::kParams) {
      return {bank_.param(funct7, rs1, rs2, &error_), 0};
    }
    if (funct3 == cfu1_op::kFilter) {
      if (funct7 == cfu1_op::kFiltWrite) {
        if (d_ == 0 || filt_n_ >= o_ * g_) return fail();
        store_word(&filt_, filt_n_, rs1);
        return {filt_n_++, 0};
      }
      if (funct7 == cfu1_op::kFiltRead) {
        if (rs1 >= filt_n_) return fail();
        return {load_word(filt_, rs1), 0};
      }
      if (funct7 == cfu1_op::kFiltResetIdx) {
        filt_n_ = 0;
        return {0, 0};
      }
      return fail();
    }
    if (funct3 == cfu1_op::kInput) {
      if (funct7 == cfu1_op::kInpWrite) {
        if (d_ == 0 || inp_n_ >= g_) return fail();
        store_word(&inp_, inp_n_, rs1);
        return {inp_n_++, 0};
      }
      if (funct7 == cfu1_op::kInpRead) {
        if (rs1 >= inp_n_) return fail();
        return {load_word(inp_, rs1), 0};
      }
      return fail();
    }
    if (funct3 == cfu1_op::kAcc) {
      if (funct7 == cfu1_op::kMac4) {
        for (uint32_t i = 0; i < 4; ++i)
          acc_ = t_wrap_mac(acc_, t_lane(rs1, i), off_, t_lane(rs2, i));
        return {acc_, 0};
      }
      if (funct7 == cfu1_op::kProcess) {
        if (o_ == 0 || !pp_ready()) return fail();
        int32_t v = bank_.apply(static_cast<int32_t>(rs1), chan_);
        chan_ = (chan_ + 1) % o_;
        return {sext8(v), 2};
      }
      return fail();
    }
    if (funct3 == cfu1_op::kRun) return run(funct7);
    if (funct3 == cfu1_op::kStatus) {
      if (funct7 == pp_op::kErrRead) return {error_ ? 1u : 0u, 0};
      if (funct7 == pp_op::kErrClear) {
        error_ = false;
        return {0, 0};
      }
    }
    return fail();
  }

 private:
  CfuIssueResult fail() {
    error_ = true;
    return {0, 0};
  }

  static void store_word(std::vector<int8_t>* lanes, uint32_t idx,
                         uint32_t w) {
    for (uint32_t i = 0; i < 4; ++i) (*lanes)[idx * 4 + i] = t_lane(w, i);
  }

  static uint32_t load_word(const std::vector<int8_t>& lanes, uint32_t idx) {
    uint32_t w = 0;
    for (uint32_t i = 0; i < 4; ++i)
      w |= static_cast<uint32_t>(static_cast<uint8_t>(lanes[idx * 4 + i]))
           << (8 * i);
    return w;
  }

  CfuIssueResult ctrl(uint32_t funct7, uint32_t rs1, uint32_t rs2) {
    if (funct7 == cfu1_op::kSetDims) {
      uint32_t g = (rs1 + 3) / 4;
      if (rs1 == 0 || rs1 > kMaxDepth || rs2 == 0 || rs2 > kMaxChannels ||
          rs2 * g > kFilterWords)
        return fail();
      d_ = rs1;
      o_ = rs2;
      g_ = g;
      filt_n_ = inp_n_ = 0;
      acc_ = 0;
      chan_ = 0;
      q_head_ = q_size_ = 0;
      bank_.clear();
      return {0, 0};
    }
    if (funct7 == cfu1_op::kSetInputOffset) {
      off_ = static_cast<int32_t>(rs1);
      return {0, 0};
    }
    if (funct7 == cfu1_op::kResetAll) {
      reset();
      return {0, 0};
    }
    if (funct7 == cfu1_op::kResetInputWrite) {
      inp_n_ = 0;
      return {0, 0};
    }
    if (funct7 == cfu1_op::kResetAcc) {
      uint32_t old = acc_;
      acc_ = 0;
      return {old, 0};
    }
    if (funct7 == cfu1_op::kReadAcc) return {acc_, 0};
    if (funct7 == cfu1_op::kResetChan) {
      chan_ = 0;
      return {0, 0};
    }
    return fail();
  }

  bool pp_ready() const { return bank_.ready() && bank_.nb >= o_; }

  bool engine_ready() const {
    return d_ > 0 && filt_n_ >= o_ * g_ && inp_n_ >= g_;
  }

  int32_t compute(uint32_t c) const {
    uint32_t sum = 0;
    for (uint32_t k = 0; k < d_; ++k) {
      int32_t in = inp_[k];
      int32_t f = filt_[c * g_ * 4 + k];
      sum = t_wrap_mac(sum, in, off_, f);
    }
    return static_cast<int32_t>(sum);
  }

  CfuIssueResult run(uint32_t funct7) {
    if (funct7 == cfu1_op::kRunOne) {
      if (!engine_ready()) return fail();
      return {static_cast<uint32_t>(compute(chan_)), g_};
    }
    if (funct7 == cfu1_op::kRunOnePp) {
      if (!engine_ready() || !pp_ready()) return fail();
      int32_t v = bank_.apply(compute(chan_), chan_);
      chan_ = (chan_ + 1) % o_;
      return {sext8(v), g_ + 2};
    }
    if (funct7 == cfu1_op::kRun4Pp || funct7 == cfu1_op::kRun4PpOv) {
      if (!engine_ready() || !pp_ready() || q_size_ >= kQueueWords)
        return fail();
      uint32_t w = 0;
      for (uint32_t i = 0; i < 4; ++i) {
        uint32_t c = (chan_ + i) % o_;
        uint32_t b = static_cast<uint32_t>(bank_.apply(compute(c), c)) & 0xFF;
        w |= b << (8 * i);
      }
      chan_ = (chan_ + 4) % o_;
      q_[(q_head_ + q_size_) % kQueueWords] = w;
      ++q_size_;
      uint32_t batch = funct7 == cfu1_op::kRun4PpOv ? (4 * g_ + 1) / 2 : 4 * g_;
      return {q_size_, batch + 2};
    }
    if (funct7 == cfu1_op::kDrain) {
      if (q_size_ == 0) return fail();
      uint32_t w = q_[q_head_];
      q_head_ = (q_head_ + 1) % kQueueWords;
      --q_size_;
      return {w, 0};
    }
    return fail();
  }

  uint32_t d_ = 0, o_ = 0, g_ = 0;
  int32_t off_ = 0;
  std::vector<int8_t> filt_, inp_;
  uint32_t filt_n_ = 0, inp_n_ = 0;
  uint32_t acc_ = 0;
  uint32_t chan_ = 0;
  uint32_t q_[kQueueWords] = {};
  uint32_t q_head_ = 0, q_size_ = 0;
  TwinBank bank_{kMaxChannels};
  bool error_ = false;
};

class Cfu2Twin final : public CfuModel {
 public:
  const char* name() const override { return "cfu2-twin"; }
  ResourceCost resources() const override { return {500, 4, 0}; }

  void reset() override {
    acc_ = 0;
    off_ = 0;
    cursor_ = 0;
    bank_.clear();
    error_ = false;
  }

  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    if (funct3 == cfu2_op::kCtrl) {
      if (funct7 == cfu2_op::kSetInputOffset) {
        off_ = static_cast<int32_t>(rs1);
        return {0, 0};
      }
      if (funct7 == cfu2_op::kResetAcc) {
        uint32_t old = acc_;
        acc_ = 0;
        return {old, 0};
      }
      if (funct7 == cfu2_op::kReadAcc) return {acc_, 0};
      if (funct7 == cfu2_op::kResetAll) {
        reset();
        return {0, 0};
      }
      return fail();
    }
    if (funct3 == cfu2_op::kMac) {
      if (funct7 == cfu2_op::kMac4) {
        for (uint32_t i = 0; i < 4; ++i)
          acc_ = t_wrap_mac(acc_, t_lane(rs1, i), off_, t_lane(rs2, i));
        return {acc_, 0};
      }
      if (funct7 == cfu2_op::kMac1) {
        acc_ = t_wrap_mac(acc_, t_lane(rs1, 0), off_, t_lane(rs2, 0));
        return {acc_, 0};
      }
      return fail();
    }
    if (funct3 == cfu2_op::kParams) {
      uint32_t v = bank_.param(funct7, rs1, rs2, &error_);
      if (funct7 == pp_op::kResetParams) cursor_ = 0;
      return {v, 0};
    }
    if (funct3 == cfu2_op::kProcessAcc) {
      if (funct7 != 0 || !bank_.ready()) return fail();
      int32_t v = bank_.apply(static_cast<int32_t>(acc_), cursor_);
      cursor_ = (cursor_ + 1) % bank_.nb;
      return {sext8(v), 2};
    }
    if (funct3 == cfu2_op::kStatus) {
      if (funct7 == pp_op::kErrRead) return {error_ ? 1u : 0u, 0};
      if (funct7 == pp_op::kErrClear) {
        error_ = false;
        return {0, 0};
      }
    }
    return fail();
  }

 private:
  CfuIssueResult fail() {
    error_ = true;
    return {0, 0};
  }

  uint32_t acc_ = 0;
  int32_t off_ = 0;
  uint32_t cursor_ = 0;
  TwinBank bank_{64};
  bool error_ = false;
};

}  // namespace

std::unique_ptr<CfuModel> make_demo_twin() {
  return std::make_unique<DemoTwin>();
}
std::unique_ptr<CfuModel> make_postproc_twin() {
  return std::make_unique<PostprocTwin>();
}
std::unique_ptr<CfuModel> make_mac4_twin() {
  return std::make_unique<Mac4Twin>();
}
std::unique_ptr<CfuModel> make_cfu1_twin() {
  return std::make_unique<Cfu1Twin>();
}
std::unique_ptr<CfuModel> make_cfu2_twin() {
  return std::make_unique<Cfu2Twin>();
}

}  // namespace cfusim
