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
// Event-level emitters for every kernel variant. Each emitter walks the
// layer exactly as the corresponding firmware loop would: it performs the
// real arithmetic (through the unit model whenever the variant issues
// custom instructions) and streams one micro-event per modeled
// instruction, so the coster prices precisely the work that produced the
// outputs.

#include "cfusim/variants.h"

#include <algorithm>
#include <string>

#include "cfusim/error.h"
#include "cfusim/iss.h"
#include "cfusim/kernels.h"

namespace cfusim {

namespace {

constexpr uint32_t kFlashWeightsBase = 0x10000;
constexpr uint32_t kSramWeightsOff = 0x4000;
constexpr uint32_t kArenaOff = 0x10000;

const std::vector<VariantInfo>& table() {
  static const std::vector<VariantInfo> t = {
      {Variant::kBaseline, "baseline", 4096, 0},
      {Variant::kKwsBaseline, "kws_baseline", 4096, 0},
      {Variant::kKwsFastmult, "kws_fastmult", 4096, 0},
      {Variant::kSwSpec, "sw_spec", 2048, 0},
      {Variant::kCfuPostproc, "cfu_postproc", 2048,
       cap_bit(CfuCap::kPostproc)},
      {Variant::kCfuHoldFilt, "cfu_hold_filt", 1024,
       cap_bit(CfuCap::kSession)},
      {Variant::kCfuHoldInp, "cfu_hold_inp", 1024, cap_bit(CfuCap::kSession)},
      {Variant::kCfuMac4, "cfu_mac4", 1024,
       cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kMac4)},
      {Variant::kKwsMacconv, "kws_macconv", 2048,
       cap_bit(CfuCap::kMac4) | cap_bit(CfuCap::kMac1)},
      {Variant::kKwsPostproc, "kws_postproc", 2048,
       cap_bit(CfuCap::kMac4) | cap_bit(CfuCap::kMac1) |
           cap_bit(CfuCap::kPostproc)},
      {Variant::kMac4Run1, "mac4run1", 1024,
       cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kMac4) |
           cap_bit(CfuCap::kPostproc)},
      {Variant::kInclPostproc, "incl_postproc", 1024,
       cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kMac4) |
           cap_bit(CfuCap::kPostproc)},
      {Variant::kMac4Run4, "mac4run4", 1024,
       cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kMac4) |
           cap_bit(CfuCap::kPostproc)},
      {Variant::kOverlap, "overlap", 1024,
       cap_bit(CfuCap::kSession) | cap_bit(CfuCap::kMac4) |
           cap_bit(CfuCap::kPostproc) | cap_bit(CfuCap::kOverlap)},
  };
  return t;
}

// Selection order when picking for a unit: most specialized first.
constexpr Variant kPolicyRank[kVariantCount] = {
    Variant::kOverlap,      Variant::kMac4Run4,   Variant::kInclPostproc,
    Variant::kMac4Run1,     Variant::kCfuMac4,    Variant::kKwsPostproc,
    Variant::kKwsMacconv,   Variant::kCfuHoldInp, Variant::kCfuHoldFilt,
    Variant::kCfuPostproc,  Variant::kSwSpec,     Variant::kKwsFastmult,
    Variant::kKwsBaseline,  Variant::kBaseline,
};

// Branch sites: stable program counters for the shared kernel loops.
enum Site : uint32_t {
  kSiteMac = 0,
  kSiteGroup,
  kSiteTail,
  kSiteFeed,
  kSiteUpload,
  kSiteParams,
  kSiteOuter,
};

struct Emitter {
  TraceSink& sink;
  CfuModel* cfu;
  uint32_t code_base;
  LayerAudit* audit = nullptr;

  static MemRegion region_of(uint32_t addr) {
    return addr >= kSramBase ? MemRegion::kSram : MemRegion::kFlash;
  }
  void ld(uint32_t a, uint16_t n) {
    sink.on_event(TraceEvent::load(a, n, region_of(a)));
  }
  void st(uint32_t a, uint16_t n) {
    sink.on_event(TraceEvent::store(a, n, region_of(a)));
  }
  void mul() { sink.on_event(TraceEvent::mul()); }
  void alu(uint32_t n) {
    if (n > 0) sink.on_event(TraceEvent::alu(n));
  }
  void shl(uint32_t amount) { sink.on_event(TraceEvent::shift(amount)); }
  void br(uint32_t site, bool taken) {
    uint32_t pc = code_base + 64 + site * 16;
    sink.on_event(TraceEvent::branch(pc, pc - 12, taken));
  }
  uint32_t issue(uint32_t f3, uint32_t f7, uint32_t rs1, uint32_t rs2) {
    CfuIssueResult r = cfu->issue(f3, f7, rs1, rs2);
    sink.on_event(TraceEvent::cfu_issue(static_cast<uint8_t>(f3),
                                        static_cast<uint8_t>(f7),
                                        r.extra_latency));
    return r.value;
  }
  void begin(const std::string& n) {
    sink.on_event(TraceEvent::region_begin(n.c_str()));
  }
  void end(const std::string& n) {
    sink.on_event(TraceEvent::region_end(n.c_str()));
  }
};

struct LayerCtx {
  const LayerParams& p;
  const int8_t* in;
  const int8_t* filt;
  int8_t* out;
  uint32_t in_addr = 0;
  uint32_t out_addr = 0;
  uint32_t filt_addr = 0;
  uint32_t bias_addr = 0;
  uint32_t mult_addr = 0;
  uint32_t shift_addr = 0;
  std::string r_cfg, r_feed, r_acc, r_post, r_write;
};

enum class AccStyle {
  kScalarLoop,  // one branch per multiply-accumulate
  kUnrolled,    // pointwise path, inner loop unrolled by four
  kHoldFilt,    // filter words read back from unit scratch
  kHoldInp,     // filter and input words read back from unit scratch
  kMac4,        // packed MAC issues against unit scratch
  kRun1,        // run engine, raw accumulator per issue
  kRunPp,       // run engine, postprocessed byte per issue
  kRun4,        // run engine, four channels per issue via queue
  kRun4Ov,      // overlapped run engine
  kCfu2,        // streaming MAC issues against memory operands
};

enum class PostStyle {
  kScalar,   // software requantize/offset/clamp
  kPpUnit,   // standalone postprocessing unit, accumulator in rs1
  kCfu1,     // session unit bank, accumulator in rs1
  kCfu2Acc,  // streaming unit bank over its internal accumulator
  kFused,    // already applied inside the accumulation issue
};

struct LayerPlan {
  AccStyle acc = AccStyle::kScalarLoop;
  PostStyle post = PostStyle::kScalar;
  bool feed = false;            // stage input words per position
  bool upload_filter = false;   // stage filter words once per layer
  bool set_dims = false;        // real depth/channel dims on the unit
  bool post_ring = false;       // dims carry only the channel ring
  bool upload_bank = false;     // per-channel parameter upload
  bool set_input_offset = false;
  uint32_t bank_f3 = pp_op::kParams;  // funct3 group of the unit's bank
};

bool cfu1_layer_ok(const LayerParams& p) {
  if (!p.is_pointwise()) return false;
  uint32_t d = static_cast<uint32_t>(p.in_ch);
  uint32_t o = static_cast<uint32_t>(p.out_ch);
  uint32_t g = (d + 3) / 4;
  return d % 4 == 0 && d <= 256 && o <= 256 && o * g <= 512;
}

LayerPlan plan_for(Variant v, const LayerParams& p) {
  LayerPlan pl;
  bool elig = cfu1_layer_ok(p);
  bool elig4 = elig && p.out_ch % 4 == 0;
  AccStyle sw = p.is_pointwise() ? AccStyle::kUnrolled : AccStyle::kScalarLoop;
  auto cfu1_fallback = [&] {
    pl.acc = sw;
    if (p.out_ch <= 256) {
      pl.post = PostStyle::kCfu1;
      pl.post_ring = true;
      pl.upload_bank = true;
      pl.bank_f3 = cfu1_op::kParams;
    }
  };
  switch (v) {
    case Variant::kBaseline:
    case Variant::kKwsBaseline:
    case Variant::kKwsFastmult:
      pl.acc = AccStyle::kScalarLoop;
      break;
    case Variant::kSwSpec:
      pl.acc = sw;
      break;
    case Variant::kCfuPostproc:
      pl.acc = sw;
      if (p.out_ch <= 256) {
        pl.post = PostStyle::kPpUnit;
        pl.upload_bank = true;
      }
      break;
    case Variant::kCfuHoldFilt:
      if (elig) {
        pl.acc = AccStyle::kHoldFilt;
        pl.post = PostStyle::kCfu1;
        pl.set_dims = pl.upload_filter = pl.upload_bank = true;
        pl.bank_f3 = cfu1_op::kParams;
      } else {
        cfu1_fallback();
      }
      break;
    case Variant::kCfuHoldInp:
      if (elig) {
        pl.acc = AccStyle::kHoldInp;
        pl.post = PostStyle::kCfu1;
        pl.feed = true;
        pl.set_dims = pl.upload_filter = pl.upload_bank = true;
        pl.bank_f3 = cfu1_op::kParams;
      } else {
        cfu1_fallback();
      }
      break;
    case Variant::kCfuMac4:
      if (elig) {
        pl.acc = AccStyle::kMac4;
        pl.post = PostStyle::kCfu1;
        pl.feed = true;
        pl.set_dims = pl.upload_filter = pl.upload_bank = true;
        pl.set_input_offset = true;
        pl.bank_f3 = cfu1_op::kParams;
      } else {
        cfu1_fallback();
      }
      break;
    case Variant::kMac4Run1:
    case Variant::kInclPostproc:
    case Variant::kMac4Run4:
    case Variant::kOverlap:
      if (elig) {
        if (v == Variant::kMac4Run1) {
          pl.acc = AccStyle::kRun1;
          pl.post = PostStyle::kCfu1;
        } else if (v == Variant::kMac4Run4 && elig4) {
          pl.acc = AccStyle::kRun4;
          pl.post = PostStyle::kFused;
        } else if (v == Variant::kOverlap && elig4) {
          pl.acc = AccStyle::kRun4Ov;
          pl.post = PostStyle::kFused;
        } else {
          pl.acc = AccStyle::kRunPp;
          pl.post = PostStyle::kFused;
        }
        pl.feed = true;
        pl.set_dims = pl.upload_filter = pl.upload_bank = true;
        pl.set_input_offset = true;
        pl.bank_f3 = cfu1_op::kParams;
      } else {
        cfu1_fallback();
      }
      break;
    case Variant::kKwsMacconv:
      pl.acc = AccStyle::kCfu2;
      pl.set_input_offset = true;
      break;
    case Variant::kKwsPostproc:
      pl.acc = AccStyle::kCfu2;
      pl.set_input_offset = true;
      if (p.out_ch <= 64) {
        pl.post = PostStyle::kCfu2Acc;
        pl.upload_bank = true;
        pl.bank_f3 = cfu2_op::kParams;
      }
      break;
  }
  return pl;
}

int32_t clamp_out(const LayerParams& p, int32_t v) {
  v += p.output_offset;
  if (v < p.act_min) v = p.act_min;
  if (v > p.act_max) v = p.act_max;
  return v;
}

// Software requantization value; must match the reference kernels bit for
// bit (wrap-around bias add, then the doubling-high multiply pipeline).
int32_t scalar_post_value(const LayerParams& p, int32_t acc, int32_t oc) {
  int32_t biased = static_cast<int32_t>(static_cast<uint32_t>(acc) +
                                        static_cast<uint32_t>(p.bias[oc]));
  return clamp_out(p, mbqm(biased, p.mult[oc], p.shift[oc]));
}

void emit_scalar_post(Emitter& em, const LayerCtx& c, int32_t oc) {
  em.ld(c.bias_addr + 4 * static_cast<uint32_t>(oc), 4);
  em.ld(c.mult_addr + 4 * static_cast<uint32_t>(oc), 4);
  em.ld(c.shift_addr + 4 * static_cast<uint32_t>(oc), 4);
  em.alu(2);
  em.mul();
  em.alu(19);
  int32_t s = c.p.shift[oc];
  em.shl(static_cast<uint32_t>(s < 0 ? -s : s));
}

// Walks the in-bounds taps of one output position.
template <typename F>
void for_valid_taps(const LayerParams& p, int32_t oy, int32_t ox, F f) {
  for (int32_t ky = 0; ky < p.kh; ++ky) {
    int32_t iy = oy * p.stride - p.pad_top() + ky;
    if (iy < 0 || iy >= p.in_h) continue;
    for (int32_t kx = 0; kx < p.kw; ++kx) {
      int32_t ix = ox * p.stride - p.pad_left() + kx;
      if (ix < 0 || ix >= p.in_w) continue;
      f(iy, ix, ky, kx);
    }
  }
}

int32_t filt_index(const LayerParams& p, int32_t oc, int32_t ky, int32_t kx,
                   int32_t c) {
  if (p.depthwise) return (ky * p.kw + kx) * p.out_ch + oc;
  return ((oc * p.kh + ky) * p.kw + kx) * p.in_ch + c;
}

int32_t acc_scalar_loop(Emitter& em, const LayerCtx& c, int32_t oy,
                        int32_t ox, int32_t oc) {
  const LayerParams& p = c.p;
  em.alu(6);
  int64_t n = 0;
  for_valid_taps(p, oy, ox, [&](int32_t, int32_t, int32_t, int32_t) {
    n += p.depthwise ? 1 : p.in_ch;
  });
  int32_t acc = 0;
  int64_t i = 0;
  for_valid_taps(p, oy, ox, [&](int32_t iy, int32_t ix, int32_t ky,
                                int32_t kx) {
    int32_t c_lo = p.depthwise ? oc / p.depth_mult() : 0;
    int32_t c_hi = p.depthwise ? c_lo + 1 : p.in_ch;
    for (int32_t ch = c_lo; ch < c_hi; ++ch) {
      uint32_t ia =
          c.in_addr + static_cast<uint32_t>((iy * p.in_w + ix) * p.in_ch + ch);
      uint32_t fa =
          c.filt_addr + static_cast<uint32_t>(filt_index(p, oc, ky, kx, ch));
      em.ld(ia, 1);
      em.ld(fa, 1);
      em.mul();
      em.alu(2);
      acc += (static_cast<int32_t>(c.in[ia - c.in_addr]) + p.input_offset) *
             c.filt[fa - c.filt_addr];
      ++i;
      em.br(kSiteMac, i < n);
    }
  });
  em.audit->scalar_macs += static_cast<uint64_t>(n);
  return acc;
}

int32_t acc_unrolled(Emitter& em, const LayerCtx& c, int32_t pos,
                     int32_t oc) {
  const LayerParams& p = c.p;
  em.alu(2);
  int32_t d = p.in_ch;
  int32_t groups = d / 4;
  int32_t tail = d % 4;
  uint32_t in_base = c.in_addr + static_cast<uint32_t>(pos * d);
  uint32_t f_base = c.filt_addr + static_cast<uint32_t>(oc * d);
  int32_t acc = 0;
  auto one = [&](int32_t ch) {
    em.ld(in_base + static_cast<uint32_t>(ch), 1);
    em.ld(f_base + static_cast<uint32_t>(ch), 1);
    em.mul();
    em.alu(2);
    acc += (static_cast<int32_t>(c.in[pos * d + ch]) + p.input_offset) *
           c.filt[oc * d + ch];
  };
  for (int32_t w = 0; w < groups; ++w) {
    for (int32_t l = 0; l < 4; ++l) one(4 * w + l);
    em.br(kSiteGroup, w + 1 < groups);
  }
  for (int32_t t = 0; t < tail; ++t) {
    one(4 * groups + t);
    em.br(kSiteTail, t + 1 < tail);
  }
  em.audit->scalar_macs += static_cast<uint64_t>(d);
  return acc;
}

int32_t acc_hold_filt(Emitter& em, const LayerCtx& c, int32_t pos,
                      int32_t oc) {
  const LayerParams& p = c.p;
  int32_t d = p.in_ch;
  int32_t g = d / 4;
  uint32_t in_base = c.in_addr + static_cast<uint32_t>(pos * d);
  int32_t acc = 0;
  for (int32_t w = 0; w < g; ++w) {
    uint32_t fw = em.issue(cfu1_op::kFilter, cfu1_op::kFiltRead,
                           static_cast<uint32_t>(oc * g + w), 0);
    em.alu(1);
    for (int32_t l = 0; l < 4; ++l) {
      int32_t ch = 4 * w + l;
      em.ld(in_base + static_cast<uint32_t>(ch), 1);
      em.mul();
      em.alu(2);
      acc += (static_cast<int32_t>(c.in[pos * d + ch]) + p.input_offset) *
             lane8(fw, static_cast<uint32_t>(l));
    }
    em.br(kSiteGroup, w + 1 < g);
  }
  em.audit->scalar_macs += static_cast<uint64_t>(d);
  return acc;
}

int32_t acc_hold_inp(Emitter& em, const LayerCtx& c, int32_t oc) {
  const LayerParams& p = c.p;
  int32_t d = p.in_ch;
  int32_t g = d / 4;
  int32_t acc = 0;
  for (int32_t w = 0; w < g; ++w) {
    uint32_t fw = em.issue(cfu1_op::kFilter, cfu1_op::kFiltRead,
                           static_cast<uint32_t>(oc * g + w), 0);
    uint32_t iw = em.issue(cfu1_op::kInput, cfu1_op::kInpRead,
                           static_cast<uint32_t>(w), 0);
    em.alu(2);
    for (int32_t l = 0; l < 4; ++l) {
      em.mul();
      em.alu(2);
      acc += (static_cast<int32_t>(lane8(iw, static_cast<uint32_t>(l))) +
              p.input_offset) *
             lane8(fw, static_cast<uint32_t>(l));
    }
    em.br(kSiteGroup, w + 1 < g);
  }
  em.audit->scalar_macs += static_cast<uint64_t>(d);
  return acc;
}

int32_t acc_mac4(Emitter& em, const LayerCtx& c, int32_t oc) {
  const LayerParams& p = c.p;
  int32_t g = p.in_ch / 4;
  em.issue(cfu1_op::kCtrl, cfu1_op::kResetAcc, 0, 0);
  uint32_t v = 0;
  for (int32_t w = 0; w < g; ++w) {
    uint32_t fw = em.issue(cfu1_op::kFilter, cfu1_op::kFiltRead,
                           static_cast<uint32_t>(oc * g + w), 0);
    uint32_t iw = em.issue(cfu1_op::kInput, cfu1_op::kInpRead,
                           static_cast<uint32_t>(w), 0);
    v = em.issue(cfu1_op::kAcc, cfu1_op::kMac4, iw, fw);
    ++em.audit->mac4_ops;
    em.br(kSiteGroup, w + 1 < g);
  }
  return static_cast<int32_t>(v);
}

int32_t acc_cfu2(Emitter& em, const LayerCtx& c, int32_t oy, int32_t ox,
                 int32_t oc) {
  const LayerParams& p = c.p;
  em.issue(cfu2_op::kCtrl, cfu2_op::kResetAcc, 0, 0);
  uint32_t v = 0;
  bool any = false;
  bool pack = !p.depthwise && p.in_ch % 4 == 0;
  for_valid_taps(p, oy, ox, [&](int32_t iy, int32_t ix, int32_t ky,
                                int32_t kx) {
    if (pack) {
      uint32_t in_base =
          c.in_addr + static_cast<uint32_t>((iy * p.in_w + ix) * p.in_ch);
      uint32_t f_base =
          c.filt_addr + static_cast<uint32_t>(filt_index(p, oc, ky, kx, 0));
      int32_t in_off = (iy * p.in_w + ix) * p.in_ch;
      int32_t f_off = filt_index(p, oc, ky, kx, 0);
      for (int32_t w = 0; w < p.in_ch / 4; ++w) {
        em.ld(in_base + static_cast<uint32_t>(4 * w), 4);
        em.ld(f_base + static_cast<uint32_t>(4 * w), 4);
        uint32_t iw = pack4(c.in[in_off + 4 * w], c.in[in_off + 4 * w + 1],
                            c.in[in_off + 4 * w + 2],
                            c.in[in_off + 4 * w + 3]);
        uint32_t fw = pack4(c.filt[f_off + 4 * w], c.filt[f_off + 4 * w + 1],
                            c.filt[f_off + 4 * w + 2],
                            c.filt[f_off + 4 * w + 3]);
        v = em.issue(cfu2_op::kMac, cfu2_op::kMac4, iw, fw);
        ++em.audit->mac4_ops;
        any = true;
        em.br(kSiteGroup, true);
      }
    } else {
      int32_t c_lo = p.depthwise ? oc / p.depth_mult() : 0;
      int32_t c_hi = p.depthwise ? c_lo + 1 : p.in_ch;
      for (int32_t ch = c_lo; ch < c_hi; ++ch) {
        uint32_t ia = c.in_addr +
                      static_cast<uint32_t>((iy * p.in_w + ix) * p.in_ch + ch);
        uint32_t fa =
            c.filt_addr + static_cast<uint32_t>(filt_index(p, oc, ky, kx, ch));
        em.ld(ia, 1);
        em.ld(fa, 1);
        uint32_t ib = static_cast<uint8_t>(c.in[ia - c.in_addr]);
        uint32_t fb = static_cast<uint8_t>(c.filt[fa - c.filt_addr]);
        v = em.issue(cfu2_op::kMac, cfu2_op::kMac1, ib, fb);
        ++em.audit->mac1_ops;
        any = true;
        em.br(kSiteMac, true);
      }
    }
  });
  if (!any) v = em.issue(cfu2_op::kCtrl, cfu2_op::kReadAcc, 0, 0);
  return static_cast<int32_t>(v);
}

void emit_feed(Emitter& em, const LayerCtx& c, int32_t pos) {
  const LayerParams& p = c.p;
  int32_t d = p.in_ch;
  int32_t g = d / 4;
  em.begin(c.r_feed);
  em.issue(cfu1_op::kCtrl, cfu1_op::kResetInputWrite, 0, 0);
  em.alu(1);
  for (int32_t w = 0; w < g; ++w) {
    em.ld(c.in_addr + static_cast<uint32_t>(pos * d + 4 * w), 4);
    uint32_t iw = pack4(c.in[pos * d + 4 * w], c.in[pos * d + 4 * w + 1],
                        c.in[pos * d + 4 * w + 2], c.in[pos * d + 4 * w + 3]);
    em.issue(cfu1_op::kInput, cfu1_op::kInpWrite, iw, 0);
    em.br(kSiteFeed, w + 1 < g);
  }
  em.end(c.r_feed);
}

// Uploads the per-channel requantization parameters into a unit bank.
void emit_bank_upload(Emitter& em, const LayerCtx& c, uint32_t params_f3) {
  const LayerParams& p = c.p;
  em.issue(params_f3, pp_op::kResetParams, 0, 0);
  for (int32_t oc = 0; oc < p.out_ch; ++oc) {
    uint32_t i = static_cast<uint32_t>(oc);
    em.ld(c.bias_addr + 4 * i, 4);
    em.issue(params_f3, pp_op::kBias, static_cast<uint32_t>(p.bias[oc]), 0);
    em.ld(c.mult_addr + 4 * i, 4);
    em.issue(params_f3, pp_op::kMult, static_cast<uint32_t>(p.mult[oc]), 0);
    em.ld(c.shift_addr + 4 * i, 4);
    em.issue(params_f3, pp_op::kShift, static_cast<uint32_t>(p.shift[oc]), 0);
    em.br(kSiteParams, oc + 1 < p.out_ch);
  }
  em.issue(params_f3, pp_op::kOutputParams,
           static_cast<uint32_t>(p.output_offset),
           pack_activation(p.act_min, p.act_max));
}

void emit_filter_upload(Emitter& em, const LayerCtx& c) {
  const LayerParams& p = c.p;
  int32_t d = p.in_ch;
  int32_t g = d / 4;
  int32_t words = p.out_ch * g;
  for (int32_t j = 0; j < words; ++j) {
    em.ld(c.filt_addr + static_cast<uint32_t>(4 * j), 4);
    uint32_t fw = pack4(c.filt[4 * j], c.filt[4 * j + 1], c.filt[4 * j + 2],
                        c.filt[4 * j + 3]);
    em.issue(cfu1_op::kFilter, cfu1_op::kFiltWrite, fw, 0);
    em.br(kSiteUpload, j + 1 < words);
  }
}

void emit_cfg(Emitter& em, const LayerCtx& c, const LayerPlan& plan,
              Variant v) {
  const LayerParams& p = c.p;
  em.begin(c.r_cfg);
  em.alu(8);
  if (plan.set_dims) {
    em.issue(cfu1_op::kCtrl, cfu1_op::kSetDims,
             static_cast<uint32_t>(p.in_ch),
             static_cast<uint32_t>(p.out_ch));
  } else if (plan.post_ring) {
    em.issue(cfu1_op::kCtrl, cfu1_op::kSetDims, 4,
             static_cast<uint32_t>(p.out_ch));
  }
  if (plan.set_input_offset) {
    uint32_t f3 = plan.acc == AccStyle::kCfu2 ? cfu2_op::kCtrl
                                              : cfu1_op::kCtrl;
    uint32_t f7 = plan.acc == AccStyle::kCfu2 ? cfu2_op::kSetInputOffset
                                              : cfu1_op::kSetInputOffset;
    em.issue(f3, f7, static_cast<uint32_t>(p.input_offset), 0);
  }
  if (plan.upload_bank) emit_bank_upload(em, c, plan.bank_f3);
  if (plan.upload_filter) emit_filter_upload(em, c);
  (void)v;
  em.end(c.r_cfg);
}

int8_t emit_post(Emitter& em, const LayerCtx& c, const LayerPlan& plan,
                 int32_t acc, int32_t oc) {
  int8_t out;
  em.begin(c.r_post);
  switch (plan.post) {
    case PostStyle::kScalar:
      emit_scalar_post(em, c, oc);
      out = static_cast<int8_t>(scalar_post_value(c.p, acc, oc));
      break;
    case PostStyle::kPpUnit:
      out = static_cast<int8_t>(
          em.issue(pp_op::kProcess, 0, static_cast<uint32_t>(acc), 0));
      break;
    case PostStyle::kCfu1:
      out = static_cast<int8_t>(em.issue(cfu1_op::kAcc, cfu1_op::kProcess,
                                         static_cast<uint32_t>(acc), 0));
      break;
    case PostStyle::kCfu2Acc:
      out = static_cast<int8_t>(em.issue(cfu2_op::kProcessAcc, 0, 0, 0));
      break;
    case PostStyle::kFused:
    default:
      out = 0;
      break;
  }
  em.end(c.r_post);
  return out;
}

void emit_write(Emitter& em, const LayerCtx& c, uint32_t offset,
                uint16_t bytes, bool more) {
  em.begin(c.r_write);
  em.st(c.out_addr + offset, bytes);
  em.alu(1);
  em.br(kSiteOuter, more);
  em.end(c.r_write);
}

void emit_layer(Emitter& em, const LayerCtx& c, const LayerPlan& plan,
                Variant v) {
  const LayerParams& p = c.p;
  emit_cfg(em, c, plan, v);
  int32_t oh = p.out_h(), ow = p.out_w(), o = p.out_ch;
  for (int32_t oy = 0; oy < oh; ++oy) {
    for (int32_t ox = 0; ox < ow; ++ox) {
      int32_t pos = oy * ow + ox;
      if (plan.feed) emit_feed(em, c, pos);
      if (plan.acc == AccStyle::kRun4 || plan.acc == AccStyle::kRun4Ov) {
        uint32_t f7 = plan.acc == AccStyle::kRun4 ? cfu1_op::kRun4Pp
                                                  : cfu1_op::kRun4PpOv;
        int32_t g = p.in_ch / 4;
        for (int32_t oc0 = 0; oc0 < o; oc0 += 4) {
          em.begin(c.r_acc);
          em.issue(cfu1_op::kRun, f7, 0, 0);
          em.audit->mac4_ops += static_cast<uint64_t>(4 * g);
          em.end(c.r_acc);
          em.begin(c.r_write);
          uint32_t word = em.issue(cfu1_op::kRun, cfu1_op::kDrain, 0, 0);
          em.st(c.out_addr + static_cast<uint32_t>(pos * o + oc0), 4);
          em.alu(1);
          bool more = oc0 + 4 < o || pos + 1 < oh * ow;
          em.br(kSiteOuter, more);
          em.end(c.r_write);
          for (uint32_t l = 0; l < 4; ++l)
            c.out[pos * o + oc0 + static_cast<int32_t>(l)] = lane8(word, l);
        }
        continue;
      }
      for (int32_t oc = 0; oc < o; ++oc) {
        int32_t acc = 0;
        int8_t value = 0;
        em.begin(c.r_acc);
        switch (plan.acc) {
          case AccStyle::kScalarLoop:
            acc = acc_scalar_loop(em, c, oy, ox, oc);
            break;
          case AccStyle::kUnrolled:
            acc = acc_unrolled(em, c, pos, oc);
            break;
          case AccStyle::kHoldFilt:
            acc = acc_hold_filt(em, c, pos, oc);
            break;
          case AccStyle::kHoldInp:
            acc = acc_hold_inp(em, c, oc);
            break;
          case AccStyle::kMac4:
            acc = acc_mac4(em, c, oc);
            break;
          case AccStyle::kRun1:
            acc = static_cast<int32_t>(
                em.issue(cfu1_op::kRun, cfu1_op::kRunOne, 0, 0));
            em.audit->mac4_ops += static_cast<uint64_t>(p.in_ch / 4);
            break;
          case AccStyle::kRunPp:
            value = static_cast<int8_t>(
                em.issue(cfu1_op::kRun, cfu1_op::kRunOnePp, 0, 0));
            em.audit->mac4_ops += static_cast<uint64_t>(p.in_ch / 4);
            break;
          case AccStyle::kCfu2:
            acc = acc_cfu2(em, c, oy, ox, oc);
            break;
          default:
            break;
        }
        em.end(c.r_acc);
        if (plan.post != PostStyle::kFused)
          value = emit_post(em, c, plan, acc, oc);
        bool more = oc + 1 < o || pos + 1 < oh * ow;
        emit_write(em, c, static_cast<uint32_t>(pos * o + oc), 1, more);
        c.out[pos * o + oc] = value;
      }
    }
  }
}

uint32_t align4(uint32_t v) { return (v + 3u) & ~3u; }

}  // namespace

const std::vector<VariantInfo>& all_variants() { return table(); }

const VariantInfo& variant_info(Variant v) {
  return table()[static_cast<size_t>(v)];
}

Variant variant_from_string(const std::string& name) {
  for (const VariantInfo& vi : table())
    if (name == vi.name) return vi.variant;
  throw ParseError("unknown variant '" + name + "'");
}

bool variant_supported(Variant v, CfuKind kind) {
  uint32_t have = cfu_capabilities(kind);
  uint32_t need = variant_info(v).required_caps;
  return (need & ~have) == 0;
}

Variant best_variant(CfuKind kind) {
  for (Variant v : kPolicyRank)
    if (variant_supported(v, kind)) return v;
  return Variant::kBaseline;
}

MemLayout plan_layout(const CpuConfig& config, const WorkloadSpec& w) {
  MemLayout lay;
  lay.code_base =
      config.code_region == Placement::kFlash ? kFlashBase : kSramBase;
  uint32_t wbase = config.weights_region == Placement::kFlash
                       ? kFlashBase + kFlashWeightsBase
                       : kSramBase + kSramWeightsOff;
  lay.weights_base = wbase;
  uint32_t off = 0;
  for (size_t k = 0; k < w.layers.size(); ++k) {
    const LayerParams& p = w.layers[k];
    lay.filter_addr.push_back(wbase + off);
    off += align4(static_cast<uint32_t>(p.filter_count()));
    lay.bias_addr.push_back(wbase + off);
    off += 4 * static_cast<uint32_t>(p.out_ch);
    lay.mult_addr.push_back(wbase + off);
    off += 4 * static_cast<uint32_t>(p.out_ch);
    lay.shift_addr.push_back(wbase + off);
    off += 4 * static_cast<uint32_t>(p.out_ch);
  }
  lay.arena0 = kSramBase + kArenaOff;
  uint32_t max_act = static_cast<uint32_t>(max_activation_bytes(w));
  lay.arena1 = lay.arena0 + align4(std::max(max_act, 64u));
  return lay;
}

VariantRun run_variant(Variant v, const WorkloadSpec& w,
                       const CpuConfig& config, CfuModel* cfu,
                       TraceSink& sink) {
  const VariantInfo& vi = variant_info(v);
  uint32_t have = cfu ? cfu_capabilities(config.cfu) : 0;
  if ((vi.required_caps & ~have) != 0)
    throw InfeasibleError(std::string("variant ") + vi.name +
                          " needs unit capabilities the attached unit (" +
                          to_string(config.cfu) + ") does not provide");
  MemLayout lay = plan_layout(config, w);
  VariantRun run;
  run.audits.resize(w.layers.size());
  if (cfu) cfu->reset();

  Emitter em{sink, cfu, lay.code_base, nullptr};
  std::vector<int8_t> cur = w.input;
  for (size_t k = 0; k < w.layers.size(); ++k) {
    const LayerParams& p = w.layers[k];
    std::vector<int8_t> next(static_cast<size_t>(p.output_count()));
    LayerCtx c{p,
               cur.data(),
               w.filters[k].data(),
               next.data(),
               lay.layer_in_addr(k),
               lay.layer_out_addr(k),
               lay.filter_addr[k],
               lay.bias_addr[k],
               lay.mult_addr[k],
               lay.shift_addr[k],
               "l" + std::to_string(k) + "/cfg",
               "l" + std::to_string(k) + "/feed",
               "l" + std::to_string(k) + "/acc",
               "l" + std::to_string(k) + "/post",
               "l" + std::to_string(k) + "/write"};
    em.audit = &run.audits[k];
    emit_layer(em, c, plan_for(v, p), v);
    cur = std::move(next);
  }
  run.outputs = std::move(cur);
  return run;
}

}  // namespace cfusim
