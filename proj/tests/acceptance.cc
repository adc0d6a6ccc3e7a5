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
// Acceptance gate: ten numbered end-to-end checks, one pass/fail line
// each. Exit status is nonzero when any criterion fails. Oracles here are
// written independently of the library implementations they check.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cfusim/bench.h"
#include "cfusim/cfu.h"
#include "cfusim/costmodel.h"
#include "cfusim/dse.h"
#include "cfusim/isa.h"
#include "cfusim/kernels.h"
#include "cfusim/prng.h"
#include "cfusim/variants.h"
#include "cfusim/workloads.h"

using namespace cfusim;

namespace {

constexpr int32_t kMin32 = std::numeric_limits<int32_t>::min();
constexpr int32_t kMax32 = std::numeric_limits<int32_t>::max();

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::string squeeze(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

// --- criterion 1: instruction encoding --------------------------------------

Outcome check_encoding() {
  const uint32_t words[4] = {0x00812783, 0x00D7878B, 0x00D7978B, 0x00F12423};
  const char* listing[4] = {
      "400001a0:       00812783            lw        a5,8(sp)",
      "400001a4:       00d7878b            cfu[0,0]  a5, a5, a3",
      "400001a8:       00d7978b            cfu[1,0]  a5, a5, a3",
      "400001ac:       00f12423            sw        a5,8(sp)",
  };
  for (int i = 0; i < 4; ++i) {
    char line[128];
    std::snprintf(line, sizeof(line), "%08x:  %08x  %s",
                  0x400001a0u + 4u * static_cast<uint32_t>(i), words[i],
                  disassemble(words[i]).c_str());
    if (squeeze(line) != squeeze(listing[i])) {
      return fail(std::string("listing line ") + std::to_string(i) +
                  " renders as '" + line + "'");
    }
  }

  Prng64 rng(0x1517);
  for (uint32_t f3 = 0; f3 < 8; ++f3) {
    for (uint32_t f7 = 0; f7 < 128; ++f7) {
      for (int i = 0; i < 1000; ++i) {
        CfuFields f{f3, f7, static_cast<uint32_t>(rng.next_below(32)),
                    static_cast<uint32_t>(rng.next_below(32)),
                    static_cast<uint32_t>(rng.next_below(32))};
        Decoded d = decode(encode_cfu(f));
        if (d.op != Op::kCfu || d.funct3 != f3 || d.funct7 != f7 ||
            d.rd != f.rd || d.rs1 != f.rs1 || d.rs2 != f.rs2) {
          char buf[96];
          std::snprintf(buf, sizeof(buf),
                        "round-trip failed for funct3=%u funct7=%u "
                        "rd=%u rs1=%u rs2=%u",
                        f3, f7, f.rd, f.rs1, f.rs2);
          return fail(buf);
        }
      }
    }
  }
  return {};
}

// --- criteria 2 and 3: kernel and requantization oracles ---------------------

int32_t oracle_srdhm(int32_t a, int32_t b) {
  if (a == kMin32 && b == kMin32) return kMax32;
  // trunc((p + 1 - 2^30) / 2^31) for negative p equals
  // floor((p + 2^30) / 2^31), so one floor covers both signs.
  int64_t p = static_cast<int64_t>(a) * b;
  return static_cast<int32_t>((p + (1ll << 30)) >> 31);
}

int32_t oracle_rdbpot(int32_t x, int32_t exponent) {
  int64_t d = 1ll << exponent;
  if (x >= 0) return static_cast<int32_t>((x + d / 2) / d);
  return static_cast<int32_t>(-((-static_cast<int64_t>(x) + d / 2) / d));
}

int32_t oracle_mbqm(int32_t x, int32_t mult, int32_t shift) {
  int64_t shifted = static_cast<int64_t>(x) << (shift > 0 ? shift : 0);
  if (shifted > kMax32) shifted = kMax32;
  if (shifted < kMin32) shifted = kMin32;
  return oracle_rdbpot(oracle_srdhm(static_cast<int32_t>(shifted), mult),
                       shift < 0 ? -shift : 0);
}

int8_t oracle_requant(const LayerParams& p, int64_t acc, int32_t oc) {
  uint32_t biased = static_cast<uint32_t>(static_cast<uint64_t>(acc)) +
                    static_cast<uint32_t>(p.bias[oc]);
  int32_t v =
      oracle_mbqm(static_cast<int32_t>(biased), p.mult[oc], p.shift[oc]) +
      p.output_offset;
  if (v < p.act_min) v = p.act_min;
  if (v > p.act_max) v = p.act_max;
  return static_cast<int8_t>(v);
}

std::vector<int8_t> oracle_layer(const LayerParams& p,
                                 const std::vector<int8_t>& input,
                                 const std::vector<int8_t>& filter) {
  int32_t oh = p.out_h(), ow = p.out_w();
  std::vector<int8_t> out(static_cast<size_t>(oh) * ow * p.out_ch);
  int32_t dm = p.depth_mult();
  for (int32_t oy = 0; oy < oh; ++oy) {
    for (int32_t ox = 0; ox < ow; ++ox) {
      for (int32_t oc = 0; oc < p.out_ch; ++oc) {
        int64_t acc = 0;
        for (int32_t ky = 0; ky < p.kh; ++ky) {
          for (int32_t kx = 0; kx < p.kw; ++kx) {
            int32_t iy = oy * p.stride - p.pad_top() + ky;
            int32_t ix = ox * p.stride - p.pad_left() + kx;
            if (iy < 0 || iy >= p.in_h || ix < 0 || ix >= p.in_w) continue;
            if (p.depthwise) {
              int32_t v =
                  input[(static_cast<size_t>(iy) * p.in_w + ix) * p.in_ch +
                        oc / dm];
              acc += static_cast<int64_t>(v + p.input_offset) *
                     filter[(static_cast<size_t>(ky) * p.kw + kx) * p.out_ch +
                            oc];
            } else {
              for (int32_t ic = 0; ic < p.in_ch; ++ic) {
                int32_t v =
                    input[(static_cast<size_t>(iy) * p.in_w + ix) * p.in_ch +
                          ic];
                acc += static_cast<int64_t>(v + p.input_offset) *
                       filter[((static_cast<size_t>(oc) * p.kh + ky) * p.kw +
                               kx) *
                                  p.in_ch +
                              ic];
              }
            }
          }
        }
        out[(static_cast<size_t>(oy) * ow + ox) * p.out_ch + oc] =
            oracle_requant(p, acc, oc);
      }
    }
  }
  return out;
}

std::vector<int8_t> rand_buf(Prng64* rng, size_t n) {
  std::vector<int8_t> v(n);
  for (auto& b : v) b = rng->next_int8();
  return v;
}

LayerParams random_layer(Prng64* rng, bool depthwise, bool pointwise) {
  LayerParams p;
  p.depthwise = depthwise;
  p.in_h = 1 + static_cast<int32_t>(rng->next_below(7));
  p.in_w = 1 + static_cast<int32_t>(rng->next_below(7));
  p.in_ch = 1 + static_cast<int32_t>(rng->next_below(8));
  if (pointwise) {
    p.kh = p.kw = 1;
    p.stride = 1;
  } else {
    p.kh = 1 + static_cast<int32_t>(rng->next_below(3));
    p.kw = 1 + static_cast<int32_t>(rng->next_below(3));
    p.stride = 1 + static_cast<int32_t>(rng->next_below(2));
  }
  p.out_ch = depthwise
                 ? p.in_ch * (1 + static_cast<int32_t>(rng->next_below(3)))
                 : 1 + static_cast<int32_t>(rng->next_below(8));
  p.same_pad = rng->next_below(2) == 0;
  p.input_offset = static_cast<int32_t>(rng->next_below(256)) - 128;
  p.output_offset = static_cast<int32_t>(rng->next_below(256)) - 128;
  for (int32_t c = 0; c < p.out_ch; ++c) {
    p.bias.push_back(static_cast<int32_t>(rng->next_below(1u << 21)) -
                     (1 << 20));
    p.mult.push_back(static_cast<int32_t>(
        0x40000000u + static_cast<uint32_t>(rng->next_below(1u << 30))));
    p.shift.push_back(2 - static_cast<int32_t>(rng->next_below(7)));
  }
  if (!p.same_pad) {
    if (p.in_h < p.kh) p.in_h = p.kh;
    if (p.in_w < p.kw) p.in_w = p.kw;
  }
  return p;
}

using KernelFn = void (*)(const LayerParams&, const int8_t*, const int8_t*,
                          int8_t*);

Outcome check_one_kernel(const char* label, KernelFn fn, uint64_t seed,
                         bool depthwise, bool pointwise) {
  Prng64 rng(seed);
  for (int i = 0; i < 1000; ++i) {
    LayerParams p = random_layer(&rng, depthwise, pointwise);
    auto input = rand_buf(&rng, static_cast<size_t>(p.input_count()));
    auto filter = rand_buf(&rng, static_cast<size_t>(p.filter_count()));
    std::vector<int8_t> out(static_cast<size_t>(p.output_count()));
    fn(p, input.data(), filter.data(), out.data());
    if (out != oracle_layer(p, input, filter)) {
      return fail(std::string(label) + " diverged from the oracle on "
                  "instance " + std::to_string(i));
    }
  }
  return {};
}

Outcome check_kernels() {
  Outcome o = check_one_kernel("conv2d_int8", conv2d_int8, 21, false, false);
  if (!o.ok) return o;
  o = check_one_kernel("depthwise_conv2d_int8", depthwise_conv2d_int8, 22,
                       true, false);
  if (!o.ok) return o;
  return check_one_kernel("conv2d_1x1_specialized", conv2d_1x1_specialized,
                          23, false, true);
}

Outcome check_requant() {
  if (srdhm(kMin32, kMin32) != kMax32) {
    return fail("srdhm saturation edge did not clamp");
  }
  Prng64 rng(0xF1D0);
  for (int i = 0; i < 100000; ++i) {
    int32_t a = static_cast<int32_t>(rng.next());
    int32_t b = static_cast<int32_t>(rng.next());
    if (srdhm(a, b) != oracle_srdhm(a, b)) {
      return fail("srdhm(" + std::to_string(a) + ", " + std::to_string(b) +
                  ") diverged");
    }
    int32_t e = static_cast<int32_t>(rng.next_below(32));
    if (rdbpot(a, e) != oracle_rdbpot(a, e)) {
      return fail("rdbpot(" + std::to_string(a) + ", " + std::to_string(e) +
                  ") diverged");
    }
    int32_t s = static_cast<int32_t>(rng.next_below(40)) - 31;
    if (mbqm(a, b, s) != oracle_mbqm(a, b, s)) {
      return fail("mbqm(" + std::to_string(a) + ", " + std::to_string(b) +
                  ", " + std::to_string(s) + ") diverged");
    }
  }
  return {};
}

// --- criterion 4: unit models vs twins ---------------------------------------

// Forwards to a real twin but corrupts one issue's result value.
class FaultyTwin : public CfuModel {
 public:
  FaultyTwin(std::unique_ptr<CfuModel> inner, size_t fault_at)
      : inner_(std::move(inner)), fault_at_(fault_at) {}
  const char* name() const override { return inner_->name(); }
  ResourceCost resources() const override { return inner_->resources(); }
  CfuIssueResult issue(uint32_t funct3, uint32_t funct7, uint32_t rs1,
                       uint32_t rs2) override {
    CfuIssueResult r = inner_->issue(funct3, funct7, rs1, rs2);
    if (count_++ == fault_at_) r.value ^= 0x40;
    return r;
  }
  void reset() override {
    inner_->reset();
    count_ = 0;
  }

 private:
  std::unique_ptr<CfuModel> inner_;
  size_t fault_at_;
  size_t count_ = 0;
};

Outcome check_twins() {
  const CfuKind kinds[] = {CfuKind::kDemo, CfuKind::kPostproc, CfuKind::kMac4,
                           CfuKind::kCfu1, CfuKind::kCfu2};
  for (CfuKind kind : kinds) {
    auto a = make_cfu(kind);
    auto b = make_cfu_twin(kind);
    auto stream = random_issue_stream(kind, 0xACCE5, 10000);
    int64_t diverged = check_equivalence(*a, *b, stream);
    if (diverged != -1) {
      return fail(std::string(a->name()) + " diverged from its twin at "
                  "issue " + std::to_string(diverged));
    }
    constexpr size_t kFaultAt = 4242;
    FaultyTwin faulty(make_cfu_twin(kind), kFaultAt);
    int64_t caught = check_equivalence(*a, faulty, stream);
    if (caught != static_cast<int64_t>(kFaultAt)) {
      return fail(std::string(a->name()) + " planted fault reported at " +
                  std::to_string(caught) + " instead of " +
                  std::to_string(kFaultAt));
    }
  }
  return {};
}

// --- criterion 5: golden outputs for every variant ---------------------------

CfuKind host_kind(Variant v) {
  uint32_t need = variant_info(v).required_caps;
  for (CfuKind k : {CfuKind::kNone, CfuKind::kPostproc, CfuKind::kMac4,
                    CfuKind::kCfu2, CfuKind::kCfu1}) {
    if ((need & ~cfu_capabilities(k)) == 0) return k;
  }
  return CfuKind::kCfu1;
}

Outcome check_goldens() {
  for (const std::string& wl : bundled_workload_names()) {
    WorkloadSpec w = bundled_workload(wl);
    for (const VariantInfo& vi : all_variants()) {
      CpuConfig config;
      config.cfu = host_kind(vi.variant);
      auto cfu = make_cfu(config.cfu);
      VectorSink sink;
      VariantRun run = run_variant(vi.variant, w, config, cfu.get(), sink);
      GoldenVerdict verdict = golden_check(w, run.outputs);
      if (!verdict.pass) {
        return fail(std::string(vi.name) + " on " + wl +
                    " diverged at byte " + std::to_string(verdict.first_diff));
      }
    }
  }
  return {};
}

// --- criterion 6: image-model ladder -----------------------------------------

uint64_t region_cycles(const CycleReport& report, const std::string& name) {
  for (const RegionStat& r : report.regions) {
    if (r.name == name) return r.cycles;
  }
  return 0;
}

Outcome check_mnv2_ladder() {
  WorkloadSpec w = bundled_workload("mnv2_slice");
  std::vector<LadderRow> rows = run_ladder(mnv2_ladder(), w, TimingParams{});
  if (rows.size() != 10) {
    return fail("expected 10 rungs, got " + std::to_string(rows.size()));
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].result.report.total_cycles >=
        rows[i - 1].result.report.total_cycles) {
      return fail(rows[i].stage.label + " did not reduce cycles over " +
                  rows[i - 1].stage.label);
    }
  }

  const Variant fast[] = {Variant::kMac4Run1, Variant::kInclPostproc,
                          Variant::kMac4Run4, Variant::kOverlap};
  for (Variant v : fast) {
    const LadderRow* row = nullptr;
    for (const LadderRow& r : rows) {
      if (r.stage.variant == v) row = &r;
    }
    if (row == nullptr) {
      return fail(std::string(variant_info(v).name) + " missing from ladder");
    }
    uint64_t acc_cycles = 0;
    uint64_t macs = 0;
    for (size_t k = 0; k < row->result.audits.size(); ++k) {
      const LayerAudit& a = row->result.audits[k];
      if (a.mac4_ops == 0 || a.scalar_macs != 0) continue;
      uint64_t layer_macs = static_cast<uint64_t>(w.layers[k].macs());
      if (a.mac4_ops != (layer_macs + 3) / 4) {
        return fail(std::string(variant_info(v).name) + " layer " +
                    std::to_string(k) + " issued " +
                    std::to_string(a.mac4_ops) + " packed macs, expected " +
                    std::to_string((layer_macs + 3) / 4));
      }
      acc_cycles +=
          region_cycles(row->result.report, "l" + std::to_string(k) + "/acc");
      macs += layer_macs;
    }
    if (macs == 0) {
      return fail(std::string(variant_info(v).name) +
                  " ran no layers on the unit engine");
    }
    if (acc_cycles >= macs) {
      return fail(std::string(variant_info(v).name) + " accumulation took " +
                  std::to_string(acc_cycles) + " cycles for " +
                  std::to_string(macs) + " macs");
    }
  }
  return {};
}

// --- criterion 7: audio-model ladder -----------------------------------------

Outcome check_kws_ladder() {
  WorkloadSpec w = bundled_workload("kws_slice");
  TimingParams timing;
  std::vector<LadderRow> rows = run_ladder(kws_ladder(), w, timing);
  if (rows.size() != 7) {
    return fail("expected 7 rungs, got " + std::to_string(rows.size()));
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].result.report.total_cycles >=
        rows[i - 1].result.report.total_cycles) {
      return fail(rows[i].stage.label + " did not reduce cycles over " +
                  rows[i - 1].stage.label);
    }
  }

  const CycleReport& before = rows[3].result.report;  // iterative multiplier
  const CycleReport& after = rows[4].result.report;   // single-cycle
  if (before.muls != after.muls) {
    return fail("multiplier stage changed the multiply count");
  }
  uint64_t saving = before.total_cycles - after.total_cycles;
  uint64_t expect =
      before.muls * (timing.mul_iterative - timing.mul_single);
  if (saving != expect) {
    return fail("multiplier stage saved " + std::to_string(saving) +
                " cycles, expected " + std::to_string(expect));
  }
  return {};
}

// --- criterion 8: small-board resource gate ----------------------------------

Outcome check_board_gate() {
  const Board& fomu = find_board(builtin_boards(), "fomu");
  CpuConfig config;
  config.board = "fomu";
  config.multiplier = Multiplier::kSingleCycle;
  config.cfu = CfuKind::kCfu2;
  ResourceEstimate est = estimate(config);
  if (est.dsps != 8) {
    return fail("multiplier plus streaming unit uses " +
                std::to_string(est.dsps) + " dsps, expected 8");
  }
  if (!feasible(est, fomu).feasible) {
    return fail("8-dsp configuration reported infeasible");
  }

  config.cfu = CfuKind::kCfu1;
  FeasibilityVerdict verdict = feasible(estimate(config), fomu);
  if (verdict.feasible) {
    return fail("oversized unit reported feasible");
  }
  bool named = false;
  for (const std::string& v : verdict.violations) {
    if (v == "dsps 12 > 8") named = true;
  }
  if (!named) {
    return fail("dsp violation missing from verdict");
  }
  return {};
}

// --- criterion 9: exploration correctness ------------------------------------

bool front_dominated_by(const DseResult& sampled, const DseResult& exact) {
  for (size_t i : sampled.front) {
    const Trial& s = sampled.trials[i];
    bool covered = false;
    for (size_t j : exact.front) {
      const Trial& e = exact.trials[j];
      if (e.estimate.luts <= s.estimate.luts && e.cycles <= s.cycles) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

Outcome check_dse() {
  double hv1 = hypervolume_2d({{1.0, 1.0}}, {3.0, 3.0});
  double hv2 = hypervolume_2d({{1.0, 2.0}, {2.0, 1.0}}, {3.0, 3.0});
  if (hv1 != 4.0 || hv2 != 3.0) {
    return fail("hypervolume fixtures gave " + std::to_string(hv1) + " and " +
                std::to_string(hv2));
  }

  SearchSpace space =
      load_space_file(std::string(CFUSIM_DATA_DIR) + "/small36.space");
  WorkloadSpec w = bundled_workload("mnv2_slice");
  DseOptions exact_opt;
  exact_opt.algo = SearchAlgo::kExhaustive;
  DseResult exact = run_dse(space, w, exact_opt);

  DseOptions rnd_opt;
  rnd_opt.algo = SearchAlgo::kRandom;
  rnd_opt.budget = 36;
  rnd_opt.seed = 11;
  DseResult sampled = run_dse(space, w, rnd_opt);
  if (exact.trials.size() != 36 || sampled.trials.size() != 36) {
    return fail("expected 36 trials from both searches");
  }
  auto points = [](const DseResult& r) {
    std::vector<std::pair<uint64_t, uint64_t>> pts;
    for (size_t i : r.front) {
      pts.push_back({r.trials[i].estimate.luts, r.trials[i].cycles});
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  if (points(sampled) != points(exact)) {
    return fail("full-budget sampled front differs from exhaustive front");
  }
  if (!front_dominated_by(sampled, exact)) {
    return fail("a sampled front point escapes the exhaustive front");
  }

  DseResult again = run_dse(space, w, rnd_opt);
  if (trials_csv(space, sampled) != trials_csv(space, again)) {
    return fail("same-seed search produced different csv bytes");
  }
  return {};
}

// --- criterion 10: richer-space dominance ------------------------------------

Outcome check_default_space() {
  SearchSpace space =
      load_space_file(std::string(CFUSIM_DATA_DIR) + "/default.space");
  WorkloadSpec w = bundled_workload("mnv2_slice");
  DseOptions opt;
  opt.algo = SearchAlgo::kExhaustive;
  DseResult result = run_dse(space, w, opt);
  if (result.trials.size() != 512) {
    return fail("expected 512 trials, got " +
                std::to_string(result.trials.size()));
  }
  for (const Trial& a : result.trials) {
    if (!a.feasible || a.config.cfu != CfuKind::kCfu2) continue;
    for (const Trial& b : result.trials) {
      if (!b.feasible || b.config.cfu != CfuKind::kNone) continue;
      if (a.estimate.luts < b.estimate.luts && a.cycles < b.cycles) {
        return {};
      }
    }
  }
  return fail("no accelerated configuration strictly dominates a plain one");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* what;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "pinned disassembly and 1024x1000 encode/decode round-trip",
       check_encoding},
      {2, "int8 kernels match an independent naive oracle", check_kernels},
      {3, "requantization primitives match the formula oracle", check_requant},
      {4, "unit models match their twins and a planted fault is caught",
       check_twins},
      {5, "every variant reproduces the golden outputs", check_goldens},
      {6, "image ladder strictly descends and packed issues hit the bound",
       check_mnv2_ladder},
      {7, "audio ladder strictly descends with the exact multiplier saving",
       check_kws_ladder},
      {8, "small-board estimate pins the dsp budget", check_board_gate},
      {9, "exhaustive and sampled fronts agree with deterministic csv",
       check_dse},
      {10, "default space holds a strictly dominating accelerated config",
       check_default_space},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(e.what());
    }
    if (o.ok) {
      std::printf("[PASS] criterion %d: %s\n", c.number, c.what);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%s)\n", c.number, c.what,
                  o.detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
