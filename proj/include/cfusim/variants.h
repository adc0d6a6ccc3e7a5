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
// Kernel variants: per-layer instrumented emitters that compute bit-exact
// outputs (through the attached unit's model where one is used) while
// streaming the micro-event trace that prices the run. A variant never
// changes results, only how the work is issued; layers a variant cannot
// accelerate fall back to the plain software profile.

#ifndef CFUSIM_VARIANTS_H_
#define CFUSIM_VARIANTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/cfu.h"
#include "cfusim/config.h"
#include "cfusim/trace.h"
#include "cfusim/workloads.h"

namespace cfusim {

enum class Variant : uint8_t {
  kBaseline = 0,      // portable scalar loops
  kKwsBaseline,       // scalar loops, audio-stack build
  kKwsFastmult,       // same code, built for a single-cycle multiplier
  kSwSpec,            // software-specialized 1x1 path (unrolled by 4)
  kCfuPostproc,       // requantize/clamp offloaded per output
  kCfuHoldFilt,       // filters staged in unit scratch, software MACs
  kCfuHoldInp,        // filters and inputs staged, software MACs
  kCfuMac4,           // packed 4-lane MAC issues against staged data
  kKwsMacconv,        // streaming MAC unit for conv and depthwise
  kKwsPostproc,       // streaming MACs plus on-unit postprocessing
  kMac4Run1,          // run engine computes one channel per issue
  kInclPostproc,      // run engine fuses postprocessing into the issue
  kMac4Run4,          // four channels per issue through an output queue
  kOverlap,           // pipelined engine overlaps compute with drain
};

inline constexpr size_t kVariantCount = 14;

struct VariantInfo {
  Variant variant;
  const char* name;
  uint32_t code_bytes;     // static footprint of the compiled kernel
  uint32_t required_caps;  // CfuCap mask the attached unit must provide
};

// All variants in enum order.
const std::vector<VariantInfo>& all_variants();
const VariantInfo& variant_info(Variant v);

// Throws ParseError for unknown names.
Variant variant_from_string(const std::string& name);

bool variant_supported(Variant v, CfuKind kind);

// Most specialized supported variant for the attached unit.
Variant best_variant(CfuKind kind);

// Address plan for one run. Code and weights live where the config places
// them; activations ping-pong between two SRAM arena buffers.
struct MemLayout {
  uint32_t code_base = 0;
  uint32_t weights_base = 0;
  uint32_t arena0 = 0;
  uint32_t arena1 = 0;
  // Absolute addresses per layer: filter bytes and the packed per-channel
  // parameter words (bias, mult, shift).
  std::vector<uint32_t> filter_addr;
  std::vector<uint32_t> bias_addr;
  std::vector<uint32_t> mult_addr;
  std::vector<uint32_t> shift_addr;

  uint32_t layer_in_addr(size_t layer) const {
    return layer % 2 == 0 ? arena0 : arena1;
  }
  uint32_t layer_out_addr(size_t layer) const {
    return layer % 2 == 0 ? arena1 : arena0;
  }
};

MemLayout plan_layout(const CpuConfig& config, const WorkloadSpec& w);

// Per-layer issue accounting for conservation checks: every analytic MAC is
// either part of a packed 4-lane op, a single-lane unit op, or a software
// multiply.
struct LayerAudit {
  uint64_t mac4_ops = 0;
  uint64_t mac1_ops = 0;
  uint64_t scalar_macs = 0;
};

struct VariantRun {
  std::vector<int8_t> outputs;       // final layer tensor
  std::vector<LayerAudit> audits;    // one per layer
};

// Runs the whole workload under the variant, streaming trace events into
// sink. cfu may be null only for variants with no required capabilities.
// Throws InfeasibleError when the attached unit lacks a required
// capability. Region names follow "l<k>/<cfg|feed|acc|post|write>".
VariantRun run_variant(Variant v, const WorkloadSpec& w,
                       const CpuConfig& config, CfuModel* cfu,
                       TraceSink& sink);

}  // namespace cfusim

#endif  // CFUSIM_VARIANTS_H_
