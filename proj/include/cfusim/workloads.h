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
// TMDL workload files and the two bundled desk-scale workloads.
//
// TMDL text format: first line "TMDL 1"; then per layer:
//   layer <conv2d|dwconv2d> in=H,W,C out=OC kernel=KH,KW stride=S
//         pad=<same|valid> in_off=I out_off=O act=MIN,MAX
//         mult=<prng:SEED|list:v,...> shift=list:v,... bias=list:v,...
//         weights=<prng:SEED|hex:...>
// plus one "input prng:SEED" or "input hex:..." line. '#' starts a comment.
// prng streams are SplitMix64 (see prng.h): weights and input emit the low
// byte as int8; multipliers emit 2^30 + (value mod 2^30).

#ifndef CFUSIM_WORKLOADS_H_
#define CFUSIM_WORKLOADS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/kernels.h"

namespace cfusim {

struct WorkloadSpec {
  std::string name;
  std::vector<LayerParams> layers;
  std::vector<std::vector<int8_t>> filters;  // one buffer per layer
  std::vector<int8_t> input;
  bool has_golden = false;
  uint64_t golden_digest = 0;
};

// Fully validates and materializes every data source. Throws ParseError
// with "tmdl line N: ..." messages.
WorkloadSpec parse_tmdl(const std::string& text, const std::string& name);

// Loads path and, when "<path minus extension>.golden" exists, its digest.
WorkloadSpec load_tmdl_file(const std::string& path);

// FNV-1a 64-bit over a byte stream.
uint64_t fnv1a64(const void* data, size_t n);

// 16 lowercase hex digits.
std::string digest_hex(uint64_t digest);

// Runs every layer through the reference kernels; returns the final
// layer's output tensor bytes.
std::vector<int8_t> reference_run(const WorkloadSpec& w);

struct GoldenVerdict {
  bool pass = false;
  int64_t first_diff = -1;  // byte offset of first mismatch, -1 if none
  uint64_t expected_digest = 0;
  uint64_t actual_digest = 0;
};

// Digest-checks outputs against the stored golden; on digest mismatch the
// reference is re-run to locate the first differing byte. Throws
// GoldenMismatchError-compatible info via the verdict; throws ParseError
// if the spec carries no golden.
GoldenVerdict golden_check(const WorkloadSpec& w,
                           const std::vector<int8_t>& outputs);

// "<digest hex>\n" files stored beside workloads as name.golden.
uint64_t read_golden_file(const std::string& path);
void write_golden_file(const std::string& path, uint64_t digest);

// Bundled workloads. Texts are byte-identical to the files shipped under
// data/; a test enforces that.
const std::string& mnv2_slice_text();
const std::string& kws_slice_text();
std::vector<std::string> bundled_workload_names();
WorkloadSpec bundled_workload(const std::string& name);  // with golden set

// Sizing helpers for placement and arena planning.
uint64_t total_weight_bytes(const WorkloadSpec& w);   // filters + channel params
uint64_t max_activation_bytes(const WorkloadSpec& w);

}  // namespace cfusim

#endif  // CFUSIM_WORKLOADS_H_
