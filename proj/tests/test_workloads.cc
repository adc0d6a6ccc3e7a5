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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cfusim/error.h"
#include "cfusim/prng.h"
#include "cfusim/workloads.h"
#include "doctest.h"

using namespace cfusim;

namespace {

constexpr uint64_t kMnv2Digest = 0x1ef286b0ddf02e65ull;
constexpr uint64_t kKwsDigest = 0x05a7211d4d9e9865ull;

const char* kTinyWorkload =
    "TMDL 1\n"
    "layer conv2d in=2,2,3 out=2 kernel=1,1 stride=1 pad=same in_off=0 "
    "out_off=0 act=-128,127 mult=list:1073741824,1073741824 shift=list:1,1 "
    "bias=list:0,0 weights=prng:7\n"
    "input prng:9\n";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string with_layer_field(const std::string& replace_key,
                             const std::string& replacement) {
  std::string line =
      "layer conv2d in=2,2,3 out=2 kernel=1,1 stride=1 pad=same in_off=0 "
      "out_off=0 act=-128,127 mult=list:1073741824,1073741824 shift=list:1,1 "
      "bias=list:0,0 weights=prng:7";
  size_t at = line.find(replace_key);
  REQUIRE(at != std::string::npos);
  size_t end = line.find(' ', at);
  if (end == std::string::npos) end = line.size();
  line = line.substr(0, at) + replacement + line.substr(end);
  return "TMDL 1\n" + line + "\ninput prng:9\n";
}

std::string message_of(const std::string& text) {
  try {
    parse_tmdl(text, "t");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal workload parses and materializes every source") {
  WorkloadSpec w = parse_tmdl(kTinyWorkload, "tiny");
  REQUIRE(w.layers.size() == 1);
  const LayerParams& p = w.layers[0];
  CHECK(p.in_ch == 3);
  CHECK(p.out_ch == 2);
  CHECK(w.filters[0].size() == 6);  // 2 out x 1x1 x 3 in
  CHECK(w.input.size() == 12);
  CHECK_FALSE(w.has_golden);
  // SplitMix64 seed 9 low byte drives the input bytes.
  Prng64 rng(9);
  CHECK(w.input[0] == rng.next_int8());
}

TEST_CASE("prng multipliers land in the normalized range") {
  std::string text = with_layer_field("mult=", "mult=prng:123");
  WorkloadSpec w = parse_tmdl(text, "t");
  for (int32_t m : w.layers[0].mult) {
    CHECK(m >= (1 << 30));
    CHECK(static_cast<int64_t>(m) < (INT64_C(1) << 31));
  }
  // The stream is the generator value mod 2^30, offset into the range.
  Prng64 rng(123);
  int32_t expect = static_cast<int32_t>(
      (INT64_C(1) << 30) + static_cast<int64_t>(rng.next() % (1ull << 30)));
  CHECK(w.layers[0].mult[0] == expect);
}

TEST_CASE("grammar violations report the offending line") {
  CHECK(message_of("nope\n") == "tmdl line 1: expected 'TMDL 1' header");
  CHECK(message_of("TMDL 2\n") == "tmdl line 1: expected 'TMDL 1' header");
  CHECK(message_of(with_layer_field("stride=", "stride=0")) ==
        "tmdl line 2: stride must be ≥ 1");
  CHECK(message_of(with_layer_field("out=", "out=0")) ==
        "tmdl line 2: out channels must be positive");
  CHECK(message_of(with_layer_field("pad=", "pad=full")) ==
        "tmdl line 2: pad must be 'same' or 'valid'");
  CHECK(message_of(with_layer_field("in_off=", "in_off=300")) ==
        "tmdl line 2: in_off out of range [-255, 255]");
  CHECK(message_of(with_layer_field("shift=", "shift=list:9,1")) ==
        "tmdl line 2: shift 9 out of range [-31, 8]");
  CHECK(message_of(with_layer_field("mult=", "mult=list:5,5")) ==
        "tmdl line 2: multiplier 5 out of range [2^30, 2^31)");
  CHECK(message_of(with_layer_field("weights=", "weights=hex:abc")) ==
        "tmdl line 2: weights hex source needs an even digit count");
  CHECK(message_of(with_layer_field("weights=", "weights=hex:abcd")) ==
        "tmdl line 2: weights hex has 2 bytes, expected 6");
  CHECK(message_of(with_layer_field("kernel=", "kernel=1,1 kernel=2,2")) ==
        "tmdl line 2: duplicate key 'kernel'");
  CHECK(message_of(with_layer_field("bias=", "extra=1 bias=list:0,0")) ==
        "tmdl line 2: unknown key 'extra'");

  std::string no_input = "TMDL 1\n" + std::string(kTinyWorkload).substr(7);
  no_input.resize(no_input.find("input"));
  CHECK(message_of(no_input) == "tmdl line 2: workload needs an input line");
  CHECK(message_of("TMDL 1\ninput prng:1\ninput prng:2\n") ==
        "tmdl line 3: duplicate input line");
  CHECK(message_of("TMDL 1\nbogus x\n") ==
        "tmdl line 2: unknown directive 'bogus'");
}

TEST_CASE("layer chaining checks shapes across the stack") {
  std::string text =
      "TMDL 1\n"
      "layer conv2d in=4,4,2 out=3 kernel=1,1 stride=1 pad=same in_off=0 "
      "out_off=0 act=-128,127 mult=prng:1 shift=list:0,0,0 bias=list:0,0,0 "
      "weights=prng:2\n"
      "layer conv2d in=4,4,4 out=2 kernel=1,1 stride=1 pad=same in_off=0 "
      "out_off=0 act=-128,127 mult=prng:1 shift=list:0,0 bias=list:0,0 "
      "weights=prng:2\n"
      "input prng:3\n";
  std::string msg = message_of(text);
  CHECK(msg ==
        "tmdl line 3: layer input shape 4,4,4 does not match previous "
        "output 4,4,3");
}

TEST_CASE("bundled workloads carry the frozen digests") {
  WorkloadSpec mnv2 = bundled_workload("mnv2_slice");
  CHECK(mnv2.has_golden);
  CHECK(mnv2.golden_digest == kMnv2Digest);
  WorkloadSpec kws = bundled_workload("kws_slice");
  CHECK(kws.has_golden);
  CHECK(kws.golden_digest == kKwsDigest);
  CHECK_THROWS_AS(bundled_workload("other"), ParseError);
  auto names = bundled_workload_names();
  REQUIRE(names.size() == 2);
  CHECK(names[0] == "mnv2_slice");
  CHECK(names[1] == "kws_slice");
}

TEST_CASE("the reference run reproduces both frozen digests") {
  for (const std::string& name : bundled_workload_names()) {
    WorkloadSpec w = bundled_workload(name);
    auto out = reference_run(w);
    CAPTURE(name);
    CHECK(fnv1a64(out.data(), out.size()) == w.golden_digest);
  }
}

TEST_CASE("embedded workload texts match the shipped files byte for byte") {
  std::string dir = CFUSIM_DATA_DIR;
  CHECK(mnv2_slice_text() == read_file(dir + "/mnv2_slice.tmdl"));
  CHECK(kws_slice_text() == read_file(dir + "/kws_slice.tmdl"));
}

TEST_CASE("loading a workload file picks up its golden sidecar") {
  std::string dir = CFUSIM_DATA_DIR;
  WorkloadSpec w = load_tmdl_file(dir + "/mnv2_slice.tmdl");
  CHECK(w.name == "mnv2_slice");
  CHECK(w.has_golden);
  CHECK(w.golden_digest == kMnv2Digest);
}

TEST_CASE("golden files round-trip and reject malformed content") {
  std::string path = "roundtrip_digest.golden";
  write_golden_file(path, 0x0123456789abcdefull);
  CHECK(read_golden_file(path) == 0x0123456789abcdefull);
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_golden_file("does_not_exist.golden"), ParseError);
  std::ofstream bad("bad_digest.golden");
  bad << "xyz\n";
  bad.close();
  CHECK_THROWS_AS(read_golden_file("bad_digest.golden"), ParseError);
  std::remove("bad_digest.golden");
}

TEST_CASE("digest primitives match the published constants") {
  CHECK(fnv1a64("", 0) == 0xCBF29CE484222325ull);
  CHECK(fnv1a64("a", 1) == 0xAF63DC4C8601EC8Cull);
  CHECK(digest_hex(0x05a7211d4d9e9865ull) == "05a7211d4d9e9865");
}

TEST_CASE("golden verification localizes the first differing byte") {
  WorkloadSpec w = bundled_workload("mnv2_slice");
  auto out = reference_run(w);
  GoldenVerdict ok = golden_check(w, out);
  CHECK(ok.pass);
  CHECK(ok.first_diff == -1);

  auto bad = out;
  bad[5] = static_cast<int8_t>(bad[5] + 1);
  GoldenVerdict v = golden_check(w, bad);
  CHECK_FALSE(v.pass);
  CHECK(v.first_diff == 5);
  CHECK(v.expected_digest == kMnv2Digest);
  CHECK(v.actual_digest != v.expected_digest);

  WorkloadSpec plain = parse_tmdl(kTinyWorkload, "tiny");
  CHECK_THROWS_AS(golden_check(plain, out), ParseError);
}

TEST_CASE("sizing helpers add filters, channel params, and tensor extents") {
  std::string text =
      "TMDL 1\n"
      "layer conv2d in=4,4,2 out=3 kernel=1,1 stride=1 pad=same in_off=0 "
      "out_off=0 act=-128,127 mult=prng:1 shift=list:0,0,0 bias=list:0,0,0 "
      "weights=prng:2\n"
      "layer dwconv2d in=4,4,3 out=3 kernel=3,3 stride=2 pad=same in_off=0 "
      "out_off=0 act=-128,127 mult=prng:1 shift=list:0,0,0 bias=list:0,0,0 "
      "weights=prng:2\n"
      "input prng:3\n";
  WorkloadSpec w = parse_tmdl(text, "sz");
  // Filters: 3*1*1*2 = 6 and 3*3*3 = 27; channel params 12 bytes per
  // output channel per layer.
  CHECK(total_weight_bytes(w) == 6 + 27 + 12 * 3 + 12 * 3);
  // Tensors: in 4*4*2=32, mid 4*4*3=48, out 2*2*3=12.
  CHECK(max_activation_bytes(w) == 48);
}
