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

#include "cfusim/workloads.h"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cfusim/error.h"
#include "cfusim/prng.h"

#include "workloads_data.inc"

namespace cfusim {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("tmdl line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int64_t parse_int(const std::string& s, int line, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    fail(line, "invalid integer '" + s + "' for " + what);
  return v;
}

std::vector<int64_t> parse_int_list(const std::string& s, int line,
                                    const std::string& what) {
  std::vector<int64_t> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(parse_int(s.substr(pos, comma - pos), line, what));
    pos = comma + 1;
    if (comma == s.size()) break;
  }
  return out;
}

// A data source: "prng:SEED", "list:v1,v2,...", or "hex:...".
struct Source {
  enum Kind { kPrng, kList, kHex } kind;
  uint64_t seed = 0;
  std::vector<int64_t> values;
  std::vector<int8_t> bytes;
};

Source parse_source(const std::string& s, int line, const std::string& what,
                    bool allow_list, bool allow_hex) {
  Source src;
  size_t colon = s.find(':');
  std::string kind = colon == std::string::npos ? s : s.substr(0, colon);
  std::string body = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "prng") {
    src.kind = Source::kPrng;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(body.c_str(), &end, 10);
    if (body.empty() || body[0] == '-' || end != body.c_str() + body.size() ||
        errno == ERANGE)
      fail(line, "invalid prng seed '" + body + "' for " + what);
    src.seed = v;
    return src;
  }
  if (kind == "list" && allow_list) {
    src.kind = Source::kList;
    src.values = parse_int_list(body, line, what);
    return src;
  }
  if (kind == "hex" && allow_hex) {
    src.kind = Source::kHex;
    if (body.size() % 2 != 0)
      fail(line, what + " hex source needs an even digit count");
    for (size_t i = 0; i < body.size(); i += 2) {
      auto nib = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        fail(line, std::string("invalid hex digit '") + c + "' in " + what);
      };
      src.bytes.push_back(
          static_cast<int8_t>((nib(body[i]) << 4) | nib(body[i + 1])));
    }
    return src;
  }
  fail(line, "unknown source kind '" + kind + "' for " + what);
}

std::vector<int8_t> materialize_bytes(const Source& src, int64_t count) {
  if (src.kind == Source::kHex) return src.bytes;
  std::vector<int8_t> out(static_cast<size_t>(count));
  Prng64 rng(src.seed);
  for (auto& b : out) b = rng.next_int8();
  return out;
}

constexpr int64_t kMultLo = INT64_C(1) << 30;
constexpr int64_t kMultHi = INT64_C(1) << 31;

std::vector<int32_t> materialize_mult(const Source& src, int64_t count,
                                      int line) {
  std::vector<int32_t> out;
  if (src.kind == Source::kPrng) {
    Prng64 rng(src.seed);
    for (int64_t i = 0; i < count; ++i)
      out.push_back(static_cast<int32_t>(
          kMultLo + static_cast<int64_t>(rng.next() % kMultLo)));
    return out;
  }
  for (int64_t v : src.values) {
    if (v < kMultLo || v >= kMultHi)
      fail(line, "multiplier " + std::to_string(v) +
                     " out of range [2^30, 2^31)");
    out.push_back(static_cast<int32_t>(v));
  }
  return out;
}

struct PendingLayer {
  LayerParams params;
  Source weights;
  int line = 0;
};

PendingLayer parse_layer_line(const std::vector<std::string>& toks, int line) {
  if (toks.size() < 2) fail(line, "layer needs a type");
  PendingLayer pl;
  pl.line = line;
  LayerParams& p = pl.params;
  if (toks[1] == "conv2d") {
    p.depthwise = false;
  } else if (toks[1] == "dwconv2d") {
    p.depthwise = true;
  } else {
    fail(line, "unknown layer type '" + toks[1] + "'");
  }
  std::map<std::string, std::string> kv;
  for (size_t i = 2; i < toks.size(); ++i) {
    size_t eq = toks[i].find('=');
    if (eq == std::string::npos)
      fail(line, "expected key=value, got '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq);
    if (kv.count(key)) fail(line, "duplicate key '" + key + "'");
    kv[key] = toks[i].substr(eq + 1);
  }
  static const char* const kRequired[] = {
      "in",    "out",  "kernel", "stride", "pad",  "in_off",
      "out_off", "act", "mult",  "shift",  "bias", "weights"};
  for (const char* key : kRequired)
    if (!kv.count(key)) fail(line, std::string("missing key '") + key + "'");
  for (const auto& [key, value] : kv) {
    (void)value;
    bool known = false;
    for (const char* r : kRequired) known = known || key == r;
    if (!known) fail(line, "unknown key '" + key + "'");
  }

  auto dims = parse_int_list(kv["in"], line, "in");
  if (dims.size() != 3) fail(line, "in needs H,W,C");
  p.in_h = static_cast<int32_t>(dims[0]);
  p.in_w = static_cast<int32_t>(dims[1]);
  p.in_ch = static_cast<int32_t>(dims[2]);
  if (p.in_h < 1 || p.in_w < 1 || p.in_ch < 1)
    fail(line, "in dimensions must be positive");
  p.out_ch = static_cast<int32_t>(parse_int(kv["out"], line, "out"));
  if (p.out_ch < 1) fail(line, "out channels must be positive");
  auto ker = parse_int_list(kv["kernel"], line, "kernel");
  if (ker.size() != 2) fail(line, "kernel needs KH,KW");
  p.kh = static_cast<int32_t>(ker[0]);
  p.kw = static_cast<int32_t>(ker[1]);
  if (p.kh < 1 || p.kw < 1) fail(line, "kernel dimensions must be positive");
  p.stride = static_cast<int32_t>(parse_int(kv["stride"], line, "stride"));
  if (p.stride < 1) fail(line, "stride must be ≥ 1");
  if (kv["pad"] == "same") {
    p.same_pad = true;
  } else if (kv["pad"] == "valid") {
    p.same_pad = false;
  } else {
    fail(line, "pad must be 'same' or 'valid'");
  }
  p.input_offset =
      static_cast<int32_t>(parse_int(kv["in_off"], line, "in_off"));
  if (p.input_offset < -255 || p.input_offset > 255)
    fail(line, "in_off out of range [-255, 255]");
  p.output_offset =
      static_cast<int32_t>(parse_int(kv["out_off"], line, "out_off"));
  if (p.output_offset < -128 || p.output_offset > 127)
    fail(line, "out_off out of range [-128, 127]");
  auto act = parse_int_list(kv["act"], line, "act");
  if (act.size() != 2) fail(line, "act needs MIN,MAX");
  p.act_min = static_cast<int32_t>(act[0]);
  p.act_max = static_cast<int32_t>(act[1]);
  if (p.act_min < -128 || p.act_max > 127 || p.act_min > p.act_max)
    fail(line, "act range must satisfy -128 <= min <= max <= 127");
  if (p.depthwise) {
    if (p.out_ch % p.in_ch != 0)
      fail(line, "depthwise out channels must be a multiple of in channels");
  }
  if (!p.same_pad && (p.in_h < p.kh || p.in_w < p.kw))
    fail(line, "valid padding needs input at least kernel sized");
  int64_t taps = static_cast<int64_t>(p.kh) * p.kw *
                 (p.depthwise ? 1 : p.in_ch);
  if (taps > 32768)
    fail(line, "kernel fan-in exceeds the 32768 accumulator bound");

  Source mult = parse_source(kv["mult"], line, "mult", true, false);
  p.mult = materialize_mult(mult, p.out_ch, line);
  if (static_cast<int64_t>(p.mult.size()) != p.out_ch)
    fail(line, "mult list has " + std::to_string(p.mult.size()) +
                   " entries, expected " + std::to_string(p.out_ch));
  Source shift = parse_source(kv["shift"], line, "shift", true, false);
  if (shift.kind != Source::kList) fail(line, "shift must be a list");
  if (static_cast<int64_t>(shift.values.size()) != p.out_ch)
    fail(line, "shift list has " + std::to_string(shift.values.size()) +
                   " entries, expected " + std::to_string(p.out_ch));
  for (int64_t v : shift.values) {
    if (v < -31 || v > 8)
      fail(line, "shift " + std::to_string(v) + " out of range [-31, 8]");
    p.shift.push_back(static_cast<int32_t>(v));
  }
  Source bias = parse_source(kv["bias"], line, "bias", true, false);
  if (bias.kind != Source::kList) fail(line, "bias must be a list");
  if (static_cast<int64_t>(bias.values.size()) != p.out_ch)
    fail(line, "bias list has " + std::to_string(bias.values.size()) +
                   " entries, expected " + std::to_string(p.out_ch));
  for (int64_t v : bias.values) {
    if (v < INT32_MIN || v > INT32_MAX)
      fail(line, "bias " + std::to_string(v) + " does not fit in int32");
    p.bias.push_back(static_cast<int32_t>(v));
  }
  pl.weights = parse_source(kv["weights"], line, "weights", false, true);
  return pl;
}

}  // namespace

WorkloadSpec parse_tmdl(const std::string& text, const std::string& name) {
  WorkloadSpec w;
  w.name = name;
  std::vector<PendingLayer> pending;
  bool saw_header = false;
  bool saw_input = false;
  Source input_src;
  int input_line = 0;
  int line_no = 0;
  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto toks = split_ws(raw);
    if (line_no == 1) {
      if (toks.size() != 2 || toks[0] != "TMDL" || toks[1] != "1")
        fail(1, "expected 'TMDL 1' header");
      saw_header = true;
      continue;
    }
    if (toks.empty()) continue;
    if (toks[0] == "layer") {
      pending.push_back(parse_layer_line(toks, line_no));
    } else if (toks[0] == "input") {
      if (toks.size() != 2) fail(line_no, "input needs one source");
      if (saw_input) fail(line_no, "duplicate input line");
      saw_input = true;
      input_line = line_no;
      input_src = parse_source(toks[1], line_no, "input", false, true);
    } else {
      fail(line_no, "unknown directive '" + toks[0] + "'");
    }
  }
  if (!saw_header) fail(1, "expected 'TMDL 1' header");
  if (pending.empty()) fail(line_no, "workload needs at least one layer");
  if (!saw_input) fail(line_no, "workload needs an input line");

  for (size_t k = 1; k < pending.size(); ++k) {
    const LayerParams& prev = pending[k - 1].params;
    const LayerParams& cur = pending[k].params;
    if (cur.in_h != prev.out_h() || cur.in_w != prev.out_w() ||
        cur.in_ch != prev.out_ch)
      fail(pending[k].line,
           "layer input shape " + std::to_string(cur.in_h) + "," +
               std::to_string(cur.in_w) + "," + std::to_string(cur.in_ch) +
               " does not match previous output " +
               std::to_string(prev.out_h()) + "," +
               std::to_string(prev.out_w()) + "," +
               std::to_string(prev.out_ch));
  }

  for (auto& pl : pending) {
    int64_t want = pl.params.filter_count();
    auto bytes = materialize_bytes(pl.weights, want);
    if (static_cast<int64_t>(bytes.size()) != want)
      fail(pl.line, "weights hex has " + std::to_string(bytes.size()) +
                        " bytes, expected " + std::to_string(want));
    w.layers.push_back(std::move(pl.params));
    w.filters.push_back(std::move(bytes));
  }
  int64_t want_in = w.layers.front().input_count();
  w.input = materialize_bytes(input_src, want_in);
  if (static_cast<int64_t>(w.input.size()) != want_in)
    fail(input_line, "input hex has " + std::to_string(w.input.size()) +
                         " bytes, expected " + std::to_string(want_in));
  return w;
}

WorkloadSpec load_tmdl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open workload file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::filesystem::path p(path);
  WorkloadSpec w = parse_tmdl(buf.str(), p.stem().string());
  std::filesystem::path golden = p;
  golden.replace_extension(".golden");
  std::error_code ec;
  if (std::filesystem::exists(golden, ec)) {
    w.golden_digest = read_golden_file(golden.string());
    w.has_golden = true;
  }
  return w;
}

uint64_t fnv1a64(const void* data, size_t n) {
  const auto* p = static_cast<const uint8_t*>(data);
  uint64_t h = 0xCBF29CE484222325ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string digest_hex(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

std::vector<int8_t> reference_run(const WorkloadSpec& w) {
  std::vector<int8_t> cur = w.input;
  for (size_t k = 0; k < w.layers.size(); ++k) {
    const LayerParams& p = w.layers[k];
    std::vector<int8_t> next(static_cast<size_t>(p.output_count()));
    reference_layer(p, cur.data(), w.filters[k].data(), next.data());
    cur = std::move(next);
  }
  return cur;
}

GoldenVerdict golden_check(const WorkloadSpec& w,
                           const std::vector<int8_t>& outputs) {
  if (!w.has_golden)
    throw ParseError("workload " + w.name + " has no golden digest");
  GoldenVerdict v;
  v.expected_digest = w.golden_digest;
  v.actual_digest = fnv1a64(outputs.data(), outputs.size());
  v.pass = v.actual_digest == v.expected_digest;
  if (!v.pass) {
    std::vector<int8_t> ref = reference_run(w);
    size_t n = std::min(ref.size(), outputs.size());
    for (size_t i = 0; i < n; ++i) {
      if (ref[i] != outputs[i]) {
        v.first_diff = static_cast<int64_t>(i);
        break;
      }
    }
    if (v.first_diff < 0 && ref.size() != outputs.size())
      v.first_diff = static_cast<int64_t>(n);
  }
  return v;
}

uint64_t read_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open golden file " + path);
  std::string tok;
  if (!(in >> tok) || tok.size() != 16)
    throw ParseError("golden file " + path +
                     " must hold one 16-digit hex digest");
  uint64_t v = 0;
  for (char c : tok) {
    int nib;
    if (c >= '0' && c <= '9') {
      nib = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nib = c - 'a' + 10;
    } else {
      throw ParseError("golden file " + path + " has invalid digest digit");
    }
    v = (v << 4) | static_cast<uint64_t>(nib);
  }
  return v;
}

void write_golden_file(const std::string& path, uint64_t digest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("cannot write golden file " + path);
  out << digest_hex(digest) << "\n";
}

const std::string& mnv2_slice_text() {
  static const std::string text(kMnv2SliceText);
  return text;
}

const std::string& kws_slice_text() {
  static const std::string text(kKwsSliceText);
  return text;
}

std::vector<std::string> bundled_workload_names() {
  return {"mnv2_slice", "kws_slice"};
}

WorkloadSpec bundled_workload(const std::string& name) {
  WorkloadSpec w;
  if (name == "mnv2_slice") {
    w = parse_tmdl(mnv2_slice_text(), name);
    w.golden_digest = kMnv2SliceDigest;
  } else if (name == "kws_slice") {
    w = parse_tmdl(kws_slice_text(), name);
    w.golden_digest = kKwsSliceDigest;
  } else {
    throw ParseError("unknown bundled workload '" + name + "'");
  }
  w.has_golden = true;
  return w;
}

uint64_t total_weight_bytes(const WorkloadSpec& w) {
  uint64_t total = 0;
  for (const LayerParams& p : w.layers) {
    total += static_cast<uint64_t>(p.filter_count());
    total += 12u * static_cast<uint64_t>(p.out_ch);
  }
  return total;
}

uint64_t max_activation_bytes(const WorkloadSpec& w) {
  uint64_t best = 0;
  for (const LayerParams& p : w.layers) {
    best = std::max(best, static_cast<uint64_t>(p.input_count()));
    best = std::max(best, static_cast<uint64_t>(p.output_count()));
  }
  return best;
}

}  // namespace cfusim
