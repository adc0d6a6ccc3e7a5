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

#include "cfusim/config.h"

#include <cstdlib>
#include <sstream>

#include "cfusim/error.h"

namespace cfusim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

uint32_t parse_u32(const std::string& key, const std::string& value) {
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 0);
  if (!end || *end != '\0' || value.empty())
    throw ParseError("bad value '" + value + "' for " + key);
  if (v > 0xFFFFFFFFull)
    throw ParseError("value for " + key + " out of range");
  return static_cast<uint32_t>(v);
}

[[noreturn]] void bad_enum(const std::string& key, const std::string& value) {
  throw ParseError("bad value '" + value + "' for " + key);
}

}  // namespace

const char* to_string(Predictor p) {
  switch (p) {
    case Predictor::kNone: return "none";
    case Predictor::kStatic: return "static";
    case Predictor::kDynamic: return "dynamic";
    case Predictor::kDynamicTarget: return "dynamic_target";
  }
  return "?";
}

const char* to_string(Multiplier m) {
  return m == Multiplier::kIterative ? "iterative" : "single_cycle";
}

const char* to_string(Divider d) {
  return d == Divider::kNone ? "none" : "iterative";
}

const char* to_string(Shifter s) {
  return s == Shifter::kIterative ? "iterative" : "barrel";
}

const char* to_string(FlashMode f) {
  return f == FlashMode::kSpi ? "spi" : "quad_spi";
}

const char* to_string(Placement p) {
  return p == Placement::kFlash ? "flash" : "sram";
}

const char* to_string(CfuKind c) {
  switch (c) {
    case CfuKind::kNone: return "none";
    case CfuKind::kDemo: return "demo";
    case CfuKind::kPostproc: return "postproc";
    case CfuKind::kMac4: return "mac4";
    case CfuKind::kCfu1: return "cfu1";
    case CfuKind::kCfu2: return "cfu2";
  }
  return "?";
}

CfuKind cfu_kind_from_string(const std::string& s) {
  if (s == "none") return CfuKind::kNone;
  if (s == "demo") return CfuKind::kDemo;
  if (s == "postproc") return CfuKind::kPostproc;
  if (s == "mac4") return CfuKind::kMac4;
  if (s == "cfu1") return CfuKind::kCfu1;
  if (s == "cfu2") return CfuKind::kCfu2;
  throw ParseError("bad value '" + s + "' for cfu");
}

void apply_config_key(CpuConfig* cfg, const std::string& key,
                      const std::string& value) {
  if (key == "icache_bytes") cfg->icache_bytes = parse_u32(key, value);
  else if (key == "dcache_bytes") cfg->dcache_bytes = parse_u32(key, value);
  else if (key == "l2_bytes") cfg->l2_bytes = parse_u32(key, value);
  else if (key == "line_bytes") cfg->line_bytes = parse_u32(key, value);
  else if (key == "assoc") cfg->assoc = parse_u32(key, value);
  else if (key == "predictor") {
    if (value == "none") cfg->predictor = Predictor::kNone;
    else if (value == "static") cfg->predictor = Predictor::kStatic;
    else if (value == "dynamic") cfg->predictor = Predictor::kDynamic;
    else if (value == "dynamic_target")
      cfg->predictor = Predictor::kDynamicTarget;
    else bad_enum(key, value);
  } else if (key == "multiplier") {
    if (value == "iterative") cfg->multiplier = Multiplier::kIterative;
    else if (value == "single_cycle")
      cfg->multiplier = Multiplier::kSingleCycle;
    else bad_enum(key, value);
  } else if (key == "divider") {
    if (value == "none") cfg->divider = Divider::kNone;
    else if (value == "iterative") cfg->divider = Divider::kIterative;
    else bad_enum(key, value);
  } else if (key == "shifter") {
    if (value == "iterative") cfg->shifter = Shifter::kIterative;
    else if (value == "barrel") cfg->shifter = Shifter::kBarrel;
    else bad_enum(key, value);
  } else if (key == "flash") {
    if (value == "spi") cfg->flash = FlashMode::kSpi;
    else if (value == "quad_spi") cfg->flash = FlashMode::kQuadSpi;
    else bad_enum(key, value);
  } else if (key == "code_region" || key == "weights_region") {
    Placement p;
    if (value == "flash") p = Placement::kFlash;
    else if (value == "sram") p = Placement::kSram;
    else bad_enum(key, value);
    if (key == "code_region") cfg->code_region = p;
    else cfg->weights_region = p;
  } else if (key == "cfu") {
    cfg->cfu = cfu_kind_from_string(value);
  } else if (key == "board") {
    if (value.empty()) bad_enum(key, value);
    cfg->board = value;
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

void apply_timing_key(TimingParams* tp, const std::string& key,
                      const std::string& value) {
  if (key == "alu") tp->alu = parse_u32(key, value);
  else if (key == "load_hit") tp->load_hit = parse_u32(key, value);
  else if (key == "store_hit") tp->store_hit = parse_u32(key, value);
  else if (key == "icache_miss_penalty")
    tp->icache_miss_penalty = parse_u32(key, value);
  else if (key == "dcache_miss_penalty")
    tp->dcache_miss_penalty = parse_u32(key, value);
  else if (key == "l2_hit_penalty") tp->l2_hit_penalty = parse_u32(key, value);
  else if (key == "sram_latency") tp->sram_latency = parse_u32(key, value);
  else if (key == "flash_word_cycles_spi")
    tp->flash_word_cycles_spi = parse_u32(key, value);
  else if (key == "flash_word_cycles_quad")
    tp->flash_word_cycles_quad = parse_u32(key, value);
  else if (key == "mul_iterative") tp->mul_iterative = parse_u32(key, value);
  else if (key == "mul_single") tp->mul_single = parse_u32(key, value);
  else if (key == "div_iterative") tp->div_iterative = parse_u32(key, value);
  else if (key == "mispredict_penalty")
    tp->mispredict_penalty = parse_u32(key, value);
  else if (key == "cfu_fixed_issue")
    tp->cfu_fixed_issue = parse_u32(key, value);
  else throw ParseError("unknown timing key '" + key + "'");
}

void parse_config_text(const std::string& text, CpuConfig* cfg,
                       TimingParams* tp) {
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  bool in_timing = false;
  while (std::getline(in, raw)) {
    ++number;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[timing]") {
        in_timing = true;
        continue;
      }
      throw ParseError("config line " + std::to_string(number) +
                       ": unknown section " + line);
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(number) +
                       ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (in_timing) apply_timing_key(tp, key, value);
      else apply_config_key(cfg, key, value);
    } catch (const ParseError& e) {
      throw ParseError("config line " + std::to_string(number) + ": " +
                       e.what());
    }
  }
  validate_config(*cfg);
}

void validate_config(const CpuConfig& cfg) {
  auto pow2 = [](uint32_t v) { return v != 0 && (v & (v - 1)) == 0; };
  if (!pow2(cfg.line_bytes) || cfg.line_bytes < 4)
    throw ParseError("line_bytes must be a power of two >= 4");
  if (!pow2(cfg.assoc))
    throw ParseError("assoc must be a power of two >= 1");
  for (auto [name, bytes] :
       {std::pair<const char*, uint32_t>{"icache_bytes", cfg.icache_bytes},
        {"dcache_bytes", cfg.dcache_bytes},
        {"l2_bytes", cfg.l2_bytes}}) {
    if (bytes == 0) continue;
    if (bytes % (cfg.line_bytes * cfg.assoc) != 0)
      throw ParseError(std::string(name) +
                       " must be a multiple of line_bytes * assoc");
  }
}

}  // namespace cfusim
