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

#include "cfusim/costmodel.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cfusim/error.h"

namespace cfusim {
namespace {

// Cache data bytes plus the fixed 12.5% tag overhead.
uint64_t cache_bram(uint64_t bytes) { return bytes + bytes / 8; }

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

uint64_t parse_u64(const std::string& value, int line, const char* what) {
  const std::string v = strip(value);
  if (v.empty() || v[0] == '-') {
    throw ParseError("line " + std::to_string(line) + ": bad " + what +
                     " value '" + v + "'");
  }
  char* end = nullptr;
  unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw ParseError("line " + std::to_string(line) + ": bad " + what +
                     " value '" + v + "'");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_board(const Board& b) {
  if (b.luts == 0 || b.dsps == 0 || b.bram_bytes == 0 || b.sram_bytes == 0 ||
      b.rom_bytes == 0 || b.clk_mhz == 0) {
    throw ParseError("board " + b.name + ": all capacities must be positive");
  }
}

void add_item(ResourceEstimate* est, const std::string& feature,
              const ResourceCost& cost) {
  est->items.push_back({feature, cost});
  est->luts += cost.luts;
  est->dsps += cost.dsps;
  est->bram_bytes += cost.bram_bytes;
}

void check_budget(FeasibilityVerdict* v, const char* axis, uint64_t used,
                  uint64_t cap) {
  if (used <= cap) return;
  v->feasible = false;
  v->violations.push_back(std::string(axis) + " " + std::to_string(used) +
                          " > " + std::to_string(cap));
}

}  // namespace

FeatureCosts::FeatureCosts()
    : base_cpu_luts(1500),
      predictor_static_luts(50),
      predictor_dynamic_luts(200),
      predictor_dynamic_target_luts(400),
      barrel_shifter_luts(150),
      iterative_divider_luts(120),
      iterative_multiplier_luts(150),
      single_cycle_multiplier_dsps(4) {
  for (int k = 0; k < 6; ++k) {
    auto unit = make_cfu(static_cast<CfuKind>(k));
    cfu[k] = unit ? unit->resources() : ResourceCost{};
  }
}

std::vector<Board> builtin_boards() {
  auto mb = [](uint64_t n) { return n << 20; };
  auto kb = [](uint64_t n) { return n << 10; };
  return {
      {"arty-a7-100t", 101440, 240, 622080, mb(256), mb(16), 100},
      {"arty-a7-35t", 33280, 90, 230400, mb(256), mb(16), 100},
      {"orangecrab", 24000, 28, 129024, mb(128), mb(16), 75},
      {"ulx3s", 12000, 12, 73728, mb(32), mb(4), 50},
      {"icebreaker", 5280, 8, 15360, kb(128), mb(16), 24},
      {"fomu", 5280, 8, 15360, kb(128), mb(2), 12},
  };
}

std::vector<Board> parse_boards_text(const std::string& text) {
  std::vector<Board> boards;
  Board* cur = nullptr;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(number) +
                         ": unterminated section header");
      }
      std::string name = strip(line.substr(1, line.size() - 2));
      if (name.empty()) {
        throw ParseError("line " + std::to_string(number) +
                         ": empty board name");
      }
      for (const Board& b : boards) {
        if (b.name == name) {
          throw ParseError("line " + std::to_string(number) +
                           ": duplicate board " + name);
        }
      }
      boards.push_back(Board{});
      cur = &boards.back();
      cur->name = name;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(number) +
                       ": expected key = value");
    }
    if (cur == nullptr) {
      throw ParseError("line " + std::to_string(number) +
                       ": key before any [board] section");
    }
    std::string key = strip(line.substr(0, eq));
    std::string value = line.substr(eq + 1);
    if (key == "luts") {
      cur->luts = static_cast<uint32_t>(parse_u64(value, number, "luts"));
    } else if (key == "dsps") {
      cur->dsps = static_cast<uint32_t>(parse_u64(value, number, "dsps"));
    } else if (key == "bram_bytes") {
      cur->bram_bytes = parse_u64(value, number, "bram_bytes");
    } else if (key == "sram_bytes") {
      cur->sram_bytes = parse_u64(value, number, "sram_bytes");
    } else if (key == "rom_bytes") {
      cur->rom_bytes = parse_u64(value, number, "rom_bytes");
    } else if (key == "clk_mhz") {
      cur->clk_mhz = static_cast<uint32_t>(parse_u64(value, number, "clk_mhz"));
    } else {
      throw ParseError("line " + std::to_string(number) + ": unknown key '" +
                       key + "'");
    }
  }
  if (boards.empty()) throw ParseError("board catalog has no boards");
  for (const Board& b : boards) check_board(b);
  return boards;
}

std::vector<Board> load_boards_file(const std::string& path) {
  return parse_boards_text(read_file(path));
}

const Board& find_board(const std::vector<Board>& catalog,
                        const std::string& name) {
  for (const Board& b : catalog) {
    if (b.name == name) return b;
  }
  throw ParseError("unknown board '" + name + "'");
}

FeatureCosts parse_feature_costs_text(const std::string& text) {
  FeatureCosts fc;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = strip(raw);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(number) +
                       ": expected key = value");
    }
    std::string key = strip(line.substr(0, eq));
    uint64_t v = parse_u64(line.substr(eq + 1), number, key.c_str());
    auto u32 = [&] { return static_cast<uint32_t>(v); };
    if (key == "base_cpu_luts") {
      fc.base_cpu_luts = u32();
    } else if (key == "predictor_static_luts") {
      fc.predictor_static_luts = u32();
    } else if (key == "predictor_dynamic_luts") {
      fc.predictor_dynamic_luts = u32();
    } else if (key == "predictor_dynamic_target_luts") {
      fc.predictor_dynamic_target_luts = u32();
    } else if (key == "barrel_shifter_luts") {
      fc.barrel_shifter_luts = u32();
    } else if (key == "iterative_divider_luts") {
      fc.iterative_divider_luts = u32();
    } else if (key == "iterative_multiplier_luts") {
      fc.iterative_multiplier_luts = u32();
    } else if (key == "single_cycle_multiplier_dsps") {
      fc.single_cycle_multiplier_dsps = u32();
    } else {
      bool matched = false;
      for (int k = 1; k < 6 && !matched; ++k) {
        CfuKind kind = static_cast<CfuKind>(k);
        std::string prefix = std::string("cfu_") + to_string(kind) + "_";
        if (key.rfind(prefix, 0) != 0) continue;
        std::string field = key.substr(prefix.size());
        if (field == "luts") {
          fc.cfu[k].luts = u32();
        } else if (field == "dsps") {
          fc.cfu[k].dsps = u32();
        } else if (field == "bram_bytes") {
          fc.cfu[k].bram_bytes = u32();
        } else {
          throw ParseError("line " + std::to_string(number) +
                           ": unknown key '" + key + "'");
        }
        matched = true;
      }
      if (!matched) {
        throw ParseError("line " + std::to_string(number) +
                         ": unknown key '" + key + "'");
      }
    }
  }
  return fc;
}

FeatureCosts load_feature_costs_file(const std::string& path) {
  return parse_feature_costs_text(read_file(path));
}

ResourceEstimate estimate(const CpuConfig& config, const FeatureCosts& costs) {
  ResourceEstimate est;
  add_item(&est, "base_cpu", {costs.base_cpu_luts, 0, 0});
  switch (config.predictor) {
    case Predictor::kNone:
      break;
    case Predictor::kStatic:
      add_item(&est, "predictor_static", {costs.predictor_static_luts, 0, 0});
      break;
    case Predictor::kDynamic:
      add_item(&est, "predictor_dynamic", {costs.predictor_dynamic_luts, 0, 0});
      break;
    case Predictor::kDynamicTarget:
      add_item(&est, "predictor_dynamic_target",
               {costs.predictor_dynamic_target_luts, 0, 0});
      break;
  }
  if (config.shifter == Shifter::kBarrel) {
    add_item(&est, "barrel_shifter", {costs.barrel_shifter_luts, 0, 0});
  }
  if (config.divider == Divider::kIterative) {
    add_item(&est, "iterative_divider", {costs.iterative_divider_luts, 0, 0});
  }
  if (config.multiplier == Multiplier::kIterative) {
    add_item(&est, "iterative_multiplier",
             {costs.iterative_multiplier_luts, 0, 0});
  } else {
    add_item(&est, "single_cycle_multiplier",
             {0, costs.single_cycle_multiplier_dsps, 0});
  }
  if (config.icache_bytes > 0) {
    add_item(&est, "icache",
             {0, 0, static_cast<uint32_t>(cache_bram(config.icache_bytes))});
  }
  if (config.dcache_bytes > 0) {
    add_item(&est, "dcache",
             {0, 0, static_cast<uint32_t>(cache_bram(config.dcache_bytes))});
  }
  if (config.l2_bytes > 0) {
    add_item(&est, "l2",
             {0, 0, static_cast<uint32_t>(cache_bram(config.l2_bytes))});
  }
  if (config.cfu != CfuKind::kNone) {
    add_item(&est, std::string("cfu_") + to_string(config.cfu),
             costs.cfu[static_cast<size_t>(config.cfu)]);
  }
  return est;
}

FeasibilityVerdict feasible(const ResourceEstimate& est, const Board& board) {
  FeasibilityVerdict v;
  check_budget(&v, "luts", est.luts, board.luts);
  check_budget(&v, "dsps", est.dsps, board.dsps);
  check_budget(&v, "bram", est.bram_bytes, board.bram_bytes);
  return v;
}

FeasibilityVerdict feasible(const ResourceEstimate& est, const Board& board,
                            const CpuConfig& config,
                            const PlacementDemand& demand) {
  FeasibilityVerdict v = feasible(est, board);
  uint64_t sram = demand.activation_bytes;
  uint64_t rom = 0;
  (config.code_region == Placement::kSram ? sram : rom) += demand.code_bytes;
  (config.weights_region == Placement::kSram ? sram : rom) +=
      demand.weight_bytes;
  check_budget(&v, "sram", sram, board.sram_bytes);
  check_budget(&v, "rom", rom, board.rom_bytes);
  return v;
}

}  // namespace cfusim
