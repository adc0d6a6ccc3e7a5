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

#include <algorithm>
#include <string>
#include <vector>

#include "cfusim/costmodel.h"
#include "cfusim/error.h"
#include "doctest.h"

using namespace cfusim;

namespace {

const EstimateItem* item_named(const ResourceEstimate& est,
                               const std::string& feature) {
  for (const EstimateItem& it : est.items) {
    if (it.feature == feature) return &it;
  }
  return nullptr;
}

std::vector<std::string> item_names(const ResourceEstimate& est) {
  std::vector<std::string> names;
  for (const EstimateItem& it : est.items) names.push_back(it.feature);
  return names;
}

void check_totals_match_items(const ResourceEstimate& est) {
  uint64_t luts = 0, dsps = 0, bram = 0;
  for (const EstimateItem& it : est.items) {
    luts += it.cost.luts;
    dsps += it.cost.dsps;
    bram += it.cost.bram_bytes;
  }
  CHECK(est.luts == luts);
  CHECK(est.dsps == dsps);
  CHECK(est.bram_bytes == bram);
}

}  // namespace

TEST_CASE("builtin board catalog matches the shipped catalog file") {
  std::vector<Board> builtin = builtin_boards();
  std::vector<Board> parsed =
      load_boards_file(std::string(CFUSIM_DATA_DIR) + "/boards.conf");
  REQUIRE(builtin.size() == 6);
  REQUIRE(parsed.size() == builtin.size());
  for (size_t i = 0; i < builtin.size(); ++i) {
    CAPTURE(builtin[i].name);
    CHECK(parsed[i].name == builtin[i].name);
    CHECK(parsed[i].luts == builtin[i].luts);
    CHECK(parsed[i].dsps == builtin[i].dsps);
    CHECK(parsed[i].bram_bytes == builtin[i].bram_bytes);
    CHECK(parsed[i].sram_bytes == builtin[i].sram_bytes);
    CHECK(parsed[i].rom_bytes == builtin[i].rom_bytes);
    CHECK(parsed[i].clk_mhz == builtin[i].clk_mhz);
  }
}

TEST_CASE("shipped calibration file reproduces the built-in defaults") {
  FeatureCosts from_file =
      load_feature_costs_file(std::string(CFUSIM_DATA_DIR) +
                              "/feature_costs.conf");
  CpuConfig config;
  config.cfu = CfuKind::kCfu1;
  config.divider = Divider::kIterative;
  config.l2_bytes = 16384;
  ResourceEstimate a = estimate(config);
  ResourceEstimate b = estimate(config, from_file);
  CHECK(a.luts == b.luts);
  CHECK(a.dsps == b.dsps);
  CHECK(a.bram_bytes == b.bram_bytes);
  CHECK(a.items.size() == b.items.size());
}

TEST_CASE("estimate itemizes every enabled feature and sums exactly") {
  CpuConfig config;  // dynamic predictor, barrel, iterative mul, 4k+4k caches
  ResourceEstimate est = estimate(config);
  check_totals_match_items(est);
  std::vector<std::string> expect = {"base_cpu",        "predictor_dynamic",
                                     "barrel_shifter",  "iterative_multiplier",
                                     "icache",          "dcache"};
  CHECK(item_names(est) == expect);
  CHECK(est.luts == 1500u + 200u + 150u + 150u);
  CHECK(est.dsps == 0u);

  // Cache BRAM carries the 12.5% tag overhead.
  const EstimateItem* ic = item_named(est, "icache");
  REQUIRE(ic != nullptr);
  CHECK(ic->cost.bram_bytes == 4096u + 4096u / 8);
  CHECK(est.bram_bytes == 2 * (4096u + 512u));
}

TEST_CASE("estimate covers the optional features") {
  CpuConfig config;
  config.predictor = Predictor::kNone;
  config.multiplier = Multiplier::kSingleCycle;
  config.divider = Divider::kIterative;
  config.shifter = Shifter::kIterative;
  config.icache_bytes = 0;
  config.dcache_bytes = 0;
  config.l2_bytes = 32768;
  config.cfu = CfuKind::kCfu2;
  ResourceEstimate est = estimate(config);
  check_totals_match_items(est);
  CHECK(item_named(est, "predictor_none") == nullptr);
  CHECK(item_named(est, "barrel_shifter") == nullptr);
  CHECK(item_named(est, "icache") == nullptr);

  const EstimateItem* mul = item_named(est, "single_cycle_multiplier");
  REQUIRE(mul != nullptr);
  CHECK(mul->cost.luts == 0u);
  CHECK(mul->cost.dsps == 4u);

  const EstimateItem* divider = item_named(est, "iterative_divider");
  REQUIRE(divider != nullptr);
  CHECK(divider->cost.luts == 120u);

  const EstimateItem* l2 = item_named(est, "l2");
  REQUIRE(l2 != nullptr);
  CHECK(l2->cost.bram_bytes == 32768u + 4096u);

  const EstimateItem* unit = item_named(est, "cfu_cfu2");
  REQUIRE(unit != nullptr);
  CHECK(unit->cost.luts == 500u);
  CHECK(unit->cost.dsps == 4u);
  CHECK(unit->cost.bram_bytes == 0u);

  config.cfu = CfuKind::kCfu1;
  ResourceEstimate est1 = estimate(config);
  const EstimateItem* unit1 = item_named(est1, "cfu_cfu1");
  REQUIRE(unit1 != nullptr);
  CHECK(unit1->cost.luts == 1200u);
  CHECK(unit1->cost.dsps == 8u);
  CHECK(unit1->cost.bram_bytes == 2048u);
}

TEST_CASE("adding features never shrinks the estimate") {
  CpuConfig lean;
  lean.predictor = Predictor::kNone;
  lean.shifter = Shifter::kIterative;
  lean.icache_bytes = 0;
  lean.dcache_bytes = 0;
  ResourceEstimate prev = estimate(lean);

  auto grow = [&](auto mutate) {
    mutate();
    ResourceEstimate next = estimate(lean);
    CHECK(next.luts >= prev.luts);
    CHECK(next.dsps >= prev.dsps);
    CHECK(next.bram_bytes >= prev.bram_bytes);
    prev = next;
  };
  grow([&] { lean.predictor = Predictor::kStatic; });
  grow([&] { lean.predictor = Predictor::kDynamic; });
  grow([&] { lean.predictor = Predictor::kDynamicTarget; });
  grow([&] { lean.shifter = Shifter::kBarrel; });
  grow([&] { lean.divider = Divider::kIterative; });
  grow([&] { lean.icache_bytes = 1024; });
  grow([&] { lean.icache_bytes = 8192; });
  grow([&] { lean.dcache_bytes = 4096; });
  grow([&] { lean.l2_bytes = 65536; });
  grow([&] { lean.cfu = CfuKind::kDemo; });
  grow([&] { lean.cfu = CfuKind::kPostproc; });
}

TEST_CASE("small board rejects the large unit on the dsp budget") {
  std::vector<Board> boards = builtin_boards();
  const Board& fomu = find_board(boards, "fomu");
  CpuConfig config;
  config.multiplier = Multiplier::kSingleCycle;
  config.cfu = CfuKind::kCfu2;
  FeasibilityVerdict ok = feasible(estimate(config), fomu);
  CHECK(ok.feasible);
  CHECK(ok.violations.empty());

  config.cfu = CfuKind::kCfu1;
  FeasibilityVerdict bad = feasible(estimate(config), fomu);
  CHECK_FALSE(bad.feasible);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0] == "dsps 12 > 8");
}

TEST_CASE("placement demand is charged to the configured region") {
  const Board& fomu = find_board(builtin_boards(), "fomu");
  CpuConfig config;
  config.multiplier = Multiplier::kSingleCycle;
  config.cfu = CfuKind::kCfu2;
  ResourceEstimate est = estimate(config);

  PlacementDemand demand;
  demand.code_bytes = 4096;
  demand.weight_bytes = 100000;
  demand.activation_bytes = 40000;

  config.code_region = Placement::kSram;
  config.weights_region = Placement::kSram;
  FeasibilityVerdict tight = feasible(est, fomu, config, demand);
  CHECK_FALSE(tight.feasible);
  REQUIRE(tight.violations.size() == 1);
  CHECK(tight.violations[0] == "sram 144096 > 131072");

  config.weights_region = Placement::kFlash;
  FeasibilityVerdict relieved = feasible(est, fomu, config, demand);
  CHECK(relieved.feasible);

  // Activations stay in SRAM regardless of placement.
  config.code_region = Placement::kFlash;
  demand.activation_bytes = 200000;
  FeasibilityVerdict arenas = feasible(est, fomu, config, demand);
  CHECK_FALSE(arenas.feasible);
  REQUIRE(arenas.violations.size() == 1);
  CHECK(arenas.violations[0] == "sram 200000 > 131072");
}

TEST_CASE("calibration overrides feed into the estimate") {
  FeatureCosts fc = parse_feature_costs_text(
      "# tweak\n"
      "base_cpu_luts = 1000\n"
      "cfu_cfu1_luts = 999\n"
      "cfu_cfu1_bram_bytes = 4096\n");
  CpuConfig config;
  config.cfu = CfuKind::kCfu1;
  ResourceEstimate est = estimate(config, fc);
  const EstimateItem* base = item_named(est, "base_cpu");
  REQUIRE(base != nullptr);
  CHECK(base->cost.luts == 1000u);
  const EstimateItem* unit = item_named(est, "cfu_cfu1");
  REQUIRE(unit != nullptr);
  CHECK(unit->cost.luts == 999u);
  CHECK(unit->cost.dsps == 8u);  // untouched field keeps its default
  CHECK(unit->cost.bram_bytes == 4096u);
}

TEST_CASE("catalog and calibration parsers reject malformed text") {
  CHECK_THROWS_WITH_AS(parse_boards_text("[fomu\nluts = 1\n"),
                       "line 1: unterminated section header", ParseError);
  CHECK_THROWS_WITH_AS(parse_boards_text("luts = 5\n"),
                       "line 1: key before any [board] section", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_boards_text("[a]\nluts = 1\n[a]\n"),
      "line 3: duplicate board a", ParseError);
  CHECK_THROWS_WITH_AS(parse_boards_text("[a]\nwidgets = 9\n"),
                       "line 2: unknown key 'widgets'", ParseError);
  CHECK_THROWS_WITH_AS(parse_boards_text(""), "board catalog has no boards",
                       ParseError);
  CHECK_THROWS_WITH_AS(
      parse_boards_text("[a]\nluts = 1\ndsps = 1\nbram_bytes = 1\n"
                        "sram_bytes = 1\nrom_bytes = 1\n"),
      "board a: all capacities must be positive", ParseError);
  CHECK_THROWS_WITH_AS(parse_boards_text("[a]\nluts 5\n"),
                       "line 2: expected key = value", ParseError);

  CHECK_THROWS_WITH_AS(parse_feature_costs_text("wat = 5\n"),
                       "line 1: unknown key 'wat'", ParseError);
  CHECK_THROWS_WITH_AS(parse_feature_costs_text("cfu_cfu1_widgets = 5\n"),
                       "line 1: unknown key 'cfu_cfu1_widgets'", ParseError);
  CHECK_THROWS_WITH_AS(parse_feature_costs_text("base_cpu_luts = -4\n"),
                       "line 1: bad base_cpu_luts value '-4'", ParseError);
  CHECK_THROWS(load_boards_file("/nonexistent/boards.conf"));
}

TEST_CASE("board lookup rejects unknown names") {
  std::vector<Board> boards = builtin_boards();
  CHECK(find_board(boards, "ulx3s").dsps == 12u);
  CHECK_THROWS_WITH_AS(find_board(boards, "zynq"), "unknown board 'zynq'",
                       ParseError);
}
