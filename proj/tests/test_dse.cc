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

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfusim/dse.h"
#include "cfusim/error.h"
#include "doctest.h"

using namespace cfusim;

namespace {

SearchSpace small_space() {
  return load_space_file(std::string(CFUSIM_DATA_DIR) + "/small36.space");
}

Trial point(uint64_t id, uint32_t luts, uint64_t cycles, bool ok = true) {
  Trial t;
  t.trial_id = id;
  t.feasible = ok;
  t.estimate.luts = luts;
  t.cycles = cycles;
  return t;
}

std::set<std::pair<uint64_t, uint64_t>> front_points(const DseResult& r) {
  std::set<std::pair<uint64_t, uint64_t>> pts;
  for (size_t i : r.front) {
    pts.insert({r.trials[i].estimate.luts, r.trials[i].cycles});
  }
  return pts;
}

}  // namespace

TEST_CASE("shipped search spaces parse to their documented cardinality") {
  SearchSpace small = small_space();
  REQUIRE(small.axes.size() == 4);
  CHECK(small.axes[0].name == "icache_bytes");
  CHECK(small.axes[0].values.size() == 3);
  CHECK(small.axes[1].name == "multiplier");
  CHECK(small.axes[2].name == "predictor");
  CHECK(small.axes[3].name == "shifter");
  CHECK(space_cardinality(small) == 36);

  SearchSpace def =
      load_space_file(std::string(CFUSIM_DATA_DIR) + "/default.space");
  CHECK(def.axes.size() == 7);
  CHECK(space_cardinality(def) == 512);
}

TEST_CASE("space parser rejects malformed axis lines") {
  CHECK_THROWS_WITH_AS(parse_space_text("predictor none\n"),
                       "space line 1: expected axis = v1, v2, ...", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_space_text("predictor = none\npredictor = static\n"),
      "space line 2: duplicate axis predictor", ParseError);
  CHECK_THROWS_WITH_AS(parse_space_text("predictor = none, none\n"),
                       "space line 1: duplicate value 'none'", ParseError);
  CHECK_THROWS_WITH_AS(parse_space_text("predictor = none,,static\n"),
                       "space line 1: empty value on axis predictor",
                       ParseError);
  CHECK_THROWS_AS(parse_space_text("warp_factor = 9\n"), ParseError);
  CHECK_THROWS_AS(parse_space_text("predictor = psychic\n"), ParseError);
}

TEST_CASE("enumeration walks lexicographic order with the last axis fastest") {
  SearchSpace space = parse_space_text(
      "multiplier = iterative, single_cycle\n"
      "predictor = none, static, dynamic\n");
  std::vector<std::vector<size_t>> all = enumerate_space(space, 100);
  std::vector<std::vector<size_t>> expect = {{0, 0}, {0, 1}, {0, 2},
                                             {1, 0}, {1, 1}, {1, 2}};
  CHECK(all == expect);
  CHECK_THROWS_WITH_AS(enumerate_space(space, 5),
                       "space cardinality 6 exceeds cap 5", LimitError);
}

TEST_CASE("choices apply onto a base config") {
  SearchSpace space = parse_space_text(
      "predictor = none, dynamic\n"
      "icache_bytes = 1024, 2048\n");
  CpuConfig base;
  base.dcache_bytes = 512;
  CpuConfig got = config_at(space, base, {0, 1});
  CHECK(got.predictor == Predictor::kNone);
  CHECK(got.icache_bytes == 2048u);
  CHECK(got.dcache_bytes == 512u);  // untouched axis keeps the base value
}

TEST_CASE("pareto front keeps exactly the non-dominated feasible points") {
  std::vector<Trial> trials = {point(0, 5, 1), point(1, 3, 3), point(2, 1, 5),
                               point(3, 4, 4), point(4, 2, 6)};
  std::vector<size_t> front = pareto_front(trials);
  std::vector<size_t> expect = {2, 1, 0};  // ascending luts
  CHECK(front == expect);

  SUBCASE("weak dominance removes ties on one axis") {
    trials.push_back(point(5, 3, 4));  // dominated by (3,3)
    trials.push_back(point(6, 5, 1));  // duplicate of trial 0
    front = pareto_front(trials);
    CHECK(front == expect);  // duplicate loses to the lower trial_id
  }
  SUBCASE("infeasible points never reach the front") {
    trials.push_back(point(7, 0, 0, false));
    front = pareto_front(trials);
    CHECK(front == expect);
  }
  SUBCASE("equal points keep the lowest trial id") {
    std::vector<Trial> dup = {point(9, 2, 2), point(4, 2, 2)};
    std::vector<size_t> got = pareto_front(dup);
    REQUIRE(got.size() == 1);
    CHECK(dup[got[0]].trial_id == 4);
  }
}

TEST_CASE("hypervolume matches hand-computed fixtures") {
  CHECK(hypervolume_2d({{1.0, 1.0}}, {3.0, 3.0}) == doctest::Approx(4.0));
  CHECK(hypervolume_2d({{1.0, 2.0}, {2.0, 1.0}}, {3.0, 3.0}) ==
        doctest::Approx(3.0));
  CHECK(hypervolume_2d({}, {3.0, 3.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(hypervolume_2d({{4.0, 1.0}}, {3.0, 3.0}),
                  std::invalid_argument);

  // Adding a point never shrinks the dominated area; a dominated point
  // adds nothing.
  double base = hypervolume_2d({{1.0, 2.0}}, {3.0, 3.0});
  double more = hypervolume_2d({{1.0, 2.0}, {2.0, 1.0}}, {3.0, 3.0});
  CHECK(more >= base);
  CHECK(hypervolume_2d({{1.0, 1.0}, {2.0, 2.0}}, {3.0, 3.0}) ==
        doctest::Approx(4.0));
}

TEST_CASE("random search at full budget matches the exhaustive front") {
  SearchSpace space = small_space();
  WorkloadSpec w = bundled_workload("mnv2_slice");

  DseOptions exhaustive;
  exhaustive.algo = SearchAlgo::kExhaustive;
  DseResult ex = run_dse(space, w, exhaustive);
  CHECK(ex.cardinality == 36);
  REQUIRE(ex.trials.size() == 36);
  for (size_t i = 0; i < ex.trials.size(); ++i) {
    CHECK(ex.trials[i].trial_id == i);
  }
  CHECK_FALSE(ex.front.empty());
  for (size_t i : ex.front) CHECK(ex.trials[i].on_front);

  DseOptions random;
  random.algo = SearchAlgo::kRandom;
  random.budget = 36;
  random.seed = 7;
  DseResult rnd = run_dse(space, w, random);
  REQUIRE(rnd.trials.size() == 36);
  CHECK(front_points(rnd) == front_points(ex));
}

TEST_CASE("searches are deterministic for a fixed seed") {
  SearchSpace space = small_space();
  WorkloadSpec w = bundled_workload("mnv2_slice");

  DseOptions random;
  random.algo = SearchAlgo::kRandom;
  random.budget = 12;
  random.seed = 5;
  DseResult a = run_dse(space, w, random);
  DseResult b = run_dse(space, w, random);
  CHECK(trials_csv(space, a) == trials_csv(space, b));
  CHECK(a.trials.size() == 12);

  DseOptions evo;
  evo.algo = SearchAlgo::kEvolution;
  evo.budget = 20;
  evo.seed = 3;
  DseResult c = run_dse(space, w, evo);
  DseResult d = run_dse(space, w, evo);
  CHECK(trials_csv(space, c) == trials_csv(space, d));
  CHECK(c.trials.size() <= 20);
  CHECK_FALSE(c.trials.empty());
}

TEST_CASE("search option validation") {
  SearchSpace space = small_space();
  WorkloadSpec w = bundled_workload("mnv2_slice");
  DseOptions opt;
  opt.algo = SearchAlgo::kRandom;
  opt.budget = 0;
  CHECK_THROWS_AS(run_dse(space, w, opt), std::invalid_argument);
  opt.algo = SearchAlgo::kEvolution;
  CHECK_THROWS_AS(run_dse(space, w, opt), std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_dse(SearchSpace{}, w, DseOptions{}),
                       "search space has no axes", ParseError);

  CHECK(search_algo_from_string("exhaustive") == SearchAlgo::kExhaustive);
  CHECK(search_algo_from_string("random") == SearchAlgo::kRandom);
  CHECK(search_algo_from_string("evolution") == SearchAlgo::kEvolution);
  CHECK_THROWS_WITH_AS(search_algo_from_string("grid"),
                       "unknown search algorithm 'grid'", ParseError);
}

TEST_CASE("trials csv spells every column") {
  SearchSpace space = parse_space_text("predictor = none, dynamic\n");
  DseResult result;
  Trial t0 = point(0, 10, 100);
  t0.choice = {0};
  t0.estimate.dsps = 1;
  t0.estimate.bram_bytes = 2;
  t0.on_front = true;
  Trial t1 = point(1, 5, 0, false);
  t1.choice = {1};
  result.trials = {t0, t1};
  std::string csv = trials_csv(space, result);
  CHECK(csv ==
        "trial_id,predictor,feasible,luts,dsps,bram_bytes,cycles,on_front\n"
        "0,none,1,10,1,2,100,1\n"
        "1,dynamic,0,5,0,0,,0\n");
}

TEST_CASE("trial evaluation gates on the board before benchmarking") {
  SearchSpace space = small_space();
  WorkloadSpec w = bundled_workload("mnv2_slice");
  Trial t = evaluate_trial(space, CpuConfig{}, {0, 0, 0, 0}, w,
                           TimingParams{}, 42);
  CHECK(t.trial_id == 42);
  CHECK(t.variant == Variant::kSwSpec);  // best variant without a unit
  CHECK(t.feasible);                     // fits arty-a7-35t
  CHECK(t.cycles > 0);
  CHECK(t.estimate.luts > 0);
}
