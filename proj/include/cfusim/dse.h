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

// Design-space exploration over CpuConfig axes: exhaustive, random, and
// regularized-evolution search, Pareto-front extraction (minimize LUTs and
// cycles), hypervolume scoring, and a trials CSV for plotting.

#ifndef CFUSIM_DSE_H_
#define CFUSIM_DSE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cfusim/config.h"
#include "cfusim/costmodel.h"
#include "cfusim/variants.h"
#include "cfusim/workloads.h"

namespace cfusim {

struct SearchAxis {
  std::string name;                 // a CpuConfig field name
  std::vector<std::string> values;  // legal values for that field
};

struct SearchSpace {
  std::vector<SearchAxis> axes;
};

// "axis = v1, v2, ..." lines; '#' comments. Names must be distinct
// CpuConfig fields and every value must parse for its field. Throws
// ParseError.
SearchSpace parse_space_text(const std::string& text);
SearchSpace load_space_file(const std::string& path);

uint64_t space_cardinality(const SearchSpace& space);

// Applies one value choice per axis (indices into each value list) onto a
// base config.
CpuConfig config_at(const SearchSpace& space, const CpuConfig& base,
                    const std::vector<size_t>& choice);

// All choices in lexicographic order over the axis value lists. Throws
// LimitError when the cardinality exceeds cap.
std::vector<std::vector<size_t>> enumerate_space(const SearchSpace& space,
                                                 uint64_t cap);

struct Trial {
  uint64_t trial_id = 0;
  std::vector<size_t> choice;
  CpuConfig config;
  Variant variant = Variant::kBaseline;
  bool feasible = false;
  ResourceEstimate estimate;
  uint64_t cycles = 0;  // meaningful only when feasible
  bool on_front = false;
};

// Estimates, gates, and (when feasible) benchmarks the config with the
// most specialized variant its unit supports.
Trial evaluate_trial(const SearchSpace& space, const CpuConfig& base,
                     const std::vector<size_t>& choice,
                     const WorkloadSpec& workload, const TimingParams& timing,
                     uint64_t trial_id);

// Indices of the non-dominated feasible trials, ascending LUTs. Weak
// dominance, minimizing (luts, cycles); among exactly equal points the
// lowest trial_id wins.
std::vector<size_t> pareto_front(const std::vector<Trial>& trials);

// Exact dominated area of an all-minimization front against a reference
// point. Every point must sit strictly inside the reference box; throws
// std::invalid_argument otherwise.
double hypervolume_2d(const std::vector<std::pair<double, double>>& front,
                      std::pair<double, double> ref);

enum class SearchAlgo { kExhaustive, kRandom, kEvolution };

SearchAlgo search_algo_from_string(const std::string& name);  // ParseError

struct DseOptions {
  SearchAlgo algo = SearchAlgo::kExhaustive;
  uint64_t budget = 0;        // ignored by exhaustive
  uint64_t seed = 1;
  uint64_t cap = 100000;      // exhaustive/enumeration guard
  CpuConfig base;             // values for axes the space leaves fixed
  TimingParams timing;
};

struct DseResult {
  uint64_t cardinality = 0;
  std::vector<Trial> trials;        // dense trial_id order
  std::vector<size_t> front;        // indices into trials
};

// Deterministic under (space, workload, options): exhaustive walks the
// lexicographic order; random samples without replacement; evolution is
// regularized evolution (population 25, tournament 5, single-axis
// mutation, random-weight scalarized fitness).
DseResult run_dse(const SearchSpace& space, const WorkloadSpec& workload,
                  const DseOptions& options);

// Header "trial_id,<axes>,feasible,luts,dsps,bram_bytes,cycles,on_front";
// booleans as 0/1, infeasible cycles empty.
std::string trials_csv(const SearchSpace& space, const DseResult& result);

}  // namespace cfusim

#endif  // CFUSIM_DSE_H_
