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

#include "cfusim/dse.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cfusim/bench.h"
#include "cfusim/error.h"
#include "cfusim/prng.h"

namespace cfusim {
namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<size_t> choice_from_linear(const SearchSpace& space,
                                       uint64_t idx) {
  std::vector<size_t> choice(space.axes.size(), 0);
  for (size_t a = space.axes.size(); a-- > 0;) {
    size_t n = space.axes[a].values.size();
    choice[a] = static_cast<size_t>(idx % n);
    idx /= n;
  }
  return choice;
}

}  // namespace

SearchSpace parse_space_text(const std::string& text) {
  SearchSpace space;
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
      throw ParseError("space line " + std::to_string(number) +
                       ": expected axis = v1, v2, ...");
    }
    SearchAxis axis;
    axis.name = strip(line.substr(0, eq));
    for (const SearchAxis& seen : space.axes) {
      if (seen.name == axis.name) {
        throw ParseError("space line " + std::to_string(number) +
                         ": duplicate axis " + axis.name);
      }
    }
    std::string rest = line.substr(eq + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      std::string value = strip(comma == std::string::npos
                                    ? rest.substr(pos)
                                    : rest.substr(pos, comma - pos));
      if (value.empty()) {
        throw ParseError("space line " + std::to_string(number) +
                         ": empty value on axis " + axis.name);
      }
      for (const std::string& seen : axis.values) {
        if (seen == value) {
          throw ParseError("space line " + std::to_string(number) +
                           ": duplicate value '" + value + "'");
        }
      }
      CpuConfig scratch;
      apply_config_key(&scratch, axis.name, value);  // validates both parts
      axis.values.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    space.axes.push_back(std::move(axis));
  }
  return space;
}

SearchSpace load_space_file(const std::string& path) {
  return parse_space_text(read_file(path));
}

uint64_t space_cardinality(const SearchSpace& space) {
  uint64_t card = 1;
  for (const SearchAxis& a : space.axes) card *= a.values.size();
  return card;
}

CpuConfig config_at(const SearchSpace& space, const CpuConfig& base,
                    const std::vector<size_t>& choice) {
  CpuConfig cfg = base;
  for (size_t a = 0; a < space.axes.size(); ++a) {
    apply_config_key(&cfg, space.axes[a].name, space.axes[a].values[choice[a]]);
  }
  return cfg;
}

std::vector<std::vector<size_t>> enumerate_space(const SearchSpace& space,
                                                 uint64_t cap) {
  uint64_t card = space_cardinality(space);
  if (card > cap) {
    throw LimitError("space cardinality " + std::to_string(card) +
                     " exceeds cap " + std::to_string(cap));
  }
  std::vector<std::vector<size_t>> out;
  out.reserve(static_cast<size_t>(card));
  for (uint64_t i = 0; i < card; ++i) {
    out.push_back(choice_from_linear(space, i));
  }
  return out;
}

Trial evaluate_trial(const SearchSpace& space, const CpuConfig& base,
                     const std::vector<size_t>& choice,
                     const WorkloadSpec& workload, const TimingParams& timing,
                     uint64_t trial_id) {
  Trial t;
  t.trial_id = trial_id;
  t.choice = choice;
  t.config = config_at(space, base, choice);
  validate_config(t.config);
  t.variant = best_variant(t.config.cfu);
  t.estimate = estimate(t.config);
  const Board& board = find_board(builtin_boards(), t.config.board);
  FeasibilityVerdict verdict = feasible(
      t.estimate, board, t.config, placement_demand(workload, t.variant));
  t.feasible = verdict.feasible;
  if (t.feasible) {
    BenchResult res = run_benchmark(t.config, timing, workload, t.variant);
    t.cycles = res.report.total_cycles;
  }
  return t;
}

std::vector<size_t> pareto_front(const std::vector<Trial>& trials) {
  std::vector<size_t> order;
  for (size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].feasible) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Trial& ta = trials[a];
    const Trial& tb = trials[b];
    if (ta.estimate.luts != tb.estimate.luts) {
      return ta.estimate.luts < tb.estimate.luts;
    }
    if (ta.cycles != tb.cycles) return ta.cycles < tb.cycles;
    return ta.trial_id < tb.trial_id;
  });
  std::vector<size_t> front;
  uint64_t best_cycles = UINT64_MAX;
  for (size_t i : order) {
    if (trials[i].cycles < best_cycles) {
      front.push_back(i);
      best_cycles = trials[i].cycles;
    }
  }
  return front;
}

double hypervolume_2d(const std::vector<std::pair<double, double>>& front,
                      std::pair<double, double> ref) {
  for (const auto& p : front) {
    if (p.first > ref.first || p.second > ref.second) {
      throw std::invalid_argument("front point outside reference box");
    }
  }
  std::vector<std::pair<double, double>> pts = front;
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double cur_y = ref.second;
  for (const auto& p : pts) {
    if (p.second < cur_y) {
      area += (ref.first - p.first) * (cur_y - p.second);
      cur_y = p.second;
    }
  }
  return area;
}

SearchAlgo search_algo_from_string(const std::string& name) {
  if (name == "exhaustive") return SearchAlgo::kExhaustive;
  if (name == "random") return SearchAlgo::kRandom;
  if (name == "evolution") return SearchAlgo::kEvolution;
  throw ParseError("unknown search algorithm '" + name + "'");
}

namespace {

class Evaluator {
 public:
  Evaluator(const SearchSpace& space, const WorkloadSpec& workload,
            const DseOptions& options, DseResult* result)
      : space_(space), workload_(workload), options_(options),
        result_(result) {}

  // Returns the trial index, evaluating at most once per distinct choice.
  size_t eval(const std::vector<size_t>& choice) {
    auto it = cache_.find(choice);
    if (it != cache_.end()) return it->second;
    Trial t = evaluate_trial(space_, options_.base, choice, workload_,
                             options_.timing, result_->trials.size());
    result_->trials.push_back(std::move(t));
    size_t idx = result_->trials.size() - 1;
    cache_.emplace(choice, idx);
    return idx;
  }

  size_t unique_evals() const { return cache_.size(); }

 private:
  const SearchSpace& space_;
  const WorkloadSpec& workload_;
  const DseOptions& options_;
  DseResult* result_;
  std::map<std::vector<size_t>, size_t> cache_;
};

void run_random(const SearchSpace& space, Evaluator* ev, uint64_t card,
                const DseOptions& options) {
  uint64_t budget = std::min(options.budget, card);
  Prng64 rng(options.seed);
  if (card <= options.cap) {
    std::vector<uint64_t> order(static_cast<size_t>(card));
    for (uint64_t i = 0; i < card; ++i) order[static_cast<size_t>(i)] = i;
    for (size_t i = order.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng.next_below(i));
      std::swap(order[i - 1], order[j]);
    }
    for (uint64_t i = 0; i < budget; ++i) {
      ev->eval(choice_from_linear(space, order[static_cast<size_t>(i)]));
    }
    return;
  }
  std::unordered_set<uint64_t> seen;
  while (seen.size() < budget) {
    uint64_t idx = rng.next_below(card);
    if (!seen.insert(idx).second) continue;
    ev->eval(choice_from_linear(space, idx));
  }
}

void run_evolution(const SearchSpace& space, Evaluator* ev, uint64_t card,
                   const DseOptions& options, const DseResult& result) {
  constexpr size_t kPopulation = 25;
  constexpr size_t kTournament = 5;
  uint64_t budget = std::min(options.budget, card);
  Prng64 rng(options.seed);
  std::deque<size_t> population;  // trial indices, oldest first
  uint64_t max_luts = 1;
  uint64_t max_cycles = 1;
  auto note = [&](size_t trial_idx) {
    const Trial& t = result.trials[trial_idx];
    if (t.feasible) {
      max_luts = std::max<uint64_t>(max_luts, t.estimate.luts);
      max_cycles = std::max<uint64_t>(max_cycles, t.cycles);
    }
  };
  auto fitness = [&](size_t trial_idx, double w) {
    const Trial& t = result.trials[trial_idx];
    if (!t.feasible) return 1e18;
    return w * (static_cast<double>(t.estimate.luts) /
                static_cast<double>(max_luts)) +
           (1.0 - w) * (static_cast<double>(t.cycles) /
                        static_cast<double>(max_cycles));
  };
  auto random_choice = [&] {
    std::vector<size_t> c(space.axes.size());
    for (size_t a = 0; a < space.axes.size(); ++a) {
      c[a] = static_cast<size_t>(rng.next_below(space.axes[a].values.size()));
    }
    return c;
  };
  uint64_t guard = 50 * budget + 1000;
  for (uint64_t iter = 0; iter < guard && ev->unique_evals() < budget;
       ++iter) {
    std::vector<size_t> child;
    if (population.size() < kPopulation) {
      child = random_choice();
    } else {
      double w = rng.next_unit();
      size_t parent = population[static_cast<size_t>(
          rng.next_below(population.size()))];
      double best = fitness(parent, w);
      for (size_t t = 1; t < kTournament; ++t) {
        size_t cand = population[static_cast<size_t>(
            rng.next_below(population.size()))];
        double f = fitness(cand, w);
        if (f < best) {
          best = f;
          parent = cand;
        }
      }
      child = result.trials[parent].choice;
      std::vector<size_t> mutable_axes;
      for (size_t a = 0; a < space.axes.size(); ++a) {
        if (space.axes[a].values.size() > 1) mutable_axes.push_back(a);
      }
      if (mutable_axes.empty()) return;
      size_t axis = mutable_axes[static_cast<size_t>(
          rng.next_below(mutable_axes.size()))];
      size_t n = space.axes[axis].values.size();
      size_t shift = 1 + static_cast<size_t>(rng.next_below(n - 1));
      child[axis] = (child[axis] + shift) % n;
    }
    size_t idx = ev->eval(child);
    note(idx);
    population.push_back(idx);
    if (population.size() > kPopulation) population.pop_front();
  }
}

}  // namespace

DseResult run_dse(const SearchSpace& space, const WorkloadSpec& workload,
                  const DseOptions& options) {
  if (space.axes.empty()) throw ParseError("search space has no axes");
  DseResult result;
  result.cardinality = space_cardinality(space);
  Evaluator ev(space, workload, options, &result);
  switch (options.algo) {
    case SearchAlgo::kExhaustive: {
      for (const auto& choice : enumerate_space(space, options.cap)) {
        ev.eval(choice);
      }
      break;
    }
    case SearchAlgo::kRandom: {
      if (options.budget == 0) {
        throw std::invalid_argument("budget must be >= 1");
      }
      run_random(space, &ev, result.cardinality, options);
      break;
    }
    case SearchAlgo::kEvolution: {
      if (options.budget == 0) {
        throw std::invalid_argument("budget must be >= 1");
      }
      run_evolution(space, &ev, result.cardinality, options, result);
      break;
    }
  }
  result.front = pareto_front(result.trials);
  for (size_t i : result.front) result.trials[i].on_front = true;
  return result;
}

std::string trials_csv(const SearchSpace& space, const DseResult& result) {
  std::ostringstream out;
  out << "trial_id";
  for (const SearchAxis& a : space.axes) out << ',' << a.name;
  out << ",feasible,luts,dsps,bram_bytes,cycles,on_front\n";
  for (const Trial& t : result.trials) {
    out << t.trial_id;
    for (size_t a = 0; a < space.axes.size(); ++a) {
      out << ',' << space.axes[a].values[t.choice[a]];
    }
    out << ',' << (t.feasible ? 1 : 0) << ',' << t.estimate.luts << ','
        << t.estimate.dsps << ',' << t.estimate.bram_bytes << ',';
    if (t.feasible) out << t.cycles;
    out << ',' << (t.on_front ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace cfusim
