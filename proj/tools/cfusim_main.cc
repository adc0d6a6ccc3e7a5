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

// Command-line driver: assemble/disassemble, run micro-programs, benchmark
// workloads, print optimization ladders, estimate resources, and drive
// design-space exploration.
//
// Exit codes: 0 ok, 1 usage, 2 infeasible config, 3 parse error, 4 golden
// mismatch, 5 internal limit.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfusim/bench.h"
#include "cfusim/costmodel.h"
#include "cfusim/dse.h"
#include "cfusim/error.h"
#include "cfusim/isa.h"
#include "cfusim/iss.h"
#include "cfusim/variants.h"
#include "cfusim/workloads.h"

namespace {

using namespace cfusim;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --cpu and --timing files share the config grammar; a timing-only file
// holds just the [timing] section.
void load_machine_options(const std::string& cpu_path,
                          const std::string& timing_path, CpuConfig* config,
                          TimingParams* timing) {
  if (!cpu_path.empty()) {
    parse_config_text(read_file(cpu_path), config, timing);
  }
  if (!timing_path.empty()) {
    CpuConfig scratch = *config;
    parse_config_text(read_file(timing_path), &scratch, timing);
  }
}

WorkloadSpec load_workload(const std::string& arg) {
  for (const std::string& name : bundled_workload_names()) {
    if (arg == name) return bundled_workload(name);
  }
  return load_tmdl_file(arg);
}

uint32_t parse_word_arg(const std::string& tok) {
  char* end = nullptr;
  unsigned long long v = std::strtoull(tok.c_str(), &end, 16);
  if (end == tok.c_str() || *end != '\0' || v > 0xFFFFFFFFull) {
    throw ParseError("bad word '" + tok + "' (expected up to 8 hex digits)");
  }
  return static_cast<uint32_t>(v);
}

void print_listing(uint32_t base, const std::vector<uint32_t>& words) {
  for (size_t i = 0; i < words.size(); ++i) {
    std::printf("%08x:  %08x  %s\n",
                static_cast<uint32_t>(base + 4 * i), words[i],
                disassemble(words[i]).c_str());
  }
}

void print_report(const CycleReport& r, bool profile) {
  std::printf("cycles        %" PRIu64 "\n", r.total_cycles);
  std::printf("  execute     %" PRIu64 "\n", r.execute_cycles);
  std::printf("  ifetch      %" PRIu64 "\n", r.ifetch_cycles);
  std::printf("instructions  %" PRIu64 "\n", r.instructions);
  std::printf("loads         %" PRIu64 "\n", r.loads);
  std::printf("stores        %" PRIu64 "\n", r.stores);
  std::printf("muls          %" PRIu64 "\n", r.muls);
  std::printf("cfu issues    %" PRIu64 "\n", r.cfu_issues);
  std::printf("dcache miss   %" PRIu64 "\n", r.dcache_misses);
  std::printf("mispredicts   %" PRIu64 "\n", r.branch_mispredicts);
  if (!profile) return;
  std::printf("%-12s %12s %14s %8s\n", "region", "invocations", "cycles",
              "percent");
  for (const RegionStat& s : r.regions) {
    std::printf("%-12s %12" PRIu64 " %14" PRIu64 " %7.2f%%\n", s.name.c_str(),
                s.invocations, s.cycles, s.percent);
  }
}

int cmd_asm(const std::string& input, const std::string& out) {
  ProgramImage image = assemble(read_file(input));
  if (out.empty()) {
    print_listing(image.origin, image.words);
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot open " + out);
  for (uint32_t w : image.words) {
    unsigned char b[4] = {static_cast<unsigned char>(w),
                          static_cast<unsigned char>(w >> 8),
                          static_cast<unsigned char>(w >> 16),
                          static_cast<unsigned char>(w >> 24)};
    f.write(reinterpret_cast<char*>(b), 4);
  }
  std::printf("%zu words written to %s (origin 0x%08x)\n", image.words.size(),
              out.c_str(), image.origin);
  return 0;
}

int cmd_disasm(const std::vector<std::string>& word_args,
               const std::string& in, uint64_t base) {
  std::vector<uint32_t> words;
  for (const std::string& tok : word_args) words.push_back(parse_word_arg(tok));
  if (!in.empty()) {
    std::string bytes = read_file(in);
    if (bytes.size() % 4 != 0) {
      throw ParseError(in + ": size is not a multiple of 4");
    }
    for (size_t i = 0; i < bytes.size(); i += 4) {
      words.push_back(static_cast<uint8_t>(bytes[i]) |
                      static_cast<uint8_t>(bytes[i + 1]) << 8 |
                      static_cast<uint8_t>(bytes[i + 2]) << 16 |
                      static_cast<uint8_t>(bytes[i + 3]) << 24);
    }
  }
  if (words.empty()) throw ParseError("nothing to disassemble");
  print_listing(static_cast<uint32_t>(base), words);
  return 0;
}

int cmd_run(const std::string& input, const std::string& cpu_path,
            const std::string& timing_path, uint64_t max_steps, bool trace) {
  CpuConfig config;
  TimingParams timing;
  load_machine_options(cpu_path, timing_path, &config, &timing);
  validate_config(config);
  ProgramImage image = assemble(read_file(input));
  Machine machine(config, timing);
  machine.load_program(image);
  RunResult r = machine.run(max_steps, trace ? &std::cout : nullptr);
  if (r.limit_hit) {
    throw LimitError("step limit " + std::to_string(max_steps) +
                     " reached at pc 0x" + std::to_string(r.stop_pc));
  }
  if (r.trapped) {
    std::printf("trap: %s (pc 0x%08x)\n", r.trap_reason.c_str(), r.stop_pc);
  } else {
    std::printf("halted at pc 0x%08x\n", r.stop_pc);
  }
  std::printf("instructions  %" PRIu64 "\n", r.instructions);
  std::printf("cycles        %" PRIu64 "\n", r.cycles);
  std::printf("a0            %u (0x%08x)\n", machine.reg(10), machine.reg(10));
  return 0;
}

int cmd_bench(const std::string& workload_arg, const std::string& variant_arg,
              const std::string& cpu_path, const std::string& timing_path,
              bool profile) {
  CpuConfig config;
  TimingParams timing;
  load_machine_options(cpu_path, timing_path, &config, &timing);
  WorkloadSpec w = load_workload(workload_arg);
  Variant v = variant_arg == "auto" ? best_variant(config.cfu)
                                    : variant_from_string(variant_arg);
  BenchResult res = run_benchmark(config, timing, w, v);
  std::printf("workload      %s\n", w.name.c_str());
  std::printf("variant       %s\n", variant_info(res.variant).name);
  std::printf("unit          %s\n", to_string(config.cfu));
  print_report(res.report, profile);
  return 0;
}

int cmd_ladder(const std::string& case_name, const std::string& timing_path) {
  TimingParams timing;
  CpuConfig scratch;
  if (!timing_path.empty()) {
    parse_config_text(read_file(timing_path), &scratch, &timing);
  }
  WorkloadSpec w = bundled_workload(ladder_workload_name(case_name));
  std::vector<LadderRow> rows = run_ladder(ladder_stages(case_name), w, timing);
  std::printf("%-16s %-14s %14s %8s\n", "stage", "variant", "cycles",
              "speedup");
  for (const LadderRow& row : rows) {
    std::printf("%-16s %-14s %14" PRIu64 " %7.2fx\n", row.stage.label.c_str(),
                variant_info(row.stage.variant).name,
                row.result.report.total_cycles, row.speedup);
  }
  return 0;
}

int cmd_boards(const std::string& boards_path) {
  std::vector<Board> catalog =
      boards_path.empty() ? builtin_boards() : load_boards_file(boards_path);
  std::printf("%-14s %8s %5s %12s %12s %10s %8s\n", "board", "luts", "dsps",
              "bram_bytes", "sram_bytes", "rom_bytes", "clk_mhz");
  for (const Board& b : catalog) {
    std::printf("%-14s %8u %5u %12" PRIu64 " %12" PRIu64 " %10" PRIu64
                " %8u\n",
                b.name.c_str(), b.luts, b.dsps, b.bram_bytes, b.sram_bytes,
                b.rom_bytes, b.clk_mhz);
  }
  return 0;
}

int cmd_estimate(const std::string& cpu_path, const std::string& boards_path,
                 const std::string& costs_path) {
  CpuConfig config;
  TimingParams timing;
  load_machine_options(cpu_path, "", &config, &timing);
  validate_config(config);
  FeatureCosts costs =
      costs_path.empty() ? FeatureCosts() : load_feature_costs_file(costs_path);
  std::vector<Board> catalog =
      boards_path.empty() ? builtin_boards() : load_boards_file(boards_path);
  ResourceEstimate est = estimate(config, costs);
  std::printf("%-26s %8s %5s %12s\n", "feature", "luts", "dsps", "bram_bytes");
  for (const EstimateItem& item : est.items) {
    std::printf("%-26s %8u %5u %12u\n", item.feature.c_str(), item.cost.luts,
                item.cost.dsps, item.cost.bram_bytes);
  }
  std::printf("%-26s %8u %5u %12" PRIu64 "\n", "total", est.luts, est.dsps,
              est.bram_bytes);
  const Board& board = find_board(catalog, config.board);
  FeasibilityVerdict verdict = feasible(est, board);
  if (verdict.feasible) {
    std::printf("feasible on %s\n", board.name.c_str());
    return 0;
  }
  std::string msg = "config infeasible on " + board.name + ":";
  for (const std::string& v : verdict.violations) msg += " " + v;
  throw InfeasibleError(msg);
}

int cmd_dse(const std::string& space_path, const std::string& workload_arg,
            const std::string& algo_name, uint64_t budget, uint64_t seed,
            const std::string& out, const std::string& cpu_path,
            const std::string& timing_path, uint64_t cap) {
  DseOptions options;
  load_machine_options(cpu_path, timing_path, &options.base, &options.timing);
  options.algo = search_algo_from_string(algo_name);
  options.budget = budget;
  options.seed = seed;
  options.cap = cap;
  if (options.algo != SearchAlgo::kExhaustive && budget == 0) {
    std::fprintf(stderr, "error: --budget is required for --algo %s\n",
                 algo_name.c_str());
    return 1;
  }
  SearchSpace space = load_space_file(space_path);
  WorkloadSpec w = load_workload(workload_arg);
  DseResult result = run_dse(space, w, options);
  std::string csv = trials_csv(space, result);
  size_t feasible_count = 0;
  for (const Trial& t : result.trials) feasible_count += t.feasible ? 1 : 0;
  std::FILE* summary = stdout;
  if (out.empty()) {
    std::fputs(csv.c_str(), stdout);
    summary = stderr;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ParseError("cannot open " + out);
    f << csv;
  }
  std::fprintf(summary, "space cardinality  %" PRIu64 "\n", result.cardinality);
  std::fprintf(summary, "trials evaluated   %zu\n", result.trials.size());
  std::fprintf(summary, "feasible trials    %zu\n", feasible_count);
  std::fprintf(summary, "front size         %zu\n", result.front.size());
  for (size_t i : result.front) {
    const Trial& t = result.trials[i];
    std::fprintf(summary,
                 "  front: trial %" PRIu64 "  luts %u  cycles %" PRIu64
                 "  variant %s\n",
                 t.trial_id, t.estimate.luts, t.cycles,
                 variant_info(t.variant).name);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft CPU + custom function unit co-design explorer"};
  app.require_subcommand(1);

  std::string input, out, in_file, cpu_path, timing_path, boards_path;
  std::string costs_path, workload_arg, variant_arg = "auto";
  std::string case_name, space_path, algo_name = "exhaustive";
  std::vector<std::string> word_args;
  uint64_t base = 0, max_steps = 50'000'000, budget = 0, seed = 1;
  uint64_t cap = 100000;
  bool profile = false, trace = false;

  CLI::App* c_asm = app.add_subcommand("asm", "assemble a .s file");
  c_asm->add_option("input", input, "assembly source")->required();
  c_asm->add_option("--out", out, "binary output (default: print listing)");

  CLI::App* c_dis = app.add_subcommand("disasm", "disassemble words");
  c_dis->add_option("words", word_args, "hex instruction words");
  c_dis->add_option("--in", in_file, "binary file of little-endian words");
  c_dis->add_option("--base", base, "address of the first word");

  CLI::App* c_run = app.add_subcommand("run", "assemble and execute");
  c_run->add_option("input", input, "assembly source")->required();
  c_run->add_option("--cpu", cpu_path, "CPU config file");
  c_run->add_option("--timing", timing_path, "timing override file");
  c_run->add_option("--max-steps", max_steps, "instruction limit");
  c_run->add_flag("--trace", trace, "print each retired instruction");

  CLI::App* c_bench = app.add_subcommand("bench", "benchmark a workload");
  c_bench->add_option("--workload", workload_arg, "tmdl file or bundled name")
      ->required();
  c_bench->add_option("--variant", variant_arg,
                      "kernel variant (auto = best for the unit)");
  c_bench->add_option("--cpu", cpu_path, "CPU config file");
  c_bench->add_option("--timing", timing_path, "timing override file");
  c_bench->add_flag("--profile", profile, "print the per-region profile");

  CLI::App* c_ladder = app.add_subcommand("ladder", "print a case ladder");
  c_ladder->add_option("--case", case_name, "mnv2 or kws")->required();
  c_ladder->add_option("--timing", timing_path, "timing override file");

  CLI::App* c_dse = app.add_subcommand("dse", "explore a design space");
  c_dse->add_option("--space", space_path, "space file")->required();
  c_dse->add_option("--workload", workload_arg, "tmdl file or bundled name")
      ->required();
  c_dse->add_option("--algo", algo_name, "exhaustive, random, or evolution");
  c_dse->add_option("--budget", budget, "trials for random/evolution");
  c_dse->add_option("--seed", seed, "search seed");
  c_dse->add_option("--out", out, "CSV output (default: stdout)");
  c_dse->add_option("--cpu", cpu_path, "base CPU config file");
  c_dse->add_option("--timing", timing_path, "timing override file");
  c_dse->add_option("--max-points", cap, "exhaustive enumeration cap");

  CLI::App* c_boards = app.add_subcommand("boards", "print the board catalog");
  c_boards->add_option("--boards", boards_path, "catalog file override");

  CLI::App* c_est = app.add_subcommand("estimate", "estimate FPGA resources");
  c_est->add_option("--cpu", cpu_path, "CPU config file");
  c_est->add_option("--boards", boards_path, "catalog file override");
  c_est->add_option("--costs", costs_path, "feature cost file override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_asm->parsed()) return cmd_asm(input, out);
    if (c_dis->parsed()) return cmd_disasm(word_args, in_file, base);
    if (c_run->parsed()) {
      return cmd_run(input, cpu_path, timing_path, max_steps, trace);
    }
    if (c_bench->parsed()) {
      return cmd_bench(workload_arg, variant_arg, cpu_path, timing_path,
                       profile);
    }
    if (c_ladder->parsed()) return cmd_ladder(case_name, timing_path);
    if (c_dse->parsed()) {
      return cmd_dse(space_path, workload_arg, algo_name, budget, seed, out,
                     cpu_path, timing_path, cap);
    }
    if (c_boards->parsed()) return cmd_boards(boards_path);
    if (c_est->parsed()) {
      return cmd_estimate(cpu_path, boards_path, costs_path);
    }
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const GoldenMismatchError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const LimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
