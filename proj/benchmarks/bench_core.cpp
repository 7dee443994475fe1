#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ots/connectivity.hpp"
#include "ots/dc_analysis.hpp"
#include "ots/errors.hpp"
#include "ots/grid.hpp"
#include "ots/milp.hpp"
#include "ots/ots_problem.hpp"
#include "ots/ots_solve.hpp"

namespace {

const ots::GridCase& study() {
  static const ots::GridCase grid =
      ots::load_case(std::string(OTS_BENCH_CASE_DIR) + "/ieee14_ots.json");
  return grid;
}

ots::SwitchingState optimized_state() {
  const int ids[] = {5, 7, 8, 19};
  return ots::SwitchingState::from_ids(20, ids);
}

void BM_EnergizedSet14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  std::vector<std::uint8_t> mask(20, 0);
  mask[13] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ots::energized_set(grid, mask, 0));
}
BENCHMARK(BM_EnergizedSet14);

void BM_DcFlow14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  const std::vector<std::uint8_t> mask(20, 0);
  std::vector<double> injections;
  for (const ots::Bus& bus : grid.buses()) injections.push_back(bus.gen_mw - bus.load_mw);
  for (auto _ : state)
    benchmark::DoNotOptimize(ots::dc_flow(grid, mask, injections, 0));
}
BENCHMARK(BM_DcFlow14);

void BM_ContingencyOutcome14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  const ots::SwitchingState plan = optimized_state();
  for (auto _ : state)
    benchmark::DoNotOptimize(ots::analyze_contingency(grid, plan, 9));
}
BENCHMARK(BM_ContingencyOutcome14);

void BM_SecurityReport14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  const ots::SwitchingState plan = optimized_state();
  for (auto _ : state) benchmark::DoNotOptimize(ots::security_report(grid, plan));
}
BENCHMARK(BM_SecurityReport14);

void BM_BuildProblem14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  for (auto _ : state) benchmark::DoNotOptimize(ots::OtsProblem::build_full(grid));
}
BENCHMARK(BM_BuildProblem14);

void BM_SerializeLp14(benchmark::State& state) {
  const ots::OtsProblem problem = ots::OtsProblem::build_full(study());
  for (auto _ : state) benchmark::DoNotOptimize(ots::milp::serialize_lp(problem.model()));
}
BENCHMARK(BM_SerializeLp14);

void BM_EnumerateTwoOpenings14(benchmark::State& state) {
  const ots::GridCase& grid = study();
  ots::EnumerateOptions options;
  options.threads = 1;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(ots::enumerate(grid, 2, options));
    } catch (const ots::InfeasibleProblem&) {
      // still measures the full candidate scan
    }
  }
}
BENCHMARK(BM_EnumerateTwoOpenings14);

}  // namespace

BENCHMARK_MAIN();
