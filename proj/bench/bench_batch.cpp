// Copyright 2026 The rulegrid Authors
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

// Serial reference vs OpenMP batch kernels. Run with --benchmark_filter to
// pick one; the argument is the number of levels.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "rulegrid/batch.hpp"
#include "rulegrid/levelgen.hpp"

namespace rulegrid {
namespace {

std::vector<GenerationRequest> requests(int n) {
  const auto families = all_families();
  std::vector<GenerationRequest> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({families[i % families.size()], static_cast<std::uint64_t>(i)});
  }
  return out;
}

void BM_GenerateAll(benchmark::State& state, Execution execution) {
  const auto reqs = requests(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_all(reqs, {}, execution));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SolveAll(benchmark::State& state, Execution execution) {
  const auto levels = generate_all(requests(static_cast<int>(state.range(0))), {},
                                   Execution::kParallel);
  std::vector<GridState> grids;
  for (const LevelSpec& l : levels) grids.push_back(l.grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_all(grids, {}, execution));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_GenerateAll, serial, Execution::kSerial)
    ->Arg(34)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_GenerateAll, parallel, Execution::kParallel)
    ->Arg(34)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_SolveAll, serial, Execution::kSerial)
    ->Arg(68)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_SolveAll, parallel, Execution::kParallel)
    ->Arg(68)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace rulegrid

BENCHMARK_MAIN();
