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

// Batch kernels over independent levels. Each has a serial path, kept as the
// reference, and an OpenMP path that must produce identical results.

#ifndef RULEGRID_BATCH_HPP_
#define RULEGRID_BATCH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/solver.hpp"

namespace rulegrid {

enum class Execution { kSerial, kParallel };

struct GenerationRequest {
  EnvFamily family;
  std::uint64_t seed;
};

// Output order matches input order. If any request fails, the exception for
// the lowest failing index is rethrown after all workers finish.
std::vector<LevelSpec> generate_all(std::span<const GenerationRequest> requests,
                                    const GenConfig& config,
                                    Execution execution);

std::vector<SolveResult> solve_all(std::span<const GridState> grids,
                                   const SearchLimits& limits,
                                   Execution execution);

// Threads the parallel path will use (1 when built without OpenMP).
int max_threads();

}  // namespace rulegrid

#endif  // RULEGRID_BATCH_HPP_
