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

#include "rulegrid/batch.hpp"

#include <exception>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rulegrid {
namespace {

template <typename Out, typename Fn>
std::vector<Out> map_indices(std::size_t n, Execution execution, Fn fn) {
  std::vector<std::optional<Out>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const auto body = [&](std::size_t i) {
    try {
      slots[i].emplace(fn(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    const auto count = static_cast<std::int64_t>(n);
    // Dynamic schedule: per-level cost varies by orders of magnitude.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
  std::vector<Out> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace

std::vector<LevelSpec> generate_all(std::span<const GenerationRequest> requests,
                                    const GenConfig& config,
                                    Execution execution) {
  return map_indices<LevelSpec>(requests.size(), execution, [&](std::size_t i) {
    return generate(requests[i].family, requests[i].seed, config);
  });
}

std::vector<SolveResult> solve_all(std::span<const GridState> grids,
                                   const SearchLimits& limits,
                                   Execution execution) {
  return map_indices<SolveResult>(grids.size(), execution, [&](std::size_t i) {
    return solve(grids[i], limits);
  });
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rulegrid
