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

#ifndef RULEGRID_SOLVER_HPP_
#define RULEGRID_SOLVER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/engine.hpp"
#include "rulegrid/plan.hpp"

namespace rulegrid {

struct SearchLimits {
  std::size_t max_states = 2'000'000;
  int max_depth = 200;
};

struct Solution {
  Plan plan;
  std::vector<Action> actions;
  std::size_t states_expanded = 0;
};

enum class SolveStatus { kSolved, kUnsolvable, kLimitExceeded };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsolvable;
  std::optional<Solution> solution;  // set iff kSolved
  std::size_t states_expanded = 0;
};

// Breadth-first search over whole states, deduplicated by state key. The
// first winning state found has minimal action depth; ties go to the
// earliest action in up, down, left, right order. The plan is the lifted
// rule-event trace of that trajectory with cancellation on.
// Throws EpisodeOverError if the grid is already won.
SolveResult solve(const GridState& grid, const SearchLimits& limits = {});

// Maps Broken -> break, Made -> make and appends `goto winning_kind`. With
// the intent filter on, an event that undoes the immediately preceding
// surviving event of the same rule cancels it.
Plan lift_trace(std::span<const RuleEvent> trace, ObjectKind winning_kind,
                bool intent_filter = true);

struct Validation {
  enum class Reason { kNone, kMissingBlocks, kNoWitnessFound, kLimitExceeded };

  bool valid = false;
  Reason reason = Reason::kNone;
  std::vector<Action> witness;  // set iff valid
};

std::string_view to_string(Validation::Reason reason);

// Searches for a winning trajectory whose lifted trace equals `plan`. Events
// from a single step may match adjacent plan steps in any order, and up to
// two unmatched events may be pending cancellation at any time.
Validation validate_plan(const GridState& grid, const Plan& plan,
                         const SearchLimits& limits = {});

// Every distinct lifted plan over all winning trajectories of minimal
// length. Empty if nothing wins within the limits. Sorted by canonical text.
std::vector<Plan> enumerate_minimal_plans(const GridState& grid,
                                          const SearchLimits& limits = {});

}  // namespace rulegrid

#endif  // RULEGRID_SOLVER_HPP_
