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

#ifndef RULEGRID_ENGINE_HPP_
#define RULEGRID_ENGINE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/rules.hpp"

namespace rulegrid {

struct RuleEvent {
  enum class Type : std::uint8_t { kBroken, kMade };

  Type type;
  Rule rule;
  int step = 0;  // index of the step that produced the event

  bool operator==(const RuleEvent&) const = default;
};

std::string to_string(const RuleEvent& event);

struct StepResult {
  GridState next;
  std::vector<RuleEvent> events;  // Broken before Made, each group sorted
  GameStatus status = GameStatus::kOngoing;
  bool moved = false;
};

class EpisodeOverError : public Error {
 public:
  EpisodeOverError() : Error("episode is already won") {}
};

// Won iff some YOU object shares a cell with a different, WIN object.
GameStatus game_status(const GridState& grid);
GameStatus game_status(const GridState& grid, const PropertyTable& table);

// Kind of the WIN object a YOU object is standing on, lowest kind first when
// several qualify.
std::optional<ObjectKind> winning_object_kind(const GridState& grid);

// One transition. Movement uses the rules active before the step; events and
// status use the rules after it. Throws EpisodeOverError on a won grid.
StepResult step(const GridState& grid, Action action, int step_index = 0);

struct RunResult {
  GridState final_state;
  std::vector<RuleEvent> trace;
  GameStatus status = GameStatus::kOngoing;
  int steps_taken = 0;  // stops early at the winning step
};

RunResult run(const GridState& grid, std::span<const Action> actions);

}  // namespace rulegrid

#endif  // RULEGRID_ENGINE_HPP_
