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

#include "rulegrid/engine.hpp"

#include <algorithm>
#include <array>

namespace rulegrid {
namespace {

// Per-cell occupancy for one transition. Text blocks are alone in a cell;
// objects come at most two to a cell.
struct Occupancy {
  std::array<std::int16_t, kMaxCells> text;
  std::array<std::array<std::int16_t, 2>, kMaxCells> objects;
  std::array<std::uint8_t, kMaxCells> object_count;

  explicit Occupancy(const GridState& grid, std::span<const Entity> ents) {
    text.fill(-1);
    object_count.fill(0);
    for (std::size_t i = 0; i < ents.size(); ++i) {
      const int cell = grid.cell_index(ents[i].pos);
      if (ents[i].kind.is_text()) {
        text[cell] = static_cast<std::int16_t>(i);
      } else {
        objects[cell][object_count[cell]++] = static_cast<std::int16_t>(i);
      }
    }
  }

  void remove_object(int cell, int index) {
    auto& slots = objects[cell];
    if (slots[0] == index) slots[0] = slots[1];
    --object_count[cell];
  }

  void add_object(int cell, int index) {
    objects[cell][object_count[cell]++] = static_cast<std::int16_t>(index);
  }
};

// Larger means farther along the direction of travel.
int progress(Position pos, Action action) {
  switch (action) {
    case Action::kUp: return -pos.row;
    case Action::kDown: return pos.row;
    case Action::kLeft: return -pos.col;
    case Action::kRight: return pos.col;
  }
  return 0;
}

void append_rule_diff(const std::vector<Rule>& before,
                      const std::vector<Rule>& after, int step_index,
                      std::vector<RuleEvent>& events) {
  std::vector<Rule> diff;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(diff));
  for (const Rule& r : diff) {
    events.push_back({RuleEvent::Type::kBroken, r, step_index});
  }
  diff.clear();
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::back_inserter(diff));
  for (const Rule& r : diff) {
    events.push_back({RuleEvent::Type::kMade, r, step_index});
  }
}

std::vector<Rule> rules_of(const std::vector<ActiveRuleInstance>& instances) {
  std::vector<Rule> out;
  out.reserve(instances.size());
  for (const auto& r : instances) out.push_back(r.rule);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string to_string(const RuleEvent& event) {
  return std::string(event.type == RuleEvent::Type::kBroken ? "broken" : "made") +
         " \"" + to_string(event.rule) + "\" @" + std::to_string(event.step);
}

GameStatus game_status(const GridState& grid, const PropertyTable& table) {
  const auto ents = grid.entities();
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const Entity& you = ents[i];
    if (!you.kind.is_object() ||
        !table.has(you.kind.object(), PropertyKind::kYou)) {
      continue;
    }
    for (std::size_t j = 0; j < ents.size(); ++j) {
      const Entity& win = ents[j];
      if (j != i && win.kind.is_object() && win.pos == you.pos &&
          table.has(win.kind.object(), PropertyKind::kWin)) {
        return GameStatus::kWon;
      }
    }
  }
  return GameStatus::kOngoing;
}

GameStatus game_status(const GridState& grid) {
  return game_status(grid, property_table(grid));
}

std::optional<ObjectKind> winning_object_kind(const GridState& grid) {
  const PropertyTable table = property_table(grid);
  std::optional<ObjectKind> best;
  const auto ents = grid.entities();
  for (std::size_t i = 0; i < ents.size(); ++i) {
    if (!ents[i].kind.is_object() ||
        !table.has(ents[i].kind.object(), PropertyKind::kYou)) {
      continue;
    }
    for (std::size_t j = 0; j < ents.size(); ++j) {
      const Entity& win = ents[j];
      if (j != i && win.kind.is_object() && win.pos == ents[i].pos &&
          table.has(win.kind.object(), PropertyKind::kWin)) {
        if (!best || win.kind.object() < *best) best = win.kind.object();
      }
    }
  }
  return best;
}

StepResult step(const GridState& grid, Action action, int step_index) {
  const auto before_instances = scan_active_rules(grid);
  const PropertyTable table = property_table(before_instances);
  if (game_status(grid, table) == GameStatus::kWon) throw EpisodeOverError();

  std::vector<Entity> ents(grid.entities().begin(), grid.entities().end());
  std::vector<int> movers;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    if (ents[i].kind.is_object() &&
        table.has(ents[i].kind.object(), PropertyKind::kYou)) {
      movers.push_back(static_cast<int>(i));
    }
  }
  if (movers.empty()) return StepResult{grid, {}, GameStatus::kOngoing, false};

  // Farthest-first so a leading mover vacates before a trailing one enters.
  std::sort(movers.begin(), movers.end(), [&](int a, int b) {
    const int pa = progress(ents[a].pos, action);
    const int pb = progress(ents[b].pos, action);
    if (pa != pb) return pa > pb;
    return ents[a].id < ents[b].id;
  });

  Occupancy occ(grid, ents);
  bool moved = false;
  for (int m : movers) {
    const Position from = ents[m].pos;
    const Position to = from.shifted(action);
    if (!grid.in_bounds(to)) continue;
    const int target = grid.cell_index(to);

    if (occ.text[target] >= 0) {
      // Push the maximal contiguous chain of text ahead of the mover.
      std::array<int, kMaxGridSide> chain;
      int length = 0;
      Position cursor = to;
      while (grid.in_bounds(cursor) && occ.text[grid.cell_index(cursor)] >= 0) {
        chain[length++] = grid.cell_index(cursor);
        cursor = cursor.shifted(action);
      }
      if (!grid.in_bounds(cursor) ||
          occ.object_count[grid.cell_index(cursor)] > 0) {
        continue;
      }
      for (int k = length - 1; k >= 0; --k) {
        const int idx = occ.text[chain[k]];
        const Position dest = ents[idx].pos.shifted(action);
        ents[idx].pos = dest;
        occ.text[grid.cell_index(dest)] = static_cast<std::int16_t>(idx);
        occ.text[chain[k]] = -1;
      }
    } else {
      const int count = occ.object_count[target];
      if (count >= 2) continue;
      bool stop = false;
      for (int k = 0; k < count; ++k) {
        const Entity& other = ents[occ.objects[target][k]];
        if (table.has(other.kind.object(), PropertyKind::kStop)) stop = true;
      }
      if (stop) continue;
    }

    occ.remove_object(grid.cell_index(from), m);
    occ.add_object(target, m);
    ents[m].pos = to;
    moved = true;
  }

  if (!moved) return StepResult{grid, {}, GameStatus::kOngoing, false};

  GridState next =
      detail_assemble(grid.width(), grid.height(), std::move(ents));
  const auto after_instances = scan_active_rules(next);
  StepResult result{std::move(next), {}, GameStatus::kOngoing, true};
  append_rule_diff(rules_of(before_instances), rules_of(after_instances),
                   step_index, result.events);
  result.status =
      game_status(result.next, property_table(after_instances));
  return result;
}

RunResult run(const GridState& grid, std::span<const Action> actions) {
  RunResult result{grid, {}, game_status(grid), 0};
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (result.status == GameStatus::kWon) break;
    StepResult s = step(result.final_state, actions[i], static_cast<int>(i));
    result.trace.insert(result.trace.end(), s.events.begin(), s.events.end());
    result.final_state = std::move(s.next);
    result.status = s.status;
    result.steps_taken = static_cast<int>(i) + 1;
  }
  return result;
}

}  // namespace rulegrid
