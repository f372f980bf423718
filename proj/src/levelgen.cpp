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

#include "rulegrid/levelgen.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <random>
#include <unordered_set>

#include "rulegrid/batch.hpp"
#include "rulegrid/engine.hpp"
#include "rulegrid/rules.hpp"

namespace rulegrid {
namespace {

struct FamilyName {
  FamilyBase base;
  std::string_view name;
};

constexpr std::array<FamilyName, 12> kFamilyNames = {{
    {FamilyBase::kBaseGoto, "base-goto"},
    {FamilyBase::kDistractorObject, "distractor-object"},
    {FamilyBase::kDistractorNoun, "distractor-noun"},
    {FamilyBase::kDistractorObjectAndNoun, "distractor-object-and-noun"},
    {FamilyBase::kDistractorActiveWinRule, "distractor-active-win-rule"},
    {FamilyBase::kStrategyGoto, "strategy-goto"},
    {FamilyBase::kStrategyMakeGoto, "strategy-make-goto"},
    {FamilyBase::kStrategyBreakGoto, "strategy-break-goto"},
    {FamilyBase::kStrategyBreakMakeGoto, "strategy-break-make-goto"},
    {FamilyBase::kTwoRoomMakeWin, "two-room-make-win"},
    {FamilyBase::kTwoRoomBreakStopMakeWin, "two-room-break-stop-make-win"},
    {FamilyBase::kTwoRoomControlTransfer, "two-room-control-transfer"},
}};

constexpr std::string_view kWalledPrefix = "walled-";

bool is_distractor_base(FamilyBase base) {
  return base <= FamilyBase::kDistractorActiveWinRule;
}

bool is_strategy_base(FamilyBase base) {
  return base >= FamilyBase::kStrategyGoto &&
         base <= FamilyBase::kStrategyBreakMakeGoto;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v));
}

std::uint64_t family_code(EnvFamily f) {
  return static_cast<std::uint64_t>(f.base) * 2 + (f.walled ? 1 : 0);
}

// mt19937_64 is fully specified by the standard; the standard distributions
// are not, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int uniform(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  bool coin() { return uniform(2) == 1; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(static_cast<int>(items.size())))];
  }

 private:
  std::mt19937_64 engine_;
};

int chebyshev(Position a, Position b) {
  return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row));
}

// Mutable scratch layout used while composing a level.
class Layout {
 public:
  Layout(int width, int height) : width_(width), height_(height) {}

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Position p) const {
    return p.col >= 0 && p.row >= 0 && p.col < width_ && p.row < height_;
  }
  bool empty(Position p) const {
    return in_bounds(p) &&
           std::none_of(placements_.begin(), placements_.end(),
                        [&](const Placement& q) { return q.pos == p; });
  }
  // Minimum Chebyshev distance to any text block (large when none).
  int text_distance(Position p) const {
    int best = 1 << 20;
    for (const Placement& q : placements_) {
      if (q.kind.is_text()) best = std::min(best, chebyshev(p, q.pos));
    }
    return best;
  }

  void add(EntityKind kind, Position p) { placements_.push_back({kind, p}); }
  void add_rule(Rule r, Position start) {
    add(EntityKind::Noun(r.noun), start);
    add(EntityKind::Is(), start.shifted(Action::kRight));
    add(EntityKind::Property(r.prop), start.shifted(Action::kRight, 2));
  }

  GridState build() const { return make_grid(width_, height_, placements_); }

 private:
  int width_;
  int height_;
  std::vector<Placement> placements_;
};

using CellFilter = std::function<bool(Position)>;

std::optional<Position> pick_cell(Rng& rng, const Layout& layout,
                                  const CellFilter& ok) {
  std::vector<Position> cells;
  for (int row = 0; row < layout.height(); ++row) {
    for (int col = 0; col < layout.width(); ++col) {
      const Position p{col, row};
      if (layout.empty(p) && ok(p)) cells.push_back(p);
    }
  }
  if (cells.empty()) return std::nullopt;
  return rng.pick(cells);
}

// Text kept at least this far (Chebyshev) from other text, so one push cannot
// complete or break a rule by accident.
constexpr int kTextGap = 2;

// Places `count` horizontally adjacent text cells starting at the picked
// cell; all must lie in `region` and keep the gap to existing text.
std::optional<Position> pick_text_run(Rng& rng, const Layout& layout,
                                      int count, const CellFilter& region) {
  return pick_cell(rng, layout, [&](Position p) {
    for (int k = 0; k < count; ++k) {
      const Position q = p.shifted(Action::kRight, k);
      if (!layout.empty(q) || !region(q) ||
          layout.text_distance(q) < kTextGap) {
        return false;
      }
    }
    return true;
  });
}

bool place_rule(Rng& rng, Layout& layout, Rule r, const CellFilter& region) {
  const auto start = pick_text_run(rng, layout, 3, region);
  if (!start) return false;
  layout.add_rule(r, *start);
  return true;
}

bool place_text(Rng& rng, Layout& layout, EntityKind kind,
                const CellFilter& region) {
  const auto cell = pick_text_run(rng, layout, 1, region);
  if (!cell) return false;
  layout.add(kind, *cell);
  return true;
}

bool place_object(Rng& rng, Layout& layout, ObjectKind kind,
                  const CellFilter& region) {
  const auto cell = pick_cell(rng, layout, region);
  if (!cell) return false;
  layout.add(EntityKind::Object(kind), *cell);
  return true;
}

const std::vector<ObjectKind> kTargetKinds = {
    ObjectKind::kDoor, ObjectKind::kKey, ObjectKind::kBall};

ObjectKind pick_other(Rng& rng, std::initializer_list<ObjectKind> excluded) {
  std::vector<ObjectKind> pool;
  for (ObjectKind k : kTargetKinds) {
    if (std::find(excluded.begin(), excluded.end(), k) == excluded.end()) {
      pool.push_back(k);
    }
  }
  return rng.pick(pool);
}

constexpr Rule kBabaIsYou{ObjectKind::kBaba, PropertyKind::kYou};
constexpr Rule kWallIsStop{ObjectKind::kWall, PropertyKind::kStop};

void add_wall_column(Layout& layout, int col) {
  for (int row = 0; row < layout.height(); ++row) {
    layout.add(EntityKind::Object(ObjectKind::kWall), Position{col, row});
  }
}

std::optional<Layout> build_distractor(Rng& rng, EnvFamily family, int w,
                                       int h) {
  Layout layout(w, h);
  const FamilyBase base = family.base;
  // The active-win-rule condition mirrors its reference scene: `ball is win`
  // is realizable, `door is win` names an absent object, a key distracts.
  const bool active_win = base == FamilyBase::kDistractorActiveWinRule;
  const ObjectKind target = active_win ? ObjectKind::kBall : rng.pick(kTargetKinds);
  const ObjectKind absent = ObjectKind::kDoor;
  const ObjectKind distractor =
      active_win ? ObjectKind::kKey : pick_other(rng, {target});
  const ObjectKind loose_noun = pick_other(rng, {target});
  const bool with_object = base == FamilyBase::kDistractorObject ||
                           base == FamilyBase::kDistractorObjectAndNoun ||
                           active_win;
  const bool with_noun = base == FamilyBase::kDistractorNoun ||
                         base == FamilyBase::kDistractorObjectAndNoun;

  int wall_col = -1;
  CellFilter anywhere = [](Position) { return true; };
  CellFilter off_wall = anywhere;
  CellFilter agent_side = anywhere;
  if (family.walled) {
    wall_col = 3 + rng.uniform(std::max(1, w - 6));
    add_wall_column(layout, wall_col);
    off_wall = [wall_col](Position p) { return p.col != wall_col; };
    const bool left = rng.coin();
    agent_side = [wall_col, left](Position p) {
      return left ? p.col < wall_col : p.col > wall_col;
    };
  }
  // Rule runs must not straddle the wall.
  CellFilter rule_region = off_wall;

  if (!place_rule(rng, layout, kBabaIsYou, rule_region)) return std::nullopt;
  if (!place_rule(rng, layout, Rule{target, PropertyKind::kWin}, rule_region)) {
    return std::nullopt;
  }
  if (active_win &&
      !place_rule(rng, layout, Rule{absent, PropertyKind::kWin}, rule_region)) {
    return std::nullopt;
  }
  if (with_noun &&
      !place_text(rng, layout, EntityKind::Noun(loose_noun), off_wall)) {
    return std::nullopt;
  }
  if (family.walled) {
    for (EntityKind k : {EntityKind::Noun(ObjectKind::kWall), EntityKind::Is(),
                         EntityKind::Property(PropertyKind::kStop)}) {
      if (!place_text(rng, layout, k, off_wall)) return std::nullopt;
    }
  }
  if (!place_object(rng, layout, ObjectKind::kBaba, agent_side)) {
    return std::nullopt;
  }
  if (!place_object(rng, layout, target, agent_side)) return std::nullopt;
  if (with_object && !place_object(rng, layout, distractor, off_wall)) {
    return std::nullopt;
  }
  return layout;
}

std::optional<Layout> build_strategy(Rng& rng, FamilyBase base, int w, int h) {
  Layout layout(w, h);
  // The agent gets the wider room; the wall is the only way across.
  const int wall_col = w / 2 - (rng.coin() ? 1 : 0);
  add_wall_column(layout, wall_col);
  const bool agent_left = wall_col >= w - 1 - wall_col;
  const CellFilter agent_room = [=](Position p) {
    return agent_left ? p.col < wall_col : p.col > wall_col;
  };
  const CellFilter far_room = [=](Position p) {
    return agent_left ? p.col > wall_col : p.col < wall_col;
  };
  // Rules off the top and bottom rows stay breakable by a vertical push.
  const CellFilter inner_rows = [=](Position p) {
    return agent_room(p) && p.row > 0 && p.row < h - 1;
  };

  const ObjectKind target = rng.pick(kTargetKinds);
  const bool needs_make = base == FamilyBase::kStrategyMakeGoto ||
                          base == FamilyBase::kStrategyBreakMakeGoto;
  const bool needs_break = base == FamilyBase::kStrategyBreakGoto ||
                           base == FamilyBase::kStrategyBreakMakeGoto;

  if (!place_rule(rng, layout, kBabaIsYou, agent_room)) return std::nullopt;
  if (!place_rule(rng, layout, kWallIsStop, inner_rows)) return std::nullopt;
  if (needs_make) {
    // [is][win] with the noun one vertical push from completing the rule,
    // so the make is cheaper than rebuilding the wall blocks elsewhere.
    const Action push = rng.coin() ? Action::kUp : Action::kDown;
    const Action back = push == Action::kUp ? Action::kDown : Action::kUp;
    const auto start = pick_text_run(rng, layout, 3, [&](Position p) {
      return inner_rows(p) && layout.empty(p.shifted(back)) &&
             agent_room(p.shifted(back)) && layout.empty(p.shifted(back, 2)) &&
             agent_room(p.shifted(back, 2));
    });
    if (!start) return std::nullopt;
    layout.add(EntityKind::Is(), start->shifted(Action::kRight));
    layout.add(EntityKind::Property(PropertyKind::kWin),
               start->shifted(Action::kRight, 2));
    layout.add(EntityKind::Noun(target), start->shifted(back));
  } else if (!place_rule(rng, layout, Rule{target, PropertyKind::kWin},
                         agent_room)) {
    return std::nullopt;
  }
  if (!place_object(rng, layout, ObjectKind::kBaba, agent_room)) {
    return std::nullopt;
  }
  if (!place_object(rng, layout, target, needs_break ? far_room : agent_room)) {
    return std::nullopt;
  }
  return layout;
}

// Authored two-room scenes. The wall sits in column 4; rows are jittered
// within the ranges that keep each scene's solution shape.
std::optional<Layout> build_two_room(Rng& rng, FamilyBase base, int w, int h) {
  Layout layout(w, h);
  constexpr int kWallCol = 4;
  add_wall_column(layout, kWallCol);
  const CellFilter left = [](Position p) { return p.col < kWallCol; };
  const CellFilter right = [](Position p) { return p.col > kWallCol; };

  switch (base) {
    case FamilyBase::kTwoRoomMakeWin: {
      // Corner rules cannot be pushed apart.
      layout.add_rule(kWallIsStop, {0, 0});
      layout.add_rule(kBabaIsYou, {0, h - 1});
      const int row = 2 + rng.uniform(h - 6);
      layout.add(EntityKind::Is(), {2, row});
      layout.add(EntityKind::Property(PropertyKind::kWin), {3, row});
      const int noun_row = rng.coin() ? row + 2 : row - 2;
      if (noun_row < 1 || noun_row > h - 3) return std::nullopt;
      layout.add(EntityKind::Noun(ObjectKind::kDoor), {1, noun_row});
      if (!place_object(rng, layout, ObjectKind::kBaba, left)) return std::nullopt;
      if (!place_object(rng, layout, ObjectKind::kDoor, left)) return std::nullopt;
      if (!place_object(rng, layout, ObjectKind::kKey, right)) return std::nullopt;
      if (!place_text(rng, layout, EntityKind::Noun(ObjectKind::kKey), right)) {
        return std::nullopt;
      }
      return layout;
    }
    case FamilyBase::kTwoRoomBreakStopMakeWin: {
      layout.add_rule(kBabaIsYou, {0, h - 1});
      const int row = 3 + rng.uniform(h - 6);
      layout.add_rule(kWallIsStop, {0, row});
      layout.add(EntityKind::Is(), {1, row - 2});
      layout.add(EntityKind::Property(PropertyKind::kWin), {2, row - 2});
      if (!place_object(rng, layout, ObjectKind::kBaba, left)) return std::nullopt;
      if (!place_object(rng, layout, ObjectKind::kDoor, right)) return std::nullopt;
      if (!place_object(rng, layout, ObjectKind::kKey, right)) return std::nullopt;
      return layout;
    }
    case FamilyBase::kTwoRoomControlTransfer: {
      layout.add_rule(kWallIsStop, {0, 0});
      // The key noun sits two cells above `baba`; pushing it down twice
      // swaps it into the you-rule.
      const int row = 4 + rng.uniform(std::max(1, h - 6));
      layout.add_rule(kBabaIsYou, {0, row});
      layout.add(EntityKind::Noun(ObjectKind::kKey), {0, row - 2});
      const int win_row = 1 + rng.uniform(2);
      layout.add(EntityKind::Is(), {w - 2, win_row});
      layout.add(EntityKind::Property(PropertyKind::kWin), {w - 1, win_row});
      layout.add(EntityKind::Noun(ObjectKind::kDoor), {kWallCol + 1, win_row + 2});
      if (!place_object(rng, layout, ObjectKind::kBaba, [&](Position p) {
            return left(p) && p.col > 0;
          })) {
        return std::nullopt;
      }
      const CellFilter right_clear = [&](Position p) {
        return right(p) && !(p.col == kWallCol + 1 && p.row <= win_row + 2);
      };
      if (!place_object(rng, layout, ObjectKind::kKey, right_clear)) {
        return std::nullopt;
      }
      if (!place_object(rng, layout, ObjectKind::kDoor, right_clear)) {
        return std::nullopt;
      }
      return layout;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Layout> build(Rng& rng, EnvFamily family, int w, int h) {
  if (is_distractor_base(family.base)) {
    return build_distractor(rng, family, w, h);
  }
  if (is_strategy_base(family.base)) return build_strategy(rng, family.base, w, h);
  return build_two_room(rng, family.base, w, h);
}

// --- structural contracts -------------------------------------------------

struct Census {
  std::vector<Rule> active;
  std::array<int, kAllObjectKinds.size()> objects{};
  std::vector<EntityKind> loose_text;  // text not in any active instance
  std::optional<int> wall_col;         // a column made entirely of walls
  int wall_objects = 0;
  Position baba{-1, -1};
};

Census take_census(const GridState& grid) {
  Census c;
  const auto instances = scan_active_rules(grid);
  c.active = active_rules(grid);
  std::vector<Position> rule_cells;
  for (const auto& r : instances) {
    rule_cells.insert(rule_cells.end(), {r.noun_pos, r.is_pos, r.prop_pos});
  }
  std::vector<int> walls_in_col(static_cast<std::size_t>(grid.width()), 0);
  for (const Entity& e : grid.entities()) {
    if (e.kind.is_object()) {
      ++c.objects[static_cast<int>(e.kind.object())];
      if (e.kind.object() == ObjectKind::kWall) {
        ++c.wall_objects;
        ++walls_in_col[static_cast<std::size_t>(e.pos.col)];
      }
      if (e.kind.object() == ObjectKind::kBaba) c.baba = e.pos;
    } else if (std::find(rule_cells.begin(), rule_cells.end(), e.pos) ==
               rule_cells.end()) {
      c.loose_text.push_back(e.kind);
    }
  }
  for (int col = 0; col < grid.width(); ++col) {
    if (walls_in_col[static_cast<std::size_t>(col)] == grid.height()) {
      c.wall_col = col;
    }
  }
  std::sort(c.loose_text.begin(), c.loose_text.end());
  return c;
}

bool has_rule(const Census& c, Rule r) {
  return std::binary_search(c.active.begin(), c.active.end(), r);
}

std::vector<Position> positions_of(const GridState& grid, ObjectKind kind) {
  std::vector<Position> out;
  for (const Entity& e : grid.entities()) {
    if (e.kind == EntityKind::Object(kind)) out.push_back(e.pos);
  }
  return out;
}

int side_of(Position p, int wall_col) { return p.col < wall_col ? -1 : 1; }

std::optional<std::string> check_distractor(const LevelSpec& level,
                                            const Census& c) {
  const FamilyBase base = level.family.base;
  const auto& steps = level.gold.steps();
  if (steps.size() != 1) return "gold plan is not a single goto";
  const ObjectKind target = steps[0].target;
  if (target == ObjectKind::kBaba || target == ObjectKind::kWall) {
    return "goto target is not a door, key or ball";
  }
  if (c.objects[static_cast<int>(ObjectKind::kBaba)] != 1) {
    return "expected exactly one baba";
  }
  if (c.objects[static_cast<int>(target)] != 1) {
    return "expected exactly one target object";
  }

  std::vector<Rule> expected_rules = {kBabaIsYou, Rule{target, PropertyKind::kWin}};
  std::optional<ObjectKind> absent_win;
  if (base == FamilyBase::kDistractorActiveWinRule) {
    for (const Rule& r : c.active) {
      if (r.prop == PropertyKind::kWin && r.noun != target) absent_win = r.noun;
    }
    if (!absent_win) return "missing second active win rule";
    if (c.objects[static_cast<int>(*absent_win)] != 0) {
      return "second win rule names a present object";
    }
    expected_rules.push_back(Rule{*absent_win, PropertyKind::kWin});
  }
  std::sort(expected_rules.begin(), expected_rules.end());
  if (c.active != expected_rules) return "unexpected active rule set";

  const bool wants_object = base == FamilyBase::kDistractorObject ||
                            base == FamilyBase::kDistractorObjectAndNoun ||
                            base == FamilyBase::kDistractorActiveWinRule;
  const bool wants_noun = base == FamilyBase::kDistractorNoun ||
                          base == FamilyBase::kDistractorObjectAndNoun;
  int extra_objects = 0;
  for (ObjectKind k : kTargetKinds) {
    if (k == target) continue;
    const int n = c.objects[static_cast<int>(k)];
    if (n > 1) return "duplicate distractor object";
    if (n == 1 && has_rule(c, Rule{k, PropertyKind::kWin})) {
      return "distractor object is named by a win rule";
    }
    extra_objects += n;
  }
  if (extra_objects != (wants_object ? 1 : 0)) {
    return "wrong number of distractor objects";
  }

  std::vector<EntityKind> loose = c.loose_text;
  if (level.family.walled) {
    for (EntityKind k : {EntityKind::Noun(ObjectKind::kWall), EntityKind::Is(),
                         EntityKind::Property(PropertyKind::kStop)}) {
      const auto it = std::find(loose.begin(), loose.end(), k);
      if (it == loose.end()) return "missing loose wall/is/stop block";
      loose.erase(it);
    }
    if (has_rule(c, kWallIsStop)) return "wall is stop is active";
    if (!c.wall_col) return "no full wall column";
    if (c.wall_objects != level.grid.height()) return "stray wall objects";
    if (side_of(c.baba, *c.wall_col) !=
        side_of(positions_of(level.grid, target).front(), *c.wall_col)) {
      return "agent and target on different sides";
    }
  } else if (c.objects[static_cast<int>(ObjectKind::kWall)] != 0) {
    return "unexpected wall objects";
  }
  if (wants_noun) {
    if (loose.size() != 1 || loose[0].tag() != EntityKind::Tag::kNounText) {
      return "expected exactly one loose noun block";
    }
  } else if (!loose.empty()) {
    return "unexpected loose text";
  }
  return std::nullopt;
}

std::optional<std::string> check_strategy(const LevelSpec& level,
                                          const Census& c) {
  const FamilyBase base = level.family.base;
  const auto& steps = level.gold.steps();
  const ObjectKind target = steps.back().target;
  if (target == ObjectKind::kBaba || target == ObjectKind::kWall) {
    return "goto target is not a door, key or ball";
  }
  const Rule win{target, PropertyKind::kWin};
  std::vector<PlanStep> expected;
  const bool needs_break = base == FamilyBase::kStrategyBreakGoto ||
                           base == FamilyBase::kStrategyBreakMakeGoto;
  const bool needs_make = base == FamilyBase::kStrategyMakeGoto ||
                          base == FamilyBase::kStrategyBreakMakeGoto;
  if (needs_break) expected.push_back(PlanStep::Break(kWallIsStop));
  if (needs_make) expected.push_back(PlanStep::Make(win));
  expected.push_back(PlanStep::Goto(target));
  if (steps != expected) return "gold plan does not have the family's shape";
  if (!has_rule(c, kBabaIsYou) || !has_rule(c, kWallIsStop)) {
    return "baba is you and wall is stop must start active";
  }
  if (has_rule(c, win) == needs_make) {
    return needs_make ? "win rule is already active" : "win rule is not active";
  }
  if (!c.wall_col || c.wall_objects != level.grid.height()) {
    return "wall must be one full column";
  }
  for (Position p : positions_of(level.grid, target)) {
    const bool across = side_of(p, *c.wall_col) != side_of(c.baba, *c.wall_col);
    if (across != needs_break) {
      return needs_break ? "target must be across the wall"
                         : "target must share the agent's room";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_two_room(const LevelSpec& level,
                                          const Census& c) {
  if (!c.wall_col || c.wall_objects != level.grid.height()) {
    return "wall must be one full column";
  }
  for (ObjectKind k : {ObjectKind::kBaba, ObjectKind::kDoor, ObjectKind::kKey}) {
    if (c.objects[static_cast<int>(k)] != 1) return "object inventory differs";
  }
  if (!has_rule(c, kBabaIsYou)) return "baba is you must start active";
  const std::string gold = format_plan(level.gold);
  switch (level.family.base) {
    case FamilyBase::kTwoRoomMakeWin:
      if (gold != "make \"door is win\" then goto door") {
        return "unexpected gold plan " + gold;
      }
      return std::nullopt;
    case FamilyBase::kTwoRoomBreakStopMakeWin:
      if (gold != "break \"wall is stop\" then make \"wall is win\" then goto wall") {
        return "unexpected gold plan " + gold;
      }
      return std::nullopt;
    case FamilyBase::kTwoRoomControlTransfer: {
      const auto& steps = level.gold.steps();
      const std::vector<PlanStep> needed = {
          PlanStep::Make(Rule{ObjectKind::kKey, PropertyKind::kYou}),
          PlanStep::Break(kBabaIsYou),
          PlanStep::Make(Rule{ObjectKind::kDoor, PropertyKind::kWin})};
      if (steps.size() != 4 || steps.back() != PlanStep::Goto(ObjectKind::kDoor)) {
        return "control transfer plan must be four steps ending at the door";
      }
      for (const PlanStep& s : needed) {
        if (std::find(steps.begin(), steps.end(), s) == steps.end()) {
          return "control transfer plan lacks " + format_step(s);
        }
      }
      return std::nullopt;
    }
    default:
      return "not a two-room family";
  }
}

}  // namespace

std::string to_string(EnvFamily family) {
  for (const FamilyName& f : kFamilyNames) {
    if (f.base == family.base) {
      return (family.walled ? std::string(kWalledPrefix) : std::string()) +
             std::string(f.name);
    }
  }
  return "?";
}

std::optional<EnvFamily> parse_env_family(std::string_view name) {
  bool walled = false;
  if (name.starts_with(kWalledPrefix)) {
    walled = true;
    name.remove_prefix(kWalledPrefix.size());
  }
  for (const FamilyName& f : kFamilyNames) {
    if (f.name == name) {
      if (walled && !is_distractor_base(f.base)) return std::nullopt;
      return EnvFamily{f.base, walled};
    }
  }
  return std::nullopt;
}

std::vector<EnvFamily> distractor_families(bool walled) {
  std::vector<EnvFamily> out;
  for (int b = 0; b <= static_cast<int>(FamilyBase::kDistractorActiveWinRule);
       ++b) {
    out.push_back(EnvFamily{static_cast<FamilyBase>(b), walled});
  }
  return out;
}

std::vector<EnvFamily> strategy_families() {
  return {{FamilyBase::kStrategyGoto, false},
          {FamilyBase::kStrategyMakeGoto, false},
          {FamilyBase::kStrategyBreakGoto, false},
          {FamilyBase::kStrategyBreakMakeGoto, false}};
}

std::vector<EnvFamily> two_room_families() {
  return {{FamilyBase::kTwoRoomMakeWin, false},
          {FamilyBase::kTwoRoomBreakStopMakeWin, false},
          {FamilyBase::kTwoRoomControlTransfer, false}};
}

std::vector<EnvFamily> all_families() {
  std::vector<EnvFamily> out = distractor_families(false);
  for (EnvFamily f : distractor_families(true)) out.push_back(f);
  for (EnvFamily f : strategy_families()) out.push_back(f);
  for (EnvFamily f : two_room_families()) out.push_back(f);
  return out;
}

GenerationFailedError::GenerationFailedError(EnvFamily family,
                                             std::uint64_t seed,
                                             const std::string& detail)
    : Error("generation failed for " + to_string(family) + " seed " +
            std::to_string(seed) + ": " + detail) {}

std::optional<std::string> check_family_contract(const LevelSpec& level) {
  const Census c = take_census(level.grid);
  if (is_distractor_base(level.family.base)) return check_distractor(level, c);
  if (level.family.walled) return "only distractor families have walled variants";
  if (is_strategy_base(level.family.base)) return check_strategy(level, c);
  return check_two_room(level, c);
}

LevelSpec generate(EnvFamily family, std::uint64_t seed,
                   const GenConfig& config) {
  if (family.walled && !is_distractor_base(family.base)) {
    throw Error("family " + to_string(family) + " has no walled variant");
  }
  const int min_side = is_distractor_base(family.base) && !family.walled ? 6 : 8;
  if (config.width < min_side || config.height < min_side) {
    throw Error(to_string(family) + " needs at least a " +
                std::to_string(min_side) + "x" + std::to_string(min_side) +
                " grid");
  }
  std::string last_failure = "no layout fit";
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    Rng rng(mix(mix(mix(kGeneratorVersion, family_code(family)), seed),
                static_cast<std::uint64_t>(attempt)));
    const auto layout = build(rng, family, config.width, config.height);
    if (!layout) continue;
    GridState grid = layout->build();
    if (game_status(grid) == GameStatus::kWon) continue;

    const SolveResult solved = solve(grid, config.limits);
    if (solved.status != SolveStatus::kSolved) {
      last_failure = std::string(to_string(solved.status));
      continue;
    }
    LevelSpec level{family, seed, std::move(grid), solved.solution->plan};
    if (auto violation = check_family_contract(level)) {
      last_failure = *violation;
      continue;
    }
    SearchLimits minimal = config.limits;
    minimal.max_depth = static_cast<int>(solved.solution->actions.size());
    const auto minimal_plans = enumerate_minimal_plans(level.grid, minimal);
    if (minimal_plans.size() != 1 || !plans_equal(minimal_plans[0], level.gold)) {
      last_failure = "gold plan is not unique among minimal trajectories";
      continue;
    }
    if (!validate_plan(level.grid, level.gold, config.limits).valid) {
      last_failure = "gold plan failed validation";
      continue;
    }
    return level;
  }
  throw GenerationFailedError(family, seed, last_failure);
}

LevelFile to_level_file(const LevelSpec& level) {
  return LevelFile{level.grid, to_string(level.family), level.seed,
                   format_plan(level.gold)};
}

LevelSpec from_level_file(const LevelFile& file) {
  if (!file.family || !file.seed || !file.gold) {
    throw Error("level file lacks family, seed or gold");
  }
  const auto family = parse_env_family(*file.family);
  if (!family) throw Error("unknown family '" + *file.family + "'");
  return LevelSpec{*family, *file.seed, file.grid, parse_plan(*file.gold)};
}

std::string_view to_string(Pool pool) {
  return pool == Pool::kInContext ? "in-context" : "test";
}

std::uint64_t derive_seed(EnvFamily family, std::uint64_t base_seed, Pool pool,
                          int sample_index, int retry) {
  std::uint64_t h = mix(kGeneratorVersion, family_code(family));
  h = mix(h, base_seed);
  h = mix(h, static_cast<std::uint64_t>(pool));
  h = mix(h, static_cast<std::uint64_t>(sample_index));
  return mix(h, static_cast<std::uint64_t>(retry));
}

std::vector<DatasetEntry> dataset(std::span<const EnvFamily> families,
                                  std::span<const std::uint64_t> seeds,
                                  int n_in_context, int n_test,
                                  const GenConfig& config) {
  struct Slot {
    EnvFamily family;
    std::uint64_t base_seed;
    Pool pool;
    int index;
  };
  std::vector<Slot> slots;
  std::vector<GenerationRequest> requests;
  for (const EnvFamily& family : families) {
    for (std::uint64_t base : seeds) {
      for (int i = 0; i < n_in_context + n_test; ++i) {
        const Pool pool = i < n_in_context ? Pool::kInContext : Pool::kTest;
        const int index = i < n_in_context ? i : i - n_in_context;
        slots.push_back({family, base, pool, index});
        requests.push_back({family, derive_seed(family, base, pool, index)});
      }
    }
  }
  std::vector<LevelSpec> levels =
      generate_all(requests, config, Execution::kParallel);

  std::vector<DatasetEntry> out;
  out.reserve(levels.size());
  std::unordered_set<GridState, GridStateHash> seen;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const Slot& s = slots[i];
    LevelSpec level = std::move(levels[i]);
    for (int retry = 1; seen.contains(level.grid); ++retry) {
      if (retry > config.max_attempts) {
        throw GenerationFailedError(s.family, level.seed,
                                    "could not find a distinct grid");
      }
      level = generate(s.family,
                       derive_seed(s.family, s.base_seed, s.pool, s.index, retry),
                       config);
    }
    seen.insert(level.grid);
    out.push_back(DatasetEntry{std::move(level), s.pool, s.base_seed, s.index});
  }
  return out;
}

}  // namespace rulegrid
