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

#include "rulegrid/core.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace rulegrid {
namespace {

constexpr std::array<std::string_view, 5> kObjectNames = {"baba", "door",
                                                          "key", "ball", "wall"};
constexpr std::array<std::string_view, 3> kPropertyNames = {"you", "win",
                                                            "stop"};

std::string lowercase(std::string_view word) {
  std::string out(word);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

std::string describe_kinds(const std::vector<EntityKind>& kinds) {
  std::string out;
  for (const EntityKind& kind : kinds) {
    if (!out.empty()) out += ", ";
    out += to_string(kind);
  }
  return out;
}

}  // namespace

std::string_view to_string(ObjectKind kind) {
  return kObjectNames[static_cast<int>(kind)];
}

std::string_view to_string(PropertyKind prop) {
  return kPropertyNames[static_cast<int>(prop)];
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::kUp: return "up";
    case Action::kDown: return "down";
    case Action::kLeft: return "left";
    case Action::kRight: return "right";
  }
  return "?";
}

std::string_view to_string(GameStatus status) {
  return status == GameStatus::kWon ? "won" : "ongoing";
}

std::optional<ObjectKind> parse_object_kind(std::string_view word) {
  const std::string lower = lowercase(word);
  for (std::size_t i = 0; i < kObjectNames.size(); ++i) {
    if (lower == kObjectNames[i]) return static_cast<ObjectKind>(i);
  }
  return std::nullopt;
}

std::optional<PropertyKind> parse_property_kind(std::string_view word) {
  const std::string lower = lowercase(word);
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i) {
    if (lower == kPropertyNames[i]) return static_cast<PropertyKind>(i);
  }
  return std::nullopt;
}

char action_code(Action action) {
  switch (action) {
    case Action::kUp: return 'U';
    case Action::kDown: return 'D';
    case Action::kLeft: return 'L';
    case Action::kRight: return 'R';
  }
  return '?';
}

std::optional<Action> parse_action_code(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'U': return Action::kUp;
    case 'D': return Action::kDown;
    case 'L': return Action::kLeft;
    case 'R': return Action::kRight;
    default: return std::nullopt;
  }
}

std::string format_actions(std::span<const Action> actions) {
  std::string out;
  out.reserve(actions.size());
  for (Action a : actions) out.push_back(action_code(a));
  return out;
}

std::vector<Action> parse_actions(std::string_view text) {
  std::vector<Action> actions;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const auto action = parse_action_code(c);
    if (!action) {
      throw Error(std::string("invalid action code '") + c + "'");
    }
    actions.push_back(*action);
  }
  return actions;
}

Position Position::shifted(Action action, int distance) const {
  switch (action) {
    case Action::kUp: return {col, row - distance};
    case Action::kDown: return {col, row + distance};
    case Action::kLeft: return {col - distance, row};
    case Action::kRight: return {col + distance, row};
  }
  return *this;
}

std::string to_string(Position pos) {
  return std::to_string(pos.col) + "," + std::to_string(pos.row);
}

std::string to_string(EntityKind kind) {
  switch (kind.tag()) {
    case EntityKind::Tag::kObject:
      return std::string(to_string(kind.object()));
    case EntityKind::Tag::kNounText:
      return "text:" + std::string(to_string(kind.object()));
    case EntityKind::Tag::kIsText:
      return "text:is";
    case EntityKind::Tag::kPropertyText:
      return "text:" + std::string(to_string(kind.property()));
  }
  return "?";
}

std::optional<EntityKind> parse_entity_kind(std::string_view word) {
  constexpr std::string_view kTextPrefix = "text:";
  const std::string lower = lowercase(word);
  if (lower.starts_with(kTextPrefix)) {
    const std::string_view rest = std::string_view(lower).substr(5);
    if (rest == "is") return EntityKind::Is();
    if (auto noun = parse_object_kind(rest)) return EntityKind::Noun(*noun);
    if (auto prop = parse_property_kind(rest)) {
      return EntityKind::Property(*prop);
    }
    return std::nullopt;
  }
  if (auto obj = parse_object_kind(lower)) return EntityKind::Object(*obj);
  return std::nullopt;
}

std::string to_string(const Rule& rule) {
  return std::string(to_string(rule.noun)) + " is " +
         std::string(to_string(rule.prop));
}

OutOfBoundsError::OutOfBoundsError(Position pos)
    : Error("position out of bounds: (" + to_string(pos) + ")"), pos_(pos) {}

IllegalOverlapError::IllegalOverlapError(Position pos,
                                         std::vector<EntityKind> kinds)
    : Error("illegal overlap at (" + to_string(pos) +
            "): " + describe_kinds(kinds)),
      pos_(pos),
      kinds_(std::move(kinds)) {}

std::vector<Entity> GridState::entities_at(Position pos) const {
  if (!in_bounds(pos)) throw OutOfBoundsError(pos);
  std::vector<Entity> out;
  for (const Entity& e : entities_) {
    if (e.pos == pos) out.push_back(e);
  }
  return out;
}

GridState::Key GridState::key() const {
  Key key;
  key.reserve(entities_.size());
  for (const Entity& e : entities_) {
    key.push_back(static_cast<std::uint16_t>((e.kind.code() << 8) |
                                             cell_index(e.pos)));
  }
  std::sort(key.begin(), key.end());
  return key;
}

std::size_t hash_key(std::span<const std::uint16_t> key) {
  // FNV-1a over the packed entries.
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint16_t v : key) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::size_t GridState::hash() const {
  const Key k = key();
  return hash_key(k) ^ (static_cast<std::size_t>(width_) << 48) ^
         (static_cast<std::size_t>(height_) << 56);
}

bool GridState::operator==(const GridState& other) const {
  return width_ == other.width_ && height_ == other.height_ &&
         entities_.size() == other.entities_.size() && key() == other.key();
}

GridState GridState::FromKey(int width, int height, const Key& key) {
  std::vector<Entity> entities;
  entities.reserve(key.size());
  EntityId id = 0;
  for (std::uint16_t packed : key) {
    const int cell = packed & 0xff;
    entities.push_back(
        Entity{id++, EntityKind::FromCode(static_cast<std::uint8_t>(packed >> 8)),
               Position{cell % width, cell / width}});
  }
  return GridState(width, height, std::move(entities));
}

void check_colocation(int width, int height,
                      std::span<const Entity> entities) {
  std::vector<std::vector<EntityKind>> cells(
      static_cast<std::size_t>(width * height));
  for (const Entity& e : entities) {
    if (e.pos.col < 0 || e.pos.row < 0 || e.pos.col >= width ||
        e.pos.row >= height) {
      throw OutOfBoundsError(e.pos);
    }
    cells[static_cast<std::size_t>(e.pos.row * width + e.pos.col)].push_back(
        e.kind);
  }
  for (int i = 0; i < width * height; ++i) {
    const auto& kinds = cells[static_cast<std::size_t>(i)];
    if (kinds.size() < 2) continue;
    const bool has_text = std::any_of(
        kinds.begin(), kinds.end(), [](EntityKind k) { return k.is_text(); });
    if (has_text || kinds.size() > 2) {
      throw IllegalOverlapError(Position{i % width, i / width}, kinds);
    }
  }
}

GridState make_grid(int width, int height,
                    std::span<const Placement> placements) {
  if (width < kMinGridSide || height < kMinGridSide || width > kMaxGridSide ||
      height > kMaxGridSide) {
    throw Error("grid dimensions must be within " +
                std::to_string(kMinGridSide) + ".." +
                std::to_string(kMaxGridSide) + ", got " +
                std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<Entity> entities;
  entities.reserve(placements.size());
  EntityId id = 0;
  for (const Placement& p : placements) {
    entities.push_back(Entity{id++, p.kind, p.pos});
  }
  check_colocation(width, height, entities);
  return GridState(width, height, std::move(entities));
}

GridState make_grid_with_ids(int width, int height,
                             std::vector<Entity> entities) {
  if (width < kMinGridSide || height < kMinGridSide || width > kMaxGridSide ||
      height > kMaxGridSide) {
    throw Error("grid dimensions out of range");
  }
  std::unordered_set<EntityId> ids;
  for (const Entity& e : entities) {
    if (!ids.insert(e.id).second) {
      throw Error("duplicate entity id " + std::to_string(e.id));
    }
  }
  check_colocation(width, height, entities);
  std::sort(entities.begin(), entities.end(),
            [](const Entity& a, const Entity& b) { return a.id < b.id; });
  return GridState(width, height, std::move(entities));
}

GridState detail_assemble(int width, int height,
                          std::vector<Entity> entities) {
#ifndef NDEBUG
  check_colocation(width, height, entities);
#endif
  return GridState(width, height, std::move(entities));
}

}  // namespace rulegrid
