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

#ifndef RULEGRID_CORE_HPP_
#define RULEGRID_CORE_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulegrid {

// Grids are capped so that a cell index fits in one byte of the state key.
inline constexpr int kMinGridSide = 3;
inline constexpr int kMaxGridSide = 16;
inline constexpr int kMaxCells = kMaxGridSide * kMaxGridSide;

enum class ObjectKind : std::uint8_t { kBaba, kDoor, kKey, kBall, kWall };
inline constexpr std::array<ObjectKind, 5> kAllObjectKinds = {
    ObjectKind::kBaba, ObjectKind::kDoor, ObjectKind::kKey, ObjectKind::kBall,
    ObjectKind::kWall};

enum class PropertyKind : std::uint8_t { kYou, kWin, kStop };
inline constexpr std::array<PropertyKind, 3> kAllPropertyKinds = {
    PropertyKind::kYou, PropertyKind::kWin, PropertyKind::kStop};

enum class Action : std::uint8_t { kUp, kDown, kLeft, kRight };
// Also the solver's tie-break order.
inline constexpr std::array<Action, 4> kAllActions = {
    Action::kUp, Action::kDown, Action::kLeft, Action::kRight};

enum class GameStatus : std::uint8_t { kOngoing, kWon };

std::string_view to_string(ObjectKind kind);
std::string_view to_string(PropertyKind prop);
std::string_view to_string(Action action);
std::string_view to_string(GameStatus status);
std::optional<ObjectKind> parse_object_kind(std::string_view word);
std::optional<PropertyKind> parse_property_kind(std::string_view word);

// Single-letter action codes (U, D, L, R) used in action strings.
char action_code(Action action);
std::optional<Action> parse_action_code(char c);
std::string format_actions(std::span<const Action> actions);
std::vector<Action> parse_actions(std::string_view text);

struct Position {
  int col = 0;
  int row = 0;

  Position shifted(Action action, int distance = 1) const;
  auto operator<=>(const Position&) const = default;
};

std::string to_string(Position pos);

// What an entity is: a physical object or one of the three kinds of text
// block. Packed into a small code so states hash cheaply.
class EntityKind {
 public:
  enum class Tag : std::uint8_t { kObject, kNounText, kIsText, kPropertyText };

  static constexpr int kNumCodes = 14;

  static constexpr EntityKind Object(ObjectKind kind) {
    return EntityKind(static_cast<std::uint8_t>(kind));
  }
  static constexpr EntityKind Noun(ObjectKind kind) {
    return EntityKind(static_cast<std::uint8_t>(5 + static_cast<int>(kind)));
  }
  static constexpr EntityKind Is() { return EntityKind(10); }
  static constexpr EntityKind Property(PropertyKind prop) {
    return EntityKind(static_cast<std::uint8_t>(11 + static_cast<int>(prop)));
  }
  static constexpr EntityKind FromCode(std::uint8_t code) {
    return EntityKind(code);
  }

  constexpr Tag tag() const {
    if (code_ < 5) return Tag::kObject;
    if (code_ < 10) return Tag::kNounText;
    if (code_ == 10) return Tag::kIsText;
    return Tag::kPropertyText;
  }
  constexpr bool is_object() const { return code_ < 5; }
  constexpr bool is_text() const { return code_ >= 5; }
  // Valid for kObject and kNounText.
  constexpr ObjectKind object() const {
    return static_cast<ObjectKind>(code_ < 5 ? code_ : code_ - 5);
  }
  // Valid for kPropertyText.
  constexpr PropertyKind property() const {
    return static_cast<PropertyKind>(code_ - 11);
  }
  constexpr std::uint8_t code() const { return code_; }

  auto operator<=>(const EntityKind&) const = default;

 private:
  constexpr explicit EntityKind(std::uint8_t code) : code_(code) {}
  std::uint8_t code_;
};

// Spelling used by level files: `baba`, `text:baba`, `text:is`, `text:you`.
std::string to_string(EntityKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view word);

using EntityId = std::uint32_t;

struct Entity {
  EntityId id = 0;
  EntityKind kind = EntityKind::Is();
  Position pos;

  bool operator==(const Entity&) const = default;
};

struct Placement {
  EntityKind kind;
  Position pos;
};

struct Rule {
  ObjectKind noun;
  PropertyKind prop;

  auto operator<=>(const Rule&) const = default;
};

std::string to_string(const Rule& rule);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfBoundsError : public Error {
 public:
  explicit OutOfBoundsError(Position pos);
  Position position() const { return pos_; }

 private:
  Position pos_;
};

class IllegalOverlapError : public Error {
 public:
  IllegalOverlapError(Position pos, std::vector<EntityKind> kinds);
  Position position() const { return pos_; }
  const std::vector<EntityKind>& kinds() const { return kinds_; }

 private:
  Position pos_;
  std::vector<EntityKind> kinds_;
};

// Immutable world snapshot. Equality and hashing look only at the grid size
// and the multiset of (kind, position); ids are carried for conservation
// checks but never compared.
class GridState {
 public:
  // Packed state key: one (kind code << 8 | cell index) per entity, sorted.
  using Key = std::vector<std::uint16_t>;

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const Entity> entities() const { return entities_; }

  bool in_bounds(Position pos) const {
    return pos.col >= 0 && pos.row >= 0 && pos.col < width_ &&
           pos.row < height_;
  }
  int cell_index(Position pos) const { return pos.row * width_ + pos.col; }
  Position cell_position(int index) const {
    return {index % width_, index / width_};
  }

  // Throws OutOfBoundsError. Result ordered by id.
  std::vector<Entity> entities_at(Position pos) const;

  Key key() const;
  std::size_t hash() const;
  bool operator==(const GridState& other) const;

  // Rebuilds a state from a packed key; ids are assigned in key order.
  static GridState FromKey(int width, int height, const Key& key);

 private:
  friend GridState make_grid(int width, int height,
                             std::span<const Placement> placements);
  friend GridState make_grid_with_ids(int width, int height,
                                      std::vector<Entity> entities);
  friend GridState detail_assemble(int width, int height,
                                   std::vector<Entity> entities);

  GridState(int width, int height, std::vector<Entity> entities)
      : width_(width), height_(height), entities_(std::move(entities)) {}

  int width_ = 0;
  int height_ = 0;
  std::vector<Entity> entities_;
};

struct GridStateHash {
  std::size_t operator()(const GridState& grid) const { return grid.hash(); }
};

// Ids are assigned 0..n-1 in placement order.
GridState make_grid(int width, int height,
                    std::span<const Placement> placements);

// For transitions that must keep ids stable. Validates like make_grid; ids
// must be unique.
GridState make_grid_with_ids(int width, int height,
                             std::vector<Entity> entities);

// Co-location rules shared by construction and transitions: a text block is
// alone in its cell; at most two objects share a cell.
void check_colocation(int width, int height, std::span<const Entity> entities);

std::size_t hash_key(std::span<const std::uint16_t> key);

// Builds a state from entities the caller already knows are valid (sorted by
// id, co-location respected). Used by the transition function; checked in
// debug builds only.
GridState detail_assemble(int width, int height, std::vector<Entity> entities);

}  // namespace rulegrid

#endif  // RULEGRID_CORE_HPP_
