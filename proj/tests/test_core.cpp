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

#include <gtest/gtest.h>

#include <random>

#include "rulegrid/core.hpp"
#include "rulegrid/level_io.hpp"
#include "support/reference.hpp"

namespace rulegrid {
namespace {

TEST(GridState, RejectsTextSharingACell) {
  const Placement p[] = {{EntityKind::Is(), {1, 1}},
                         {EntityKind::Object(ObjectKind::kBaba), {1, 1}}};
  EXPECT_THROW(make_grid(4, 4, p), IllegalOverlapError);
}

TEST(GridState, RejectsThreeObjectsInACell) {
  const Placement p[] = {{EntityKind::Object(ObjectKind::kBaba), {0, 0}},
                         {EntityKind::Object(ObjectKind::kKey), {0, 0}},
                         {EntityKind::Object(ObjectKind::kBall), {0, 0}}};
  try {
    make_grid(4, 4, p);
    FAIL() << "expected IllegalOverlapError";
  } catch (const IllegalOverlapError& e) {
    EXPECT_EQ(e.position(), (Position{0, 0}));
    EXPECT_EQ(e.kinds().size(), 3u);
  }
}

TEST(GridState, AllowsTwoObjectsInACell) {
  const Placement p[] = {{EntityKind::Object(ObjectKind::kBaba), {2, 1}},
                         {EntityKind::Object(ObjectKind::kBaba), {2, 1}}};
  EXPECT_EQ(make_grid(4, 4, p).entities_at({2, 1}).size(), 2u);
}

TEST(GridState, RejectsOutOfBoundsAndBadSides) {
  const Placement p[] = {{EntityKind::Is(), {4, 0}}};
  EXPECT_THROW(make_grid(4, 4, p), OutOfBoundsError);
  EXPECT_THROW(make_grid(2, 8, {}), Error);
  EXPECT_THROW(make_grid(8, 17, {}), Error);
  EXPECT_NO_THROW(make_grid(3, 16, {}));
  EXPECT_THROW(make_grid(4, 4, {}).entities_at({-1, 0}), OutOfBoundsError);
}

TEST(GridState, EqualityIgnoresIdsAndOrder) {
  const Placement a[] = {{EntityKind::Object(ObjectKind::kKey), {0, 0}},
                         {EntityKind::Is(), {2, 2}}};
  const Placement b[] = {{EntityKind::Is(), {2, 2}},
                         {EntityKind::Object(ObjectKind::kKey), {0, 0}}};
  EXPECT_EQ(make_grid(5, 5, a), make_grid(5, 5, b));
  EXPECT_EQ(make_grid(5, 5, a).hash(), make_grid(5, 5, b).hash());
  EXPECT_FALSE(make_grid(5, 5, a) == make_grid(5, 6, a));
}

TEST(GridState, KeyRoundTripsOnRandomGrids) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const GridState g = ref::random_grid(rng, 7, 5, 14, 0.5);
    EXPECT_EQ(GridState::FromKey(7, 5, g.key()), g);
  }
}

TEST(GridState, MakeGridWithIdsRejectsDuplicates) {
  std::vector<Entity> e = {{3, EntityKind::Is(), {0, 0}},
                           {3, EntityKind::Is(), {1, 0}}};
  EXPECT_THROW(make_grid_with_ids(4, 4, e), Error);
}

TEST(EntityKind, EveryCodeRoundTripsThroughItsName) {
  for (int c = 0; c < EntityKind::kNumCodes; ++c) {
    const auto k = EntityKind::FromCode(static_cast<std::uint8_t>(c));
    const auto parsed = parse_entity_kind(to_string(k));
    ASSERT_TRUE(parsed) << to_string(k);
    EXPECT_EQ(*parsed, k);
  }
  EXPECT_FALSE(parse_entity_kind("text:rock"));
  EXPECT_EQ(to_string(EntityKind::Noun(ObjectKind::kDoor)), "text:door");
}

TEST(Actions, FormatAndParse) {
  const std::vector<Action> a = {Action::kUp, Action::kRight, Action::kDown,
                                 Action::kLeft};
  EXPECT_EQ(format_actions(a), "URDL");
  EXPECT_EQ(parse_actions("URDL"), a);
  EXPECT_EQ((Position{2, 2}.shifted(Action::kLeft, 2)), (Position{0, 2}));
}

TEST(LevelIo, RoundTripsIncludingMetadata) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    LevelFile f{ref::random_grid(rng, 6, 8, 12, 0.4), "base-goto",
                static_cast<std::uint64_t>(i), "goto door"};
    const LevelFile back = parse_level(format_level(f));
    EXPECT_EQ(back.grid, f.grid);
    EXPECT_EQ(back.family, f.family);
    EXPECT_EQ(back.seed, f.seed);
    EXPECT_EQ(back.gold, f.gold);
    EXPECT_EQ(format_level(back), format_level(f));
  }
}

TEST(LevelIo, ErrorsCarryLineNumbers) {
  try {
    parse_level("width 5\nheight 5\nrock @ 1,1\n");
    FAIL();
  } catch (const LevelFormatError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_level("width 5\n"), LevelFormatError);
  EXPECT_THROW(parse_level("width 5\nheight x\n"), LevelFormatError);
  EXPECT_THROW(parse_level("width 5\nheight 5\nbaba @ 9,9\n"), OutOfBoundsError);
}

}  // namespace
}  // namespace rulegrid
