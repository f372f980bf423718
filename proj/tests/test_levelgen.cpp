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

#include <map>
#include <set>

#include "rulegrid/engine.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/rules.hpp"

namespace rulegrid {
void PrintTo(EnvFamily family, std::ostream* os) { *os << to_string(family); }

namespace {

std::string expected_shape(EnvFamily f) {
  switch (f.base) {
    case FamilyBase::kStrategyMakeGoto:
    case FamilyBase::kTwoRoomMakeWin:
      return "make-goto";
    case FamilyBase::kStrategyBreakGoto:
      return "break-goto";
    case FamilyBase::kStrategyBreakMakeGoto:
    case FamilyBase::kTwoRoomBreakStopMakeWin:
      return "break-make-goto";
    case FamilyBase::kTwoRoomControlTransfer:
      return "";
    default:
      return "goto";
  }
}

class FamilyTest : public ::testing::TestWithParam<EnvFamily> {};

TEST_P(FamilyTest, LevelsMeetEveryGuarantee) {
  const EnvFamily family = GetParam();
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const LevelSpec level = generate(family, seed);
    EXPECT_EQ(level.family, family);
    EXPECT_EQ(level.seed, seed);
    EXPECT_EQ(check_family_contract(level), std::nullopt);
    EXPECT_EQ(game_status(level.grid), GameStatus::kOngoing);

    const SolveResult solved = solve(level.grid);
    ASSERT_EQ(solved.status, SolveStatus::kSolved);
    EXPECT_EQ(solved.solution->plan, level.gold);
    EXPECT_TRUE(validate_plan(level.grid, level.gold).valid);
    const auto minimal = enumerate_minimal_plans(level.grid);
    ASSERT_EQ(minimal.size(), 1u);
    EXPECT_EQ(minimal[0], level.gold);

    const std::string shape = expected_shape(family);
    if (!shape.empty()) {
      EXPECT_EQ(plan_shape(level.gold), shape);
    }
  }
}

TEST_P(FamilyTest, DeterministicPerSeed) {
  const LevelSpec a = generate(GetParam(), 17);
  const LevelSpec b = generate(GetParam(), 17);
  EXPECT_EQ(a.grid, b.grid);
  EXPECT_EQ(a.gold, b.gold);
  const LevelSpec c = generate(GetParam(), 18);
  EXPECT_FALSE(a.grid == c.grid);
}

TEST_P(FamilyTest, LevelFileRoundTrip) {
  const LevelSpec level = generate(GetParam(), 5);
  const LevelFile file = to_level_file(level);
  EXPECT_EQ(file.family, to_string(GetParam()));
  const LevelSpec back = from_level_file(parse_level(format_level(file)));
  EXPECT_EQ(back.grid, level.grid);
  EXPECT_EQ(back.gold, level.gold);
  EXPECT_EQ(back.family, level.family);
  EXPECT_EQ(back.seed, level.seed);
}

std::string family_name(const ::testing::TestParamInfo<EnvFamily>& info) {
  std::string s = to_string(info.param);
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, FamilyTest,
                         ::testing::ValuesIn(all_families()), family_name);

TEST(Families, NamesRoundTripAndWalledIsDistractorOnly) {
  EXPECT_EQ(all_families().size(), 17u);
  for (EnvFamily f : all_families()) {
    EXPECT_EQ(parse_env_family(to_string(f)), f);
  }
  EXPECT_EQ(distractor_families(true).size(), 5u);
  EXPECT_EQ(strategy_families().size(), 4u);
  EXPECT_EQ(two_room_families().size(), 3u);
  EXPECT_FALSE(parse_env_family("walled-strategy-goto"));
  EXPECT_FALSE(parse_env_family("walled-two-room-make-win"));
  EXPECT_FALSE(parse_env_family("rock-is-push"));
}

TEST(Families, ActiveWinRuleTargetsTheBall) {
  const EnvFamily f{FamilyBase::kDistractorActiveWinRule, false};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(format_plan(generate(f, seed).gold), "goto ball");
  }
}

TEST(Families, WalledVariantHasAnInactiveWallIsStop) {
  for (EnvFamily f : distractor_families(true)) {
    const LevelSpec level = generate(f, 3);
    const auto rules = active_rules(level.grid);
    EXPECT_EQ(std::count(rules.begin(), rules.end(),
                         Rule{ObjectKind::kWall, PropertyKind::kStop}),
              0);
    const auto formable = formable_rules(level.grid);
    EXPECT_TRUE(std::binary_search(formable.begin(), formable.end(),
                                   Rule{ObjectKind::kWall, PropertyKind::kStop}));
  }
}

TEST(Families, ControlTransferPlanShape) {
  const EnvFamily f{FamilyBase::kTwoRoomControlTransfer, false};
  const Plan gold = generate(f, 0).gold;
  ASSERT_EQ(gold.size(), 4u);
  EXPECT_EQ(gold.steps().back(), PlanStep::Goto(ObjectKind::kDoor));
  const auto has = [&](const PlanStep& s) {
    return std::find(gold.steps().begin(), gold.steps().end(), s) != gold.steps().end();
  };
  EXPECT_TRUE(has(PlanStep::Make({ObjectKind::kKey, PropertyKind::kYou})));
  EXPECT_TRUE(has(PlanStep::Break({ObjectKind::kBaba, PropertyKind::kYou})));
  EXPECT_TRUE(has(PlanStep::Make({ObjectKind::kDoor, PropertyKind::kWin})));
}

TEST(Families, TwoRoomLevelsShareAnInventory) {
  std::set<std::map<int, int>> inventories;
  for (EnvFamily f : two_room_families()) {
    std::map<int, int> counts;
    for (const Entity& e : generate(f, 1).grid.entities()) {
      if (e.kind.is_object()) ++counts[e.kind.code()];
    }
    inventories.insert(counts);
  }
  EXPECT_EQ(inventories.size(), 1u);
}

TEST(Seeds, PoolsNeverShareASeed) {
  for (EnvFamily f : all_families()) {
    std::set<std::uint64_t> in_context;
    for (int i = 0; i < 50; ++i) in_context.insert(derive_seed(f, 0, Pool::kInContext, i));
    for (int i = 0; i < 50; ++i) {
      EXPECT_FALSE(in_context.count(derive_seed(f, 0, Pool::kTest, i)));
    }
  }
  EXPECT_NE(derive_seed(all_families()[0], 0, Pool::kTest, 0, 0),
            derive_seed(all_families()[0], 0, Pool::kTest, 0, 1));
}

TEST(Dataset, GridsAreDistinctAndPoolsOrdered) {
  const std::vector<EnvFamily> families = {
      {FamilyBase::kBaseGoto, false}, {FamilyBase::kDistractorObject, false}};
  const std::vector<std::uint64_t> seeds = {0, 1};
  const auto entries = dataset(families, seeds, 4, 3);
  ASSERT_EQ(entries.size(), 2u * 2u * 7u);
  std::set<GridState::Key> keys;
  for (const auto& e : entries) keys.insert(e.level.grid.key());
  EXPECT_EQ(keys.size(), entries.size());
  EXPECT_EQ(entries[0].pool, Pool::kInContext);
  EXPECT_EQ(entries[4].pool, Pool::kTest);
  EXPECT_EQ(entries[6].sample_index, 2);
}

TEST(Generate, ImpossibleConfigFails) {
  GenConfig tiny;
  tiny.width = 3;
  tiny.height = 3;
  tiny.max_attempts = 5;
  EXPECT_THROW(generate({FamilyBase::kTwoRoomControlTransfer, false}, 0, tiny), Error);
}

}  // namespace
}  // namespace rulegrid
