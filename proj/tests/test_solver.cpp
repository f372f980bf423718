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

#include "rulegrid/level_io.hpp"
#include "rulegrid/solver.hpp"
#include "support/reference.hpp"

namespace rulegrid {
namespace {

GridState worked_example() {
  return read_level_file(RULEGRID_TEST_DATA "/worked_example.level").grid;
}

TEST(Solver, WorkedExample) {
  const SolveResult r = solve(worked_example());
  ASSERT_EQ(r.status, SolveStatus::kSolved);
  EXPECT_EQ(format_plan(r.solution->plan),
            "break \"wall is stop\" then make \"door is win\" then goto door");
  const RunResult replay = run(worked_example(), r.solution->actions);
  EXPECT_EQ(replay.status, GameStatus::kWon);
  EXPECT_EQ(replay.steps_taken, static_cast<int>(r.solution->actions.size()));
}

TEST(Solver, MinimalAgainstExhaustiveOracle) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 40; ++i) {
    const GridState g = ref::random_level(rng, 5, 5);
    if (game_status(g) == GameStatus::kWon) continue;
    const ref::OracleResult want = ref::min_win_depth(g, 10);
    if (!want.depth) continue;
    const SolveResult got = solve(g);
    ASSERT_EQ(got.status, SolveStatus::kSolved);
    EXPECT_EQ(static_cast<int>(got.solution->actions.size()), *want.depth);
    const RunResult replay = run(g, got.solution->actions);
    EXPECT_EQ(replay.status, GameStatus::kWon);
    EXPECT_EQ(lift_trace(replay.trace, *winning_object_kind(replay.final_state)),
              got.solution->plan);
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(Solver, PrefersEarlierActionsOnTies) {
  // Door is one step left or one step right; up/down/left/right order picks left.
  const GridState g = ref::from_ascii({"b=y..", "d=v..", "DBD..", "....."});
  const SolveResult r = solve(g);
  ASSERT_EQ(r.status, SolveStatus::kSolved);
  EXPECT_EQ(format_actions(r.solution->actions), "L");
}

TEST(Solver, ReportsUnsolvable) {
  const GridState g = ref::from_ascii({"b=y", "B..", "..D"});
  const SolveResult r = solve(g);
  EXPECT_EQ(r.status, SolveStatus::kUnsolvable);
  EXPECT_FALSE(r.solution);
}

TEST(Solver, ReportsLimitExceeded) {
  EXPECT_EQ(solve(worked_example(), {100, 200}).status, SolveStatus::kLimitExceeded);
  EXPECT_EQ(solve(worked_example(), {2'000'000, 3}).status,
            SolveStatus::kLimitExceeded);
}

TEST(Solver, ThrowsOnWonGrid) {
  std::vector<Placement> p = {
      {EntityKind::Noun(ObjectKind::kBaba), {0, 0}},
      {EntityKind::Is(), {1, 0}},
      {EntityKind::Property(PropertyKind::kYou), {2, 0}},
      {EntityKind::Noun(ObjectKind::kDoor), {0, 1}},
      {EntityKind::Is(), {1, 1}},
      {EntityKind::Property(PropertyKind::kWin), {2, 1}},
      {EntityKind::Object(ObjectKind::kBaba), {1, 2}},
      {EntityKind::Object(ObjectKind::kDoor), {1, 2}},
  };
  EXPECT_THROW(solve(make_grid(3, 3, p)), EpisodeOverError);
}

TEST(Validate, GoldPlanIsValidWithAReplayableWitness) {
  const GridState g = worked_example();
  const Plan gold = solve(g).solution->plan;
  const Validation v = validate_plan(g, gold);
  ASSERT_TRUE(v.valid);
  const RunResult replay = run(g, v.witness);
  EXPECT_EQ(replay.status, GameStatus::kWon);
  EXPECT_EQ(lift_trace(replay.trace, *winning_object_kind(replay.final_state)), gold);
}

TEST(Validate, RejectsPlansWithReasons) {
  const GridState g = worked_example();
  EXPECT_EQ(validate_plan(g, parse_plan("goto key")).reason,
            Validation::Reason::kMissingBlocks);
  EXPECT_EQ(validate_plan(g, parse_plan("make \"key is win\" then goto door")).reason,
            Validation::Reason::kMissingBlocks);
  EXPECT_EQ(validate_plan(g, parse_plan("goto door")).reason,
            Validation::Reason::kNoWitnessFound);
  EXPECT_EQ(validate_plan(g, parse_plan("break \"baba is you\" then goto door")).reason,
            Validation::Reason::kNoWitnessFound);
  // Refuting this one needs the whole reachable space, so only its
  // invalidity is pinned.
  EXPECT_FALSE(validate_plan(g, parse_plan("make \"door is win\" then goto door"),
                             {200'000, 200})
                   .valid);
  const Plan gold = solve(g).solution->plan;
  EXPECT_EQ(validate_plan(g, gold, {50, 200}).reason, Validation::Reason::kLimitExceeded);
}

TEST(Validate, CancelledPairsAreNotSeparateSteps) {
  // Breaking and immediately remaking a rule lifts to nothing.
  const GridState g = ref::from_ascii({
      "b=y...",
      "......",
      "d=v...",
      "......",
      ".B..D.",
      "......",
  });
  EXPECT_TRUE(validate_plan(g, parse_plan("goto door")).valid);
  EXPECT_TRUE(validate_plan(g, parse_plan("break \"door is win\" then make "
                                          "\"door is win\" then goto door"))
                  .valid == false);
}

TEST(Enumerate, WorkedExampleHasOneMinimalPlan) {
  const auto plans = enumerate_minimal_plans(worked_example());
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_EQ(plans[0], solve(worked_example()).solution->plan);
}

TEST(Enumerate, FindsBothTargetsWhenTied) {
  const GridState g = ref::from_ascii({"b=y..", "d=v..", "k=v..", "DBK..", "....."});
  const auto plans = enumerate_minimal_plans(g);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_EQ(format_plan(plans[0]), "goto door");
  EXPECT_EQ(format_plan(plans[1]), "goto key");
}

}  // namespace
}  // namespace rulegrid
