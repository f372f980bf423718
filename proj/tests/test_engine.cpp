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
#include <random>

#include "rulegrid/engine.hpp"
#include "support/reference.hpp"

namespace rulegrid {
namespace {

std::vector<ref::RefEvent> as_ref(const std::vector<RuleEvent>& events,
                                  RuleEvent::Type type) {
  std::vector<ref::RefEvent> out;
  for (const RuleEvent& e : events) {
    if (e.type == type) out.push_back({type == RuleEvent::Type::kMade, e.rule});
  }
  return out;
}

// Compares one engine step with the reference; returns the next grid.
GridState check_against_reference(const GridState& g, Action a) {
  const StepResult got = step(g, a);
  const ref::RefStep want = ref::ref_step(g, a);
  EXPECT_EQ(got.moved, want.moved);
  EXPECT_EQ(got.status == GameStatus::kWon, want.won);
  const auto ents = got.next.entities();
  EXPECT_EQ(std::vector<Entity>(ents.begin(), ents.end()), want.entities);
  EXPECT_EQ(as_ref(got.events, RuleEvent::Type::kBroken), want.broken);
  EXPECT_EQ(as_ref(got.events, RuleEvent::Type::kMade), want.made);
  return got.next;
}

TEST(Engine, MatchesReferenceOnRandomWalks) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 3);
  int steps = 0;
  for (int level = 0; level < 150; ++level) {
    GridState g = ref::random_level(rng, 6, 6);
    for (int t = 0; t < 20 && game_status(g) == GameStatus::kOngoing; ++t) {
      g = check_against_reference(g, kAllActions[pick(rng)]);
      ++steps;
      if (HasFailure()) return;
    }
  }
  EXPECT_GT(steps, 1000);
}

TEST(Engine, MatchesReferenceOnDenseRandomGrids) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1500; ++i) {
    const GridState g = ref::random_grid(rng, 6, 6, 24, 0.6);
    const Action a = kAllActions[i % 4];
    if (game_status(g) == GameStatus::kWon) {
      EXPECT_THROW(step(g, a), EpisodeOverError);
      continue;
    }
    check_against_reference(g, a);
    if (HasFailure()) return;
  }
}

TEST(Engine, ConservesEntities) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    GridState g = ref::random_level(rng, 6, 6);
    for (Action a : kAllActions) {
      if (game_status(g) == GameStatus::kWon) break;
      const StepResult r = step(g, a);
      ASSERT_EQ(r.next.entities().size(), g.entities().size());
      for (std::size_t k = 0; k < g.entities().size(); ++k) {
        EXPECT_EQ(r.next.entities()[k].id, g.entities()[k].id);
        EXPECT_EQ(r.next.entities()[k].kind, g.entities()[k].kind);
      }
      EXPECT_NO_THROW(check_colocation(6, 6, r.next.entities()));
      g = r.next;
    }
  }
}

TEST(Engine, PushesATextChain) {
  const GridState g = ref::from_ascii({"b=y..", "By=v.", "....."});
  const StepResult r = step(g, Action::kRight);
  EXPECT_TRUE(r.moved);
  EXPECT_EQ(r.next, ref::from_ascii({"b=y..", ".By=v", "....."}));
}

TEST(Engine, ChainAgainstEdgeOrObjectDoesNotMove) {
  const GridState edge = ref::from_ascii({"b=y", "By=", "..."});
  EXPECT_FALSE(step(edge, Action::kRight).moved);
  const GridState object = ref::from_ascii({"b=y..", "By=K.", "....."});
  EXPECT_FALSE(step(object, Action::kRight).moved);
}

TEST(Engine, StopBlocksAndTwoObjectCellsBlock) {
  const GridState stop = ref::from_ascii({"b=y", "w=s", "B#."});
  EXPECT_FALSE(step(stop, Action::kRight).moved);
  const GridState open = ref::from_ascii({"b=y", "...", "B#."});
  EXPECT_TRUE(step(open, Action::kRight).moved);

  std::vector<Placement> p = {
      {EntityKind::Noun(ObjectKind::kBaba), {0, 0}},
      {EntityKind::Is(), {1, 0}},
      {EntityKind::Property(PropertyKind::kYou), {2, 0}},
      {EntityKind::Object(ObjectKind::kBaba), {0, 2}},
      {EntityKind::Object(ObjectKind::kKey), {1, 2}},
      {EntityKind::Object(ObjectKind::kBall), {1, 2}},
  };
  EXPECT_FALSE(step(make_grid(3, 3, p), Action::kRight).moved);
}

TEST(Engine, FarthestMoverGoesFirst) {
  // Two adjacent YOU objects in a full column both advance.
  const GridState g = ref::from_ascii({"b=y", "...", "BB."});
  const StepResult r = step(g, Action::kRight);
  EXPECT_EQ(r.next, ref::from_ascii({"b=y", "...", ".BB"}));
}

TEST(Engine, EventsListBrokenBeforeMade) {
  // Pushing `k` down moves it from `key is win` into `key is you`.
  const GridState g = ref::from_ascii({
      "..B..",
      "..k=v",
      "...=y",
      "b=y..",
  });
  const StepResult s = step(g, Action::kDown);
  ASSERT_EQ(s.events.size(), 2u);
  EXPECT_EQ(s.events[0].type, RuleEvent::Type::kBroken);
  EXPECT_EQ(s.events[0].rule, (Rule{ObjectKind::kKey, PropertyKind::kWin}));
  EXPECT_EQ(s.events[1].type, RuleEvent::Type::kMade);
  EXPECT_EQ(s.events[1].rule, (Rule{ObjectKind::kKey, PropertyKind::kYou}));
}

TEST(Engine, WinNeedsDistinctEntities) {
  // baba is you and baba is win: a lone baba does not win.
  const GridState g = ref::from_ascii({"b=y", "b=v", "B.."});
  EXPECT_EQ(game_status(g), GameStatus::kOngoing);
  std::vector<Placement> p;
  for (const Entity& e : g.entities()) p.push_back({e.kind, e.pos});
  p.push_back({EntityKind::Object(ObjectKind::kBaba), {0, 2}});
  EXPECT_EQ(game_status(make_grid(3, 3, p)), GameStatus::kWon);
}

TEST(Engine, StepOntoWinObjectWins) {
  const GridState g = ref::from_ascii({"b=y.", "d=v.", "BD..", "...."});
  const StepResult r = step(g, Action::kRight);
  EXPECT_EQ(r.status, GameStatus::kWon);
  EXPECT_EQ(winning_object_kind(r.next), ObjectKind::kDoor);
  EXPECT_THROW(step(r.next, Action::kLeft), EpisodeOverError);
}

TEST(Engine, NoYouMeansNoMovement) {
  const GridState g = ref::from_ascii({"b.y", "B..", "..."});
  const StepResult r = step(g, Action::kRight);
  EXPECT_FALSE(r.moved);
  EXPECT_EQ(r.next, g);
}

TEST(Engine, WinStatusMatchesReferenceEverywhere) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const GridState g = ref::random_grid(rng, 5, 5, 18, 0.5);
    const std::vector<Entity> e(g.entities().begin(), g.entities().end());
    EXPECT_EQ(game_status(g) == GameStatus::kWon, ref::ref_won(5, 5, e));
  }
}

TEST(Engine, RunStopsAtTheWinningStep) {
  const GridState g = ref::from_ascii({"b=y.", "d=v.", "BD..", "...."});
  const std::vector<Action> a = {Action::kRight, Action::kRight};
  const RunResult r = run(g, a);
  EXPECT_EQ(r.status, GameStatus::kWon);
  EXPECT_EQ(r.steps_taken, 1);
}

}  // namespace
}  // namespace rulegrid
