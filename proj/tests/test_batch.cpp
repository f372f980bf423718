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

#include "rulegrid/batch.hpp"

namespace rulegrid {
namespace {

std::vector<GenerationRequest> requests() {
  std::vector<GenerationRequest> out;
  for (EnvFamily f : all_families()) {
    for (std::uint64_t s = 0; s < 2; ++s) out.push_back({f, s});
  }
  return out;
}

TEST(Batch, ParallelGenerationMatchesSerial) {
  const auto reqs = requests();
  const auto serial = generate_all(reqs, {}, Execution::kSerial);
  const auto parallel = generate_all(reqs, {}, Execution::kParallel);
  ASSERT_EQ(serial.size(), reqs.size());
  ASSERT_EQ(parallel.size(), reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    EXPECT_EQ(serial[i].grid, parallel[i].grid);
    EXPECT_EQ(serial[i].gold, parallel[i].gold);
    EXPECT_EQ(serial[i].family, reqs[i].family);
    EXPECT_EQ(serial[i].seed, reqs[i].seed);
  }
}

TEST(Batch, ParallelSolvingMatchesSerial) {
  std::vector<GridState> grids;
  for (const auto& l : generate_all(requests(), {}, Execution::kSerial)) grids.push_back(l.grid);
  const auto serial = solve_all(grids, {}, Execution::kSerial);
  const auto parallel = solve_all(grids, {}, Execution::kParallel);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    ASSERT_EQ(serial[i].status, SolveStatus::kSolved);
    EXPECT_EQ(serial[i].status, parallel[i].status);
    EXPECT_EQ(serial[i].solution->actions, parallel[i].solution->actions);
    EXPECT_EQ(serial[i].solution->plan, parallel[i].solution->plan);
  }
}

TEST(Batch, LowestFailingIndexIsRethrown) {
  GenConfig starved;
  starved.limits.max_states = 10;
  starved.max_attempts = 2;
  const std::vector<GenerationRequest> reqs = {
      {{FamilyBase::kTwoRoomMakeWin, false}, 4},
      {{FamilyBase::kTwoRoomMakeWin, false}, 9}};
  for (Execution e : {Execution::kSerial, Execution::kParallel}) {
    try {
      generate_all(reqs, starved, e);
      FAIL();
    } catch (const Error& err) {
      EXPECT_NE(std::string(err.what()).find("seed 4"), std::string::npos) << err.what();
    }
  }
}

TEST(Batch, EmptyInput) {
  EXPECT_TRUE(generate_all({}, {}, Execution::kParallel).empty());
  EXPECT_TRUE(solve_all({}, {}, Execution::kParallel).empty());
  EXPECT_GE(max_threads(), 1);
}

}  // namespace
}  // namespace rulegrid
