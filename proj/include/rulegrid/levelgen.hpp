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

#ifndef RULEGRID_LEVELGEN_HPP_
#define RULEGRID_LEVELGEN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/level_io.hpp"
#include "rulegrid/plan.hpp"
#include "rulegrid/solver.hpp"

namespace rulegrid {

// Bumped whenever generation output for a fixed (family, seed, config)
// changes.
inline constexpr int kGeneratorVersion = 1;

enum class FamilyBase : std::uint8_t {
  // Distractor conditions; each also has a walled variant.
  kBaseGoto,
  kDistractorObject,
  kDistractorNoun,
  kDistractorObjectAndNoun,
  kDistractorActiveWinRule,
  // One family per winning strategy shape.
  kStrategyGoto,
  kStrategyMakeGoto,
  kStrategyBreakGoto,
  kStrategyBreakMakeGoto,
  // Authored two-room layouts sharing one object inventory.
  kTwoRoomMakeWin,
  kTwoRoomBreakStopMakeWin,
  kTwoRoomControlTransfer,
};

struct EnvFamily {
  FamilyBase base = FamilyBase::kBaseGoto;
  // Adds a vertical wall with an inactive `wall is stop`; distractor
  // families only.
  bool walled = false;

  bool operator==(const EnvFamily&) const = default;
};

// Kebab-case names such as `distractor-object` or `walled-base-goto`.
std::string to_string(EnvFamily family);
std::optional<EnvFamily> parse_env_family(std::string_view name);

std::vector<EnvFamily> all_families();
std::vector<EnvFamily> distractor_families(bool walled);
std::vector<EnvFamily> strategy_families();
std::vector<EnvFamily> two_room_families();

struct GenConfig {
  int width = 8;
  int height = 8;
  int max_attempts = 1000;
  // Candidates that exceed this budget are re-rolled, so it bounds the cost
  // of unsolvable candidates rather than the difficulty of accepted ones.
  SearchLimits limits{300'000, 200};
};

struct LevelSpec {
  EnvFamily family;
  std::uint64_t seed = 0;
  GridState grid;
  Plan gold;
};

class GenerationFailedError : public Error {
 public:
  GenerationFailedError(EnvFamily family, std::uint64_t seed,
                        const std::string& detail);
};

// Deterministic in (family, seed, config). Every returned level is solvable,
// its gold plan is the solver's plan and validates, no other plan is reached
// by a minimal-length winning trajectory, and the family contract holds.
LevelSpec generate(EnvFamily family, std::uint64_t seed,
                   const GenConfig& config = {});

// nullopt when the level satisfies its family's structural contract,
// otherwise a description of the first violation.
std::optional<std::string> check_family_contract(const LevelSpec& level);

LevelFile to_level_file(const LevelSpec& level);
// Requires the family, seed and gold fields.
LevelSpec from_level_file(const LevelFile& file);

enum class Pool : std::uint8_t { kInContext, kTest };

std::string_view to_string(Pool pool);

struct DatasetEntry {
  LevelSpec level;
  Pool pool;
  std::uint64_t base_seed;
  int sample_index;
};

// Per-sample seed: splitmix64 over (generator version, family, base seed,
// pool, sample index, retry). In-context and test pools never share a seed.
std::uint64_t derive_seed(EnvFamily family, std::uint64_t base_seed, Pool pool,
                          int sample_index, int retry = 0);

// For each family and base seed, n_in_context then n_test levels. Grids are
// distinct across the whole result; a duplicate is regenerated with the
// next retry index.
std::vector<DatasetEntry> dataset(std::span<const EnvFamily> families,
                                  std::span<const std::uint64_t> seeds,
                                  int n_in_context, int n_test,
                                  const GenConfig& config = {});

}  // namespace rulegrid

#endif  // RULEGRID_LEVELGEN_HPP_
