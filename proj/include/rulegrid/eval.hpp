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

#ifndef RULEGRID_EVAL_HPP_
#define RULEGRID_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/client.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/prompt.hpp"
#include "rulegrid/render.hpp"

namespace rulegrid {

struct Protocol {
  // In-context examples cycle through these families in order.
  std::vector<EnvFamily> in_context_families;
  EnvFamily test_family;
  int n_examples = 10;
  int samples = 5;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  int parallelism = 1;
};

struct EvalRecord {
  std::string model;
  std::string family;  // test family
  std::string in_context;  // comma-joined in-context families
  std::uint64_t seed = 0;
  int sample_index = 0;
  std::uint64_t level_seed = 0;
  std::string prompt_hash;
  std::string template_hash;
  std::string raw_response;
  std::optional<std::string> parsed;  // canonical plan text
  std::string gold;
  bool correct = false;
  std::optional<std::string> error;  // query failure or NoPlanFound message
  bool errored = false;  // the query itself failed
  double latency_ms = 0.0;
  int retries = 0;
  std::optional<Usage> usage;

  bool operator==(const EvalRecord&) const = default;
};

std::string to_json_line(const EvalRecord& record);
EvalRecord record_from_json(std::string_view line);
// Reads a .jsonl file, or every .jsonl file directly inside a directory in
// name order. Blank lines are skipped.
std::vector<EvalRecord> read_records(const std::filesystem::path& path);

// Append-only JSON-lines writer. Records are committed in index order even
// when they complete out of order, so the file content does not depend on
// scheduling.
class RecordSink {
 public:
  explicit RecordSink(const std::filesystem::path& path);
  // Null sink: keeps nothing on disk.
  RecordSink() = default;

  void put(std::size_t index, const EvalRecord& record);
  std::size_t written() const;

 private:
  mutable std::mutex mu_;
  std::ofstream out_;
  bool enabled_ = false;
  std::size_t next_ = 0;
  std::vector<std::optional<std::string>> pending_;
};

// Scores a raw response against the gold plan; fills parsed, correct and
// error.
void score_response(EvalRecord& record, const Plan& gold);

struct EvalOptions {
  RenderConfig render{};
  GenConfig gen{};
  std::string prompt_template{builtin_prompt_template()};
};

struct SeedPools {
  std::vector<LevelSpec> in_context;
  std::vector<LevelSpec> test;
};

// Disjoint pools for one seed: n_examples in-context levels cycling over the
// in-context families, then `samples` test levels. Grids are distinct.
SeedPools build_pools(const Protocol& protocol, std::uint64_t seed,
                      const GenConfig& config);

// Every query attempt yields one record, put into `sink` as soon as it
// completes; errors are recorded and counted incorrect. Records are
// returned ordered by (seed, sample).
std::vector<EvalRecord> evaluate(ModelClient& client, const ModelEndpoint& endpoint,
                                 const Protocol& protocol,
                                 const EvalOptions& options, RecordSink& sink);

}  // namespace rulegrid

#endif  // RULEGRID_EVAL_HPP_
