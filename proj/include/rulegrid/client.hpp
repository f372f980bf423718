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

#ifndef RULEGRID_CLIENT_HPP_
#define RULEGRID_CLIENT_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "rulegrid/core.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/prompt.hpp"

namespace rulegrid {

class QueryError : public Error {
 public:
  using Error::Error;
};
class TransportError : public QueryError {
 public:
  using QueryError::QueryError;
};
class AuthError : public QueryError {
 public:
  using QueryError::QueryError;
};
class RateLimitedError : public QueryError {
 public:
  using QueryError::QueryError;
};
class MalformedResponseError : public QueryError {
 public:
  using QueryError::QueryError;
};

enum class Provider { kOpenAi, kGemini, kMockOracle, kMockRandom };

std::string_view to_string(Provider provider);
std::optional<Provider> parse_provider(std::string_view name);

// Holds the name of the environment variable with the token, never the
// token itself.
struct ModelEndpoint {
  Provider provider = Provider::kMockOracle;
  std::string label;  // model name in records and reports
  std::string base_url;
  std::string model_name;
  std::string auth_env;
  double timeout_s = 120.0;
  int max_retries = 4;
  int initial_backoff_ms = 1000;
  double requests_per_minute = 0.0;  // 0 disables pacing
  std::optional<double> temperature;
  std::uint64_t agent_seed = 0;  // mock-random only

  std::string display_name() const;
};

// JSON schema in docs/endpoint_config.md. Unknown keys are rejected.
ModelEndpoint parse_endpoint_config(std::string_view json_text);
ModelEndpoint read_endpoint_config(const std::filesystem::path& path);
// Shorthands accepted on the command line: `mock-oracle`, `mock-random`.
std::optional<ModelEndpoint> builtin_endpoint(std::string_view name);
std::string format_endpoint_config(const ModelEndpoint& endpoint);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t total_tokens = 0;

  bool operator==(const Usage&) const = default;
};

struct QueryContext {
  const LevelSpec* test = nullptr;  // source level; read by in-process agents
  std::uint64_t seed = 0;
  int sample_index = 0;
};

struct QueryResult {
  std::string text;
  int retries = 0;
  std::optional<Usage> usage;
};

using LogFn = std::function<void(std::string_view)>;
// Writes `rulegrid: <message>` to stderr.
void log_to_stderr(std::string_view message);

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  // Must be safe to call concurrently.
  virtual QueryResult query(const PromptBundle& bundle,
                            const QueryContext& context) = 0;
};

// For HTTP providers the token is read from `auth_env` here; a missing or
// empty variable throws AuthError before any request is made.
std::unique_ptr<ModelClient> make_client(const ModelEndpoint& endpoint,
                                         LogFn log = log_to_stderr);

// Serializes request starts to at most `per_minute` (0 = unlimited).
class RateLimiter {
 public:
  explicit RateLimiter(double per_minute);
  void acquire();

 private:
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
  std::mutex mu_;
};

// Replies `PLAN: <solver plan>` for the source level.
class OracleAgent : public ModelClient {
 public:
  QueryResult query(const PromptBundle& bundle,
                    const QueryContext& context) override;
};

// Replies `PLAN: goto X` with X drawn uniformly from the object kinds
// present in the level that are not currently YOU. The draw is a pure
// function of (agent seed, context seed, sample index, prompt hash).
class UniformRandomPlanAgent : public ModelClient {
 public:
  explicit UniformRandomPlanAgent(std::uint64_t seed) : seed_(seed) {}
  QueryResult query(const PromptBundle& bundle,
                    const QueryContext& context) override;

 private:
  std::uint64_t seed_;
};

// Request bodies, exposed for tests.
std::string openai_request_body(const ModelEndpoint& endpoint,
                                const PromptBundle& bundle);
std::string gemini_request_body(const ModelEndpoint& endpoint,
                                const PromptBundle& bundle);
QueryResult parse_openai_response(std::string_view body);
QueryResult parse_gemini_response(std::string_view body);

}  // namespace rulegrid

#endif  // RULEGRID_CLIENT_HPP_
