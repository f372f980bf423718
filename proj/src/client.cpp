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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "rulegrid/client.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "rulegrid/plan.hpp"
#include "rulegrid/rules.hpp"
#include "rulegrid/solver.hpp"

namespace rulegrid {
namespace {

using nlohmann::json;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("base_url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, slash);
  out.path = slash == std::string::npos ? "" : url.substr(slash);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

std::string data_url(const std::vector<std::uint8_t>& png) {
  return "data:image/png;base64," + base64_encode(png);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class HttpChatClient : public ModelClient {
 public:
  HttpChatClient(ModelEndpoint endpoint, std::string token, LogFn log)
      : endpoint_(std::move(endpoint)),
        token_(std::move(token)),
        log_(std::move(log)),
        url_(split_url(endpoint_.base_url)),
        limiter_(endpoint_.requests_per_minute) {}

  QueryResult query(const PromptBundle& bundle, const QueryContext&) override {
    const bool openai = endpoint_.provider == Provider::kOpenAi;
    const std::string body = openai ? openai_request_body(endpoint_, bundle)
                                    : gemini_request_body(endpoint_, bundle);
    const std::string path =
        openai ? url_.path + "/chat/completions"
               : url_.path + "/models/" + endpoint_.model_name + ":generateContent";
    httplib::Headers headers;
    if (openai) {
      headers.emplace("Authorization", "Bearer " + token_);
    } else {
      headers.emplace("x-goog-api-key", token_);
    }

    std::string last_problem;
    for (int attempt = 0;; ++attempt) {
      limiter_.acquire();
      httplib::Client client(url_.origin);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::duration<double>(endpoint_.timeout_s));
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      const auto res = client.Post(path, headers, body, "application/json");

      bool rate_limited = false;
      if (!res) {
        last_problem = "transport error: " + httplib::to_string(res.error());
      } else if (res->status == 200) {
        QueryResult r = openai ? parse_openai_response(res->body)
                               : parse_gemini_response(res->body);
        r.retries = attempt;
        if (attempt > 0) {
          log_("request succeeded after " + std::to_string(attempt) + " retries");
        }
        return r;
      } else if (res->status == 401 || res->status == 403) {
        throw AuthError("provider rejected credentials from $" +
                        endpoint_.auth_env + " (HTTP " +
                        std::to_string(res->status) + ")");
      } else if (res->status == 429) {
        rate_limited = true;
        last_problem = "HTTP 429";
      } else if (res->status >= 500) {
        last_problem = "HTTP " + std::to_string(res->status);
      } else {
        throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 200));
      }

      if (attempt >= endpoint_.max_retries) {
        const std::string msg = last_problem + " after " +
                                std::to_string(attempt) + " retries";
        if (rate_limited) throw RateLimitedError(msg);
        throw TransportError(msg);
      }
      const auto delay = std::chrono::milliseconds(
          static_cast<std::int64_t>(endpoint_.initial_backoff_ms) << std::min(attempt, 16));
      log_("retry " + std::to_string(attempt + 1) + "/" +
           std::to_string(endpoint_.max_retries) + " after " + last_problem +
           ", waiting " + std::to_string(delay.count()) + " ms");
      std::this_thread::sleep_for(delay);
    }
  }

 private:
  ModelEndpoint endpoint_;
  std::string token_;
  LogFn log_;
  SplitUrl url_;
  RateLimiter limiter_;
};

Usage usage_from(const json& j, const char* prompt, const char* completion,
                 const char* total) {
  Usage u;
  u.prompt_tokens = j.value(prompt, std::int64_t{0});
  u.completion_tokens = j.value(completion, std::int64_t{0});
  u.total_tokens = j.value(total, u.prompt_tokens + u.completion_tokens);
  return u;
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedResponseError(std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(Provider provider) {
  switch (provider) {
    case Provider::kOpenAi:
      return "openai";
    case Provider::kGemini:
      return "gemini";
    case Provider::kMockOracle:
      return "mock-oracle";
    case Provider::kMockRandom:
      return "mock-random";
  }
  return "?";
}

std::optional<Provider> parse_provider(std::string_view name) {
  for (Provider p : {Provider::kOpenAi, Provider::kGemini, Provider::kMockOracle,
                     Provider::kMockRandom}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string ModelEndpoint::display_name() const {
  if (!label.empty()) return label;
  if (!model_name.empty()) return model_name;
  return std::string(to_string(provider));
}

ModelEndpoint parse_endpoint_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("endpoint config: ") + e.what());
  }
  if (!doc.is_object()) throw Error("endpoint config must be a JSON object");
  ModelEndpoint ep;
  bool have_provider = false;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "provider") {
        const auto p = parse_provider(value.get<std::string>());
        if (!p) throw Error("endpoint config: unknown provider '" + value.get<std::string>() + "'");
        ep.provider = *p;
        have_provider = true;
      } else if (key == "label") {
        ep.label = value.get<std::string>();
      } else if (key == "base_url") {
        ep.base_url = value.get<std::string>();
      } else if (key == "model") {
        ep.model_name = value.get<std::string>();
      } else if (key == "auth_env") {
        ep.auth_env = value.get<std::string>();
      } else if (key == "timeout_s") {
        ep.timeout_s = value.get<double>();
      } else if (key == "max_retries") {
        ep.max_retries = value.get<int>();
      } else if (key == "initial_backoff_ms") {
        ep.initial_backoff_ms = value.get<int>();
      } else if (key == "requests_per_minute") {
        ep.requests_per_minute = value.get<double>();
      } else if (key == "temperature") {
        ep.temperature = value.get<double>();
      } else if (key == "agent_seed") {
        ep.agent_seed = value.get<std::uint64_t>();
      } else {
        throw Error("endpoint config: unknown key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw Error(std::string("endpoint config: ") + e.what());
  }
  if (!have_provider) throw Error("endpoint config: missing 'provider'");
  const bool http = ep.provider == Provider::kOpenAi || ep.provider == Provider::kGemini;
  if (http && (ep.base_url.empty() || ep.model_name.empty() || ep.auth_env.empty())) {
    throw Error("endpoint config: base_url, model and auth_env are required for " +
                std::string(to_string(ep.provider)));
  }
  if (ep.max_retries < 0 || ep.initial_backoff_ms < 0 || ep.timeout_s <= 0) {
    throw Error("endpoint config: retries, backoff and timeout must be positive");
  }
  return ep;
}

ModelEndpoint read_endpoint_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open endpoint config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_endpoint_config(buffer.str());
}

std::optional<ModelEndpoint> builtin_endpoint(std::string_view name) {
  const auto p = parse_provider(name);
  if (!p || (*p != Provider::kMockOracle && *p != Provider::kMockRandom)) {
    return std::nullopt;
  }
  ModelEndpoint ep;
  ep.provider = *p;
  return ep;
}

std::string format_endpoint_config(const ModelEndpoint& ep) {
  json doc = {{"provider", to_string(ep.provider)},
              {"label", ep.display_name()},
              {"timeout_s", ep.timeout_s},
              {"max_retries", ep.max_retries},
              {"initial_backoff_ms", ep.initial_backoff_ms},
              {"requests_per_minute", ep.requests_per_minute}};
  if (!ep.base_url.empty()) doc["base_url"] = ep.base_url;
  if (!ep.model_name.empty()) doc["model"] = ep.model_name;
  if (!ep.auth_env.empty()) doc["auth_env"] = ep.auth_env;
  if (ep.temperature) doc["temperature"] = *ep.temperature;
  if (ep.provider == Provider::kMockRandom) doc["agent_seed"] = ep.agent_seed;
  return doc.dump(2) + "\n";
}

void log_to_stderr(std::string_view message) {
  std::cerr << "rulegrid: " << message << "\n";
}

RateLimiter::RateLimiter(double per_minute)
    : interval_(per_minute > 0
                    ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(60.0 / per_minute))
                    : std::chrono::steady_clock::duration::zero()),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

std::unique_ptr<ModelClient> make_client(const ModelEndpoint& endpoint, LogFn log) {
  switch (endpoint.provider) {
    case Provider::kMockOracle:
      return std::make_unique<OracleAgent>();
    case Provider::kMockRandom:
      return std::make_unique<UniformRandomPlanAgent>(endpoint.agent_seed);
    case Provider::kOpenAi:
    case Provider::kGemini:
      break;
  }
  const char* token = std::getenv(endpoint.auth_env.c_str());
  if (token == nullptr || *token == '\0') {
    throw AuthError("environment variable $" + endpoint.auth_env +
                    " is not set");
  }
  return std::make_unique<HttpChatClient>(endpoint, token, std::move(log));
}

std::string openai_request_body(const ModelEndpoint& endpoint,
                                const PromptBundle& bundle) {
  json parts = json::array();
  const auto text = [&](const std::string& t) {
    parts.push_back({{"type", "text"}, {"text", t}});
  };
  const auto image = [&](const std::vector<std::uint8_t>& png) {
    parts.push_back({{"type", "image_url"}, {"image_url", {{"url", data_url(png)}}}});
  };
  for (const PromptExample& e : bundle.examples) {
    image(e.image_png);
    text(e.text);
  }
  text(bundle.algorithm_request);
  text(bundle.test_preamble);
  image(bundle.test_image_png);
  text(bundle.final_query);
  json doc = {{"model", endpoint.model_name},
              {"messages",
               json::array({{{"role", "system"}, {"content", bundle.system_instructions}},
                            {{"role", "user"}, {"content", parts}}})}};
  if (endpoint.temperature) doc["temperature"] = *endpoint.temperature;
  return doc.dump();
}

std::string gemini_request_body(const ModelEndpoint& endpoint,
                                const PromptBundle& bundle) {
  json parts = json::array();
  const auto text = [&](const std::string& t) { parts.push_back({{"text", t}}); };
  const auto image = [&](const std::vector<std::uint8_t>& png) {
    parts.push_back(
        {{"inline_data", {{"mime_type", "image/png"}, {"data", base64_encode(png)}}}});
  };
  for (const PromptExample& e : bundle.examples) {
    image(e.image_png);
    text(e.text);
  }
  text(bundle.algorithm_request);
  text(bundle.test_preamble);
  image(bundle.test_image_png);
  text(bundle.final_query);
  json doc = {
      {"systemInstruction", {{"parts", json::array({{{"text", bundle.system_instructions}}})}}},
      {"contents", json::array({{{"role", "user"}, {"parts", parts}}})}};
  if (endpoint.temperature) {
    doc["generationConfig"] = {{"temperature", *endpoint.temperature}};
  }
  return doc.dump();
}

QueryResult parse_openai_response(std::string_view body) {
  const json doc = parse_body(body);
  QueryResult r;
  try {
    const json& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_string()) {
      r.text = content.get<std::string>();
    } else if (content.is_array()) {
      for (const json& part : content) r.text += part.value("text", "");
    } else {
      throw MalformedResponseError("choices[0].message.content has no text");
    }
  } catch (const json::exception& e) {
    throw MalformedResponseError(std::string("unexpected chat response: ") + e.what());
  }
  if (doc.contains("usage") && doc["usage"].is_object()) {
    r.usage = usage_from(doc["usage"], "prompt_tokens", "completion_tokens", "total_tokens");
  }
  return r;
}

QueryResult parse_gemini_response(std::string_view body) {
  const json doc = parse_body(body);
  QueryResult r;
  try {
    for (const json& part : doc.at("candidates").at(0).at("content").at("parts")) {
      r.text += part.value("text", "");
    }
  } catch (const json::exception& e) {
    throw MalformedResponseError(std::string("unexpected gemini response: ") + e.what());
  }
  if (doc.contains("usageMetadata") && doc["usageMetadata"].is_object()) {
    r.usage = usage_from(doc["usageMetadata"], "promptTokenCount",
                         "candidatesTokenCount", "totalTokenCount");
  }
  return r;
}

QueryResult OracleAgent::query(const PromptBundle&, const QueryContext& context) {
  if (context.test == nullptr) throw Error("oracle agent needs the source level");
  const SolveResult solved = solve(context.test->grid);
  QueryResult r;
  if (solved.status == SolveStatus::kSolved) {
    r.text = "The solver found a winning trajectory.\nPLAN: " +
             format_plan(solved.solution->plan);
  } else {
    r.text = "I cannot determine the plan.";
  }
  return r;
}

QueryResult UniformRandomPlanAgent::query(const PromptBundle& bundle,
                                          const QueryContext& context) {
  if (context.test == nullptr) throw Error("random agent needs the source level");
  const GridState& grid = context.test->grid;
  const PropertyTable table = property_table(grid);
  std::vector<ObjectKind> options;
  for (ObjectKind k : kAllObjectKinds) {
    if (table.has(k, PropertyKind::kYou)) continue;
    for (const Entity& e : grid.entities()) {
      if (e.kind == EntityKind::Object(k)) {
        options.push_back(k);
        break;
      }
    }
  }
  QueryResult r;
  if (options.empty()) {
    r.text = "No object to go to.";
    return r;
  }
  std::uint64_t h = splitmix64(seed_ ^ splitmix64(context.seed));
  h = splitmix64(h ^ static_cast<std::uint64_t>(context.sample_index));
  h = splitmix64(h ^ std::stoull(bundle.hash().substr(0, 16), nullptr, 16));
  const ObjectKind pick = options[h % options.size()];
  r.text = "PLAN: goto " + std::string(to_string(pick));
  return r;
}

}  // namespace rulegrid
