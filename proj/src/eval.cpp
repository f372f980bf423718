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

#include "rulegrid/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "rulegrid/batch.hpp"
#include "rulegrid/plan.hpp"

namespace rulegrid {
namespace {

using nlohmann::json;

std::string join_families(std::span<const EnvFamily> families) {
  std::string out;
  for (const EnvFamily& f : families) {
    if (!out.empty()) out += ",";
    out += to_string(f);
  }
  return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string to_json_line(const EvalRecord& r) {
  json usage = nullptr;
  if (r.usage) {
    usage = {{"prompt_tokens", r.usage->prompt_tokens},
             {"completion_tokens", r.usage->completion_tokens},
             {"total_tokens", r.usage->total_tokens}};
  }
  const json doc = {{"model", r.model},
                    {"family", r.family},
                    {"in_context", r.in_context},
                    {"seed", r.seed},
                    {"sample_index", r.sample_index},
                    {"level_seed", r.level_seed},
                    {"prompt_hash", r.prompt_hash},
                    {"template_hash", r.template_hash},
                    {"raw_response", r.raw_response},
                    {"parsed", optional_json(r.parsed)},
                    {"gold", r.gold},
                    {"correct", r.correct},
                    {"errored", r.errored},
                    {"error", optional_json(r.error)},
                    {"latency_ms", r.latency_ms},
                    {"retries", r.retries},
                    {"usage", usage}};
  return doc.dump();
}

EvalRecord record_from_json(std::string_view line) {
  EvalRecord r;
  try {
    const json doc = json::parse(line);
    r.model = doc.at("model").get<std::string>();
    r.family = doc.at("family").get<std::string>();
    r.in_context = doc.value("in_context", "");
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.sample_index = doc.at("sample_index").get<int>();
    r.level_seed = doc.value("level_seed", std::uint64_t{0});
    r.prompt_hash = doc.value("prompt_hash", "");
    r.template_hash = doc.value("template_hash", "");
    r.raw_response = doc.value("raw_response", "");
    if (doc.contains("parsed") && !doc["parsed"].is_null()) {
      r.parsed = doc["parsed"].get<std::string>();
    }
    r.gold = doc.at("gold").get<std::string>();
    r.correct = doc.at("correct").get<bool>();
    r.errored = doc.value("errored", false);
    if (doc.contains("error") && !doc["error"].is_null()) {
      r.error = doc["error"].get<std::string>();
    }
    r.latency_ms = doc.value("latency_ms", 0.0);
    r.retries = doc.value("retries", 0);
    if (doc.contains("usage") && doc["usage"].is_object()) {
      const json& u = doc["usage"];
      r.usage = Usage{u.value("prompt_tokens", std::int64_t{0}),
                      u.value("completion_tokens", std::int64_t{0}),
                      u.value("total_tokens", std::int64_t{0})};
    }
  } catch (const json::exception& e) {
    throw Error(std::string("bad record: ") + e.what());
  }
  return r;
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<EvalRecord> out;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open records " + file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(record_from_json(line));
      } catch (const Error& e) {
        throw Error(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return out;
}

RecordSink::RecordSink(const std::filesystem::path& path)
    : out_(path, std::ios::app), enabled_(true) {
  if (!out_) throw Error("cannot open " + path.string() + " for appending");
}

void RecordSink::put(std::size_t index, const EvalRecord& record) {
  std::lock_guard<std::mutex> lock(mu_);
  if (index < next_) throw Error("record index committed twice");
  if (pending_.size() <= index - next_) pending_.resize(index - next_ + 1);
  pending_[index - next_] = to_json_line(record);
  std::size_t done = 0;
  while (done < pending_.size() && pending_[done]) {
    if (enabled_) out_ << *pending_[done] << "\n";
    ++done;
  }
  if (done > 0) {
    if (enabled_) out_.flush();
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(done));
    next_ += done;
  }
}

std::size_t RecordSink::written() const {
  std::lock_guard<std::mutex> lock(mu_);
  return next_;
}

void score_response(EvalRecord& record, const Plan& gold) {
  try {
    const Plan parsed = extract_final_plan(record.raw_response);
    record.parsed = format_plan(parsed);
    record.correct = plans_equal(parsed, gold);
  } catch (const NoPlanFoundError& e) {
    record.parsed.reset();
    record.correct = false;
    record.error = e.what();
  }
}

SeedPools build_pools(const Protocol& protocol, std::uint64_t seed,
                      const GenConfig& config) {
  if (protocol.in_context_families.empty()) {
    throw Error("protocol needs at least one in-context family");
  }
  if (protocol.n_examples < 1 || protocol.samples < 1) {
    throw Error("protocol needs at least one example and one sample");
  }
  const auto k = protocol.in_context_families.size();
  struct Slot {
    EnvFamily family;
    Pool pool;
    int index;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < protocol.n_examples; ++i) {
    slots.push_back({protocol.in_context_families[static_cast<std::size_t>(i) % k],
                     Pool::kInContext, i});
  }
  for (int i = 0; i < protocol.samples; ++i) {
    slots.push_back({protocol.test_family, Pool::kTest, i});
  }
  std::vector<GenerationRequest> requests;
  for (const Slot& s : slots) {
    requests.push_back({s.family, derive_seed(s.family, seed, s.pool, s.index)});
  }
  std::vector<LevelSpec> levels = generate_all(requests, config, Execution::kParallel);

  SeedPools pools;
  std::unordered_set<GridState, GridStateHash> seen;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const Slot& s = slots[i];
    for (int retry = 1; seen.contains(levels[i].grid); ++retry) {
      if (retry > config.max_attempts) {
        throw GenerationFailedError(s.family, seed, "could not find a distinct grid");
      }
      levels[i] = generate(s.family, derive_seed(s.family, seed, s.pool, s.index, retry),
                           config);
    }
    seen.insert(levels[i].grid);
    (s.pool == Pool::kInContext ? pools.in_context : pools.test)
        .push_back(std::move(levels[i]));
  }
  return pools;
}

std::vector<EvalRecord> evaluate(ModelClient& client, const ModelEndpoint& endpoint,
                                 const Protocol& protocol,
                                 const EvalOptions& options, RecordSink& sink) {
  const PromptTemplate tmpl = parse_prompt_template(options.prompt_template);
  options.render.validate();

  struct Task {
    std::uint64_t seed;
    int sample;
    const LevelSpec* test;
    const std::vector<LevelSpec>* examples;
  };
  std::vector<SeedPools> pools;
  pools.reserve(protocol.seeds.size());
  for (std::uint64_t seed : protocol.seeds) {
    pools.push_back(build_pools(protocol, seed, options.gen));
  }
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < protocol.seeds.size(); ++s) {
    for (int j = 0; j < protocol.samples; ++j) {
      tasks.push_back({protocol.seeds[s], j, &pools[s].test[static_cast<std::size_t>(j)],
                       &pools[s].in_context});
    }
  }

  const std::string model = endpoint.display_name();
  const std::string in_context = join_families(protocol.in_context_families);
  std::vector<EvalRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> auth_failed{false};
  std::exception_ptr auth_error;
  std::mutex auth_mu;

  const auto worker = [&] {
    for (;;) {
      if (auth_failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      EvalRecord& r = records[i];
      r.model = model;
      r.family = to_string(protocol.test_family);
      r.in_context = in_context;
      r.seed = t.seed;
      r.sample_index = t.sample;
      r.level_seed = t.test->seed;
      r.gold = format_plan(t.test->gold);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const PromptBundle bundle =
            build_prompt(tmpl, *t.examples, *t.test, options.render);
        r.prompt_hash = bundle.hash();
        r.template_hash = bundle.template_hash;
        const QueryResult reply =
            client.query(bundle, QueryContext{t.test, t.seed, t.sample});
        r.raw_response = reply.text;
        r.retries = reply.retries;
        r.usage = reply.usage;
        score_response(r, t.test->gold);
      } catch (const AuthError& e) {
        r.errored = true;
        r.error = e.what();
        std::lock_guard<std::mutex> lock(auth_mu);
        if (!auth_error) auth_error = std::current_exception();
        auth_failed = true;
      } catch (const std::exception& e) {
        r.errored = true;
        r.correct = false;
        r.error = e.what();
      }
      r.latency_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      sink.put(i, r);
    }
  };

  const int n_workers = std::max(1, std::min<int>(protocol.parallelism,
                                                  static_cast<int>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (auth_error) std::rethrow_exception(auth_error);
  return records;
}

}  // namespace rulegrid
