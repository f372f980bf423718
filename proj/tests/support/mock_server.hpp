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

// Local HTTP server scripted with a queue of responses.

#ifndef RULEGRID_TESTS_SUPPORT_MOCK_SERVER_HPP_
#define RULEGRID_TESTS_SUPPORT_MOCK_SERVER_HPP_

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rulegrid::testing {

struct Seen {
  std::string path;
  std::string body;
  httplib::Headers headers;
};

class MockServer {
 public:
  struct Reply {
    int status;
    std::string body;
  };

  MockServer() {
    server_.Post(".*", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard<std::mutex> lock(mu_);
      seen_.push_back({req.path, req.body, req.headers});
      Reply r = fallback_;
      if (!replies_.empty()) {
        r = replies_.front();
        replies_.pop_front();
      }
      res.status = r.status;
      res.set_content(r.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string base_url(const std::string& path = "/v1") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  void push(int status, std::string body) {
    std::lock_guard<std::mutex> lock(mu_);
    replies_.push_back({status, std::move(body)});
  }
  void set_fallback(int status, std::string body) {
    std::lock_guard<std::mutex> lock(mu_);
    fallback_ = {status, std::move(body)};
  }
  std::vector<Seen> seen() const {
    std::lock_guard<std::mutex> lock(mu_);
    return seen_;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mu_;
  std::deque<Reply> replies_;
  Reply fallback_{500, "{}"};
  std::vector<Seen> seen_;
};

inline std::string openai_reply(const std::string& text) {
  return R"({"choices":[{"message":{"role":"assistant","content":")" + text +
         R"("}}],"usage":{"prompt_tokens":100,"completion_tokens":7,"total_tokens":107}})";
}

inline std::string gemini_reply(const std::string& text) {
  return R"({"candidates":[{"content":{"parts":[{"text":")" + text +
         R"("}]}}],"usageMetadata":{"promptTokenCount":90,"candidatesTokenCount":5,"totalTokenCount":95}})";
}

}  // namespace rulegrid::testing

#endif  // RULEGRID_TESTS_SUPPORT_MOCK_SERVER_HPP_
