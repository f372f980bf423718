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

#ifndef RULEGRID_PROMPT_HPP_
#define RULEGRID_PROMPT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/render.hpp"

namespace rulegrid {

class TemplateError : public Error {
 public:
  using Error::Error;
};

// Parsed prompt template. Sections are introduced by `@@ name @@` lines;
// `#` lines are comments. Required: instructions, example (with {{index}}
// and {{plan}}; {{count}} optional), algorithm, test, query (which must
// contain `PLAN:`).
struct PromptTemplate {
  std::string instructions;
  std::string example;
  std::string algorithm;
  std::string test;
  std::string query;
  std::string hash;  // hex SHA-256 of the source text
};

PromptTemplate parse_prompt_template(std::string_view text);
// The template shipped in assets/, compiled into the library.
std::string_view builtin_prompt_template();

struct PromptExample {
  std::vector<std::uint8_t> image_png;
  std::string gold_plan;
  std::string text;  // filled example section, including the reasoning request
};

// Messages are sent in this order: instructions, then each example's image
// followed by its text, then the algorithm request, the test text, the test
// image and the final query.
struct PromptBundle {
  std::string system_instructions;
  std::vector<PromptExample> examples;
  std::string algorithm_request;
  std::string test_preamble;
  std::vector<std::uint8_t> test_image_png;
  std::string final_query;
  std::string template_hash;

  // Hex SHA-256 over every part in send order, length-prefixed.
  std::string hash() const;
};

// Throws Error if in_context is empty or contains the test grid.
PromptBundle build_prompt(const PromptTemplate& tmpl,
                          std::span<const LevelSpec> in_context,
                          const LevelSpec& test, const RenderConfig& config);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);
std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace rulegrid

#endif  // RULEGRID_PROMPT_HPP_
