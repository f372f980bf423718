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

#include "rulegrid/prompt.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <array>
#include <map>

#include "rulegrid/plan.hpp"

namespace rulegrid {
namespace {

constexpr std::string_view kBuiltinTemplate =
#include "prompt_template.inc"
    ;

std::string_view trim_newlines(std::string_view s) {
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string substitute(std::string_view text,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw TemplateError("unterminated placeholder in prompt template");
    }
    out.append(text.substr(i, open - i));
    const std::string name(text.substr(open + 2, close - open - 2));
    const auto it = values.find(name);
    if (it == values.end()) {
      throw TemplateError("unknown placeholder {{" + name + "}}");
    }
    out.append(it->second);
    i = close + 2;
  }
  return out;
}

void require_placeholder(const std::string& section, std::string_view name,
                         std::string_view body) {
  if (body.find("{{" + std::string(name) + "}}") == std::string_view::npos) {
    throw TemplateError("section '" + section + "' is missing {{" +
                        std::string(name) + "}}");
  }
}

}  // namespace

std::string_view builtin_prompt_template() { return kBuiltinTemplate; }

PromptTemplate parse_prompt_template(std::string_view text) {
  std::map<std::string, std::string> sections;
  std::string current;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.starts_with("#")) continue;
    if (line.starts_with("@@") && line.size() > 4 && line.ends_with("@@")) {
      std::string_view name = line.substr(2, line.size() - 4);
      while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
      while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
      current = std::string(name);
      if (sections.contains(current)) {
        throw TemplateError("duplicate section '" + current + "'");
      }
      sections[current];
      continue;
    }
    if (current.empty()) {
      if (!trim_newlines(line).empty()) {
        throw TemplateError("text before the first section");
      }
      continue;
    }
    sections[current].append(line).append("\n");
  }

  PromptTemplate t;
  const std::array<std::pair<const char*, std::string*>, 5> fields = {{
      {"instructions", &t.instructions},
      {"example", &t.example},
      {"algorithm", &t.algorithm},
      {"test", &t.test},
      {"query", &t.query},
  }};
  for (const auto& [name, slot] : fields) {
    const auto it = sections.find(name);
    if (it == sections.end()) {
      throw TemplateError(std::string("missing section '") + name + "'");
    }
    *slot = std::string(trim_newlines(it->second));
    sections.erase(it);
  }
  if (!sections.empty()) {
    throw TemplateError("unknown section '" + sections.begin()->first + "'");
  }
  require_placeholder("example", "index", t.example);
  require_placeholder("example", "plan", t.example);
  if (t.query.find("PLAN:") == std::string::npos) {
    throw TemplateError("section 'query' must instruct the PLAN: marker");
  }
  t.hash = sha256_hex(text);
  return t;
}

std::string PromptBundle::hash() const {
  std::vector<std::uint8_t> buf;
  const auto put = [&](std::span<const std::uint8_t> part) {
    const std::uint64_t n = part.size();
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    buf.insert(buf.end(), part.begin(), part.end());
  };
  const auto put_text = [&](std::string_view s) {
    put({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  };
  put_text(system_instructions);
  for (const PromptExample& e : examples) {
    put(e.image_png);
    put_text(e.text);
  }
  put_text(algorithm_request);
  put_text(test_preamble);
  put(test_image_png);
  put_text(final_query);
  return sha256_hex(buf);
}

PromptBundle build_prompt(const PromptTemplate& tmpl,
                          std::span<const LevelSpec> in_context,
                          const LevelSpec& test, const RenderConfig& config) {
  if (in_context.empty()) throw Error("build_prompt needs at least one example");
  for (const LevelSpec& l : in_context) {
    if (l.grid == test.grid) throw Error("test level appears among the examples");
  }
  PromptBundle b;
  b.template_hash = tmpl.hash;
  b.system_instructions = tmpl.instructions;
  const std::string count = std::to_string(in_context.size());
  for (std::size_t i = 0; i < in_context.size(); ++i) {
    PromptExample e;
    e.image_png = render_png(in_context[i].grid, config);
    e.gold_plan = format_plan(in_context[i].gold);
    e.text = substitute(tmpl.example, {{"index", std::to_string(i + 1)},
                                       {"count", count},
                                       {"plan", e.gold_plan}});
    b.examples.push_back(std::move(e));
  }
  b.algorithm_request = substitute(tmpl.algorithm, {});
  b.test_preamble = substitute(tmpl.test, {});
  b.test_image_png = render_png(test.grid, config);
  b.final_query = substitute(tmpl.query, {});
  return b;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(bytes.data(), bytes.size(), digest.data());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  return out;
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace rulegrid
