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

#include "rulegrid/plan.hpp"

#include <cctype>
#include <optional>

namespace rulegrid {
namespace {

struct Token {
  enum class Kind { kWord, kQuote, kOpenBracket, kCloseBracket, kOpenBrace,
                    kCloseBrace, kComma, kEnd };
  Kind kind;
  std::string text;  // lowercased, words only
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      const std::size_t start = i;
      std::string word;
      while (i < text.size() &&
             std::isalpha(static_cast<unsigned char>(text[i]))) {
        word.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
      }
      tokens.push_back({Token::Kind::kWord, std::move(word), start});
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '"': kind = Token::Kind::kQuote; break;
      case '[': kind = Token::Kind::kOpenBracket; break;
      case ']': kind = Token::Kind::kCloseBracket; break;
      case '{': kind = Token::Kind::kOpenBrace; break;
      case '}': kind = Token::Kind::kCloseBrace; break;
      case ',': kind = Token::Kind::kComma; break;
      default:
        throw ParseError(i, "a word, quote, bracket or comma");
    }
    tokens.push_back({kind, "", i});
    ++i;
  }
  tokens.push_back({Token::Kind::kEnd, "", text.size()});
  return tokens;
}

bool is_keyword(const std::string& w) {
  return w == "break" || w == "make" || w == "goto" || w == "then" ||
         w == "is";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Plan parse() {
    std::vector<PlanStep> steps;
    steps.push_back(parse_step());
    while (peek().kind != Token::Kind::kEnd) {
      bool separated = false;
      if (peek().kind == Token::Kind::kComma) {
        ++at_;
        separated = true;
      }
      if (peek_word("then")) {
        ++at_;
        separated = true;
      }
      if (!separated) fail("'then' or ','");
      steps.push_back(parse_step());
    }
    return Plan(std::move(steps));
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  bool peek_word(std::string_view w) const {
    return peek().kind == Token::Kind::kWord && peek().text == w;
  }

  [[noreturn]] void fail(std::string expected) const {
    const Token& t = peek();
    if (t.kind == Token::Kind::kWord && !is_keyword(t.text) &&
        !parse_object_kind(t.text) && !parse_property_kind(t.text)) {
      throw UnknownWordError(t.text);
    }
    throw ParseError(t.pos, std::move(expected));
  }

  ObjectKind parse_noun() {
    if (peek().kind != Token::Kind::kWord) fail("an object name");
    const auto noun = parse_object_kind(peek().text);
    if (!noun) {
      if (is_keyword(peek().text) || parse_property_kind(peek().text)) {
        fail("an object name");
      }
      throw UnknownWordError(peek().text);
    }
    ++at_;
    return *noun;
  }

  PropertyKind parse_property() {
    if (peek().kind != Token::Kind::kWord) fail("a property name");
    const auto prop = parse_property_kind(peek().text);
    if (!prop) {
      if (is_keyword(peek().text) || parse_object_kind(peek().text)) {
        fail("a property name");
      }
      throw UnknownWordError(peek().text);
    }
    ++at_;
    return *prop;
  }

  std::optional<Token::Kind> open_quote() {
    switch (peek().kind) {
      case Token::Kind::kQuote:
        ++at_;
        return Token::Kind::kQuote;
      case Token::Kind::kOpenBracket:
        ++at_;
        return Token::Kind::kCloseBracket;
      case Token::Kind::kOpenBrace:
        ++at_;
        return Token::Kind::kCloseBrace;
      default:
        return std::nullopt;
    }
  }

  void close_quote(std::optional<Token::Kind> closer) {
    if (!closer) return;
    if (peek().kind != *closer) {
      fail(*closer == Token::Kind::kQuote ? "'\"'"
           : *closer == Token::Kind::kCloseBracket ? "']'"
                                                   : "'}'");
    }
    ++at_;
  }

  Rule parse_rule() {
    const auto closer = open_quote();
    const ObjectKind noun = parse_noun();
    if (!peek_word("is")) fail("'is'");
    ++at_;
    const PropertyKind prop = parse_property();
    close_quote(closer);
    return Rule{noun, prop};
  }

  PlanStep parse_step() {
    if (peek().kind != Token::Kind::kWord) fail("'break', 'make' or 'goto'");
    const std::string& word = peek().text;
    if (word == "break") {
      ++at_;
      return PlanStep::Break(parse_rule());
    }
    if (word == "make") {
      ++at_;
      return PlanStep::Make(parse_rule());
    }
    if (word == "goto") {
      ++at_;
      const auto closer = open_quote();
      const ObjectKind target = parse_noun();
      close_quote(closer);
      return PlanStep::Goto(target);
    }
    fail("'break', 'make' or 'goto'");
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

// Drops markdown and list decoration models like to wrap answers in.
std::string strip_decoration(std::string_view line) {
  constexpr std::string_view kLeading = " \t*`_>#-:";
  constexpr std::string_view kTrailing = " \t\r*`_.;:";
  const std::size_t b = line.find_first_not_of(kLeading);
  if (b == std::string_view::npos) return "";
  const std::size_t e = line.find_last_not_of(kTrailing);
  return std::string(line.substr(b, e + 1 - b));
}

std::optional<Plan> try_parse(std::string_view text) {
  try {
    return parse_plan(text);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Position just past the last case-insensitive "plan:" in the line.
std::optional<std::size_t> find_marker(std::string_view line) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i + 5 <= line.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) == 'p' &&
        std::tolower(static_cast<unsigned char>(line[i + 1])) == 'l' &&
        std::tolower(static_cast<unsigned char>(line[i + 2])) == 'a' &&
        std::tolower(static_cast<unsigned char>(line[i + 3])) == 'n' &&
        line[i + 4] == ':') {
      found = i + 5;
    }
  }
  return found;
}

}  // namespace

bool PlanStep::operator==(const PlanStep& other) const {
  if (type != other.type) return false;
  return type == Type::kGoto ? target == other.target : rule == other.rule;
}

ParseError::ParseError(std::size_t position, std::string expected)
    : Error("parse error at offset " + std::to_string(position) +
            ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

UnknownWordError::UnknownWordError(std::string token)
    : Error("unknown word '" + token + "'"), token_(std::move(token)) {}

Plan::Plan(std::vector<PlanStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty() || steps_.back().type != PlanStep::Type::kGoto) {
    throw NotGotoTerminatedError();
  }
}

std::string format_step(const PlanStep& step) {
  switch (step.type) {
    case PlanStep::Type::kBreak:
      return "break \"" + to_string(step.rule) + "\"";
    case PlanStep::Type::kMake:
      return "make \"" + to_string(step.rule) + "\"";
    case PlanStep::Type::kGoto:
      return "goto " + std::string(to_string(step.target));
  }
  return "";
}

std::string format_plan(const Plan& plan) {
  std::string out;
  for (const PlanStep& s : plan.steps()) {
    if (!out.empty()) out += " then ";
    out += format_step(s);
  }
  return out;
}

Plan parse_plan(std::string_view text) { return Parser(text).parse(); }

Plan extract_final_plan(std::string_view response) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= response.size()) {
    std::size_t end = response.find('\n', start);
    if (end == std::string_view::npos) end = response.size();
    lines.push_back(response.substr(start, end - start));
    start = end + 1;
  }

  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const auto marker = find_marker(*it);
    if (!marker) continue;
    if (auto plan = try_parse(strip_decoration(it->substr(*marker)))) {
      return *plan;
    }
  }
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (auto plan = try_parse(strip_decoration(*it))) return *plan;
  }
  throw NoPlanFoundError();
}

bool plans_equal(const Plan& a, const Plan& b) {
  return format_plan(a) == format_plan(b);
}

std::string plan_shape(const Plan& plan) {
  std::string out;
  for (const PlanStep& s : plan.steps()) {
    if (!out.empty()) out += "-";
    switch (s.type) {
      case PlanStep::Type::kBreak: out += "break"; break;
      case PlanStep::Type::kMake: out += "make"; break;
      case PlanStep::Type::kGoto: out += "goto"; break;
    }
  }
  return out;
}

}  // namespace rulegrid
