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

// High-level plan language. Canonical form (see docs/plan_grammar.md):
//
//   break "wall is stop" then make "door is win" then goto door
//
// Input is accepted case-insensitively with free whitespace; rules may be
// quoted with "...", [...] or {...}, or left bare; steps may also be
// separated by commas.

#ifndef RULEGRID_PLAN_HPP_
#define RULEGRID_PLAN_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"

namespace rulegrid {

struct PlanStep {
  enum class Type : std::uint8_t { kBreak, kMake, kGoto };

  Type type = Type::kGoto;
  Rule rule{ObjectKind::kBaba, PropertyKind::kYou};  // kBreak / kMake
  ObjectKind target = ObjectKind::kBaba;             // kGoto

  static PlanStep Break(Rule r) { return {Type::kBreak, r, ObjectKind::kBaba}; }
  static PlanStep Make(Rule r) { return {Type::kMake, r, ObjectKind::kBaba}; }
  static PlanStep Goto(ObjectKind k) {
    return {Type::kGoto, Rule{ObjectKind::kBaba, PropertyKind::kYou}, k};
  }

  bool operator==(const PlanStep& other) const;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class NotGotoTerminatedError : public Error {
 public:
  NotGotoTerminatedError() : Error("plan must end with a goto step") {}
};

class UnknownWordError : public Error {
 public:
  explicit UnknownWordError(std::string token);
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class NoPlanFoundError : public Error {
 public:
  NoPlanFoundError() : Error("no plan found in response") {}
};

// Non-empty step list ending in a goto.
class Plan {
 public:
  // Throws NotGotoTerminatedError (also for an empty list).
  explicit Plan(std::vector<PlanStep> steps);

  const std::vector<PlanStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }

  bool operator==(const Plan&) const = default;

 private:
  std::vector<PlanStep> steps_;
};

std::string format_step(const PlanStep& step);
std::string format_plan(const Plan& plan);

// Throws ParseError, UnknownWordError or NotGotoTerminatedError.
Plan parse_plan(std::string_view text);

// Last `PLAN:` answer that parses, else the last line that parses.
// Throws NoPlanFoundError.
Plan extract_final_plan(std::string_view response);

// Exact match after canonicalization.
bool plans_equal(const Plan& a, const Plan& b);

// Shape signature such as "break-make-goto".
std::string plan_shape(const Plan& plan);

}  // namespace rulegrid

#endif  // RULEGRID_PLAN_HPP_
