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

#include "rulegrid/solver.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

#include "rulegrid/rules.hpp"

namespace rulegrid {
namespace {

constexpr std::uint32_t kNoParent = 0xffffffffu;
constexpr std::size_t kMaxPendingEvents = 2;

// Search nodes packed back to back: the state key, optionally followed by
// the reduced event stack. Deduplicates on the packed content.
class NodeStore {
 public:
  NodeStore() : index_(1024, Hash{this}, Eq{this}) { offsets_.push_back(0); }
  NodeStore(const NodeStore&) = delete;
  NodeStore& operator=(const NodeStore&) = delete;

  // Returns the new node's index, or nullopt if the content is known.
  std::optional<std::uint32_t> insert(std::span<const std::uint16_t> content,
                                      std::uint32_t parent, Action action,
                                      int depth) {
    data_.insert(data_.end(), content.begin(), content.end());
    offsets_.push_back(static_cast<std::uint32_t>(data_.size()));
    const auto index = static_cast<std::uint32_t>(parent_.size());
    parent_.push_back(parent);
    action_.push_back(action);
    depth_.push_back(static_cast<std::uint16_t>(depth));
    if (!index_.insert(index).second) {
      data_.resize(data_.size() - content.size());
      offsets_.pop_back();
      parent_.pop_back();
      action_.pop_back();
      depth_.pop_back();
      return std::nullopt;
    }
    return index;
  }

  std::span<const std::uint16_t> content(std::uint32_t i) const {
    return std::span<const std::uint16_t>(data_).subspan(
        offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  std::size_t size() const { return parent_.size(); }
  int depth(std::uint32_t i) const { return depth_[i]; }

  std::vector<Action> path_to(std::uint32_t i) const {
    std::vector<Action> actions;
    while (parent_[i] != kNoParent) {
      actions.push_back(action_[i]);
      i = parent_[i];
    }
    std::reverse(actions.begin(), actions.end());
    return actions;
  }

 private:
  struct Hash {
    const NodeStore* store;
    std::size_t operator()(std::uint32_t i) const {
      return hash_key(store->content(i));
    }
  };
  struct Eq {
    const NodeStore* store;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      const auto x = store->content(a);
      const auto y = store->content(b);
      return std::equal(x.begin(), x.end(), y.begin(), y.end());
    }
  };

  std::vector<std::uint16_t> data_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> parent_;
  std::vector<Action> action_;
  std::vector<std::uint16_t> depth_;
  std::unordered_set<std::uint32_t, Hash, Eq> index_;
};

std::uint16_t encode_event(RuleEvent::Type type, const Rule& rule) {
  return static_cast<std::uint16_t>(
      (static_cast<int>(type) << 8) |
      (static_cast<int>(rule.noun) * 3 + static_cast<int>(rule.prop)));
}

RuleEvent::Type event_type(std::uint16_t code) {
  return static_cast<RuleEvent::Type>(code >> 8);
}

Rule event_rule(std::uint16_t code) {
  const int r = code & 0xff;
  return Rule{static_cast<ObjectKind>(r / 3), static_cast<PropertyKind>(r % 3)};
}

std::uint16_t inverse_event(std::uint16_t code) {
  return static_cast<std::uint16_t>(code ^ 0x100);
}

// Appends an event to a reduced stack, cancelling against the top.
void push_reduced(std::vector<std::uint16_t>& stack, std::uint16_t event) {
  if (!stack.empty() && stack.back() == inverse_event(event)) {
    stack.pop_back();
  } else {
    stack.push_back(event);
  }
}

Plan plan_from_stack(std::span<const std::uint16_t> stack, ObjectKind goal) {
  std::vector<PlanStep> steps;
  for (std::uint16_t e : stack) {
    steps.push_back(event_type(e) == RuleEvent::Type::kBroken
                        ? PlanStep::Break(event_rule(e))
                        : PlanStep::Make(event_rule(e)));
  }
  steps.push_back(PlanStep::Goto(goal));
  return Plan(std::move(steps));
}

std::vector<std::uint16_t> concat(const GridState::Key& key,
                                  std::span<const std::uint16_t> stack) {
  std::vector<std::uint16_t> out(key);
  out.insert(out.end(), stack.begin(), stack.end());
  return out;
}

// All orderings of one step's events the validator may match against.
std::vector<std::vector<std::uint16_t>> event_orders(
    const std::vector<RuleEvent>& events) {
  std::vector<std::uint16_t> codes;
  for (const RuleEvent& e : events) codes.push_back(encode_event(e.type, e.rule));
  if (codes.size() <= 1 || codes.size() > 3) return {codes};
  std::vector<std::vector<std::uint16_t>> orders;
  std::vector<std::uint16_t> perm = codes;
  std::sort(perm.begin(), perm.end());
  do {
    orders.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Canonical order first so the witness prefers it.
  std::stable_partition(orders.begin(), orders.end(),
                        [&](const auto& o) { return o == codes; });
  return orders;
}

// Events of one rule alternate between made and broken, and cancellation
// removes adjacent pairs, so a lifted plan fixes each rule's final state.
// A plan is realizable only if every break hits an active rule, every make
// an inactive one, and at the end the goal kind is WIN while some present
// kind is YOU.
bool rule_sequence_feasible(const GridState& grid, const Plan& plan) {
  std::vector<Rule> active = active_rules(grid);
  for (const PlanStep& s : plan.steps()) {
    if (s.type == PlanStep::Type::kGoto) break;
    const auto it = std::lower_bound(active.begin(), active.end(), s.rule);
    const bool on = it != active.end() && *it == s.rule;
    if (s.type == PlanStep::Type::kBreak) {
      if (!on) return false;
      active.erase(it);
    } else {
      if (on) return false;
      active.insert(it, s.rule);
    }
  }
  const auto is_active = [&](ObjectKind k, PropertyKind p) {
    return std::binary_search(active.begin(), active.end(), Rule{k, p});
  };
  if (!is_active(plan.steps().back().target, PropertyKind::kWin)) return false;
  const auto ents = grid.entities();
  return std::any_of(ents.begin(), ents.end(), [&](const Entity& e) {
    return e.kind.is_object() && is_active(e.kind.object(), PropertyKind::kYou);
  });
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved: return "SOLVED";
    case SolveStatus::kUnsolvable: return "UNSOLVABLE";
    case SolveStatus::kLimitExceeded: return "LIMIT_EXCEEDED";
  }
  return "?";
}

std::string_view to_string(Validation::Reason reason) {
  switch (reason) {
    case Validation::Reason::kNone: return "none";
    case Validation::Reason::kMissingBlocks: return "missing-blocks";
    case Validation::Reason::kNoWitnessFound: return "no-witness-found";
    case Validation::Reason::kLimitExceeded: return "limit-exceeded";
  }
  return "?";
}

Plan lift_trace(std::span<const RuleEvent> trace, ObjectKind winning_kind,
                bool intent_filter) {
  std::vector<std::uint16_t> stack;
  for (const RuleEvent& e : trace) {
    const std::uint16_t code = encode_event(e.type, e.rule);
    if (intent_filter) {
      push_reduced(stack, code);
    } else {
      stack.push_back(code);
    }
  }
  return plan_from_stack(stack, winning_kind);
}

SolveResult solve(const GridState& grid, const SearchLimits& limits) {
  if (game_status(grid) == GameStatus::kWon) throw EpisodeOverError();

  const int w = grid.width();
  const int h = grid.height();
  NodeStore store;
  store.insert(grid.key(), kNoParent, Action::kUp, 0);

  bool depth_cut = false;
  for (std::uint32_t at = 0; at < store.size(); ++at) {
    const int depth = store.depth(at);
    if (depth >= limits.max_depth) {
      depth_cut = true;
      continue;
    }
    const auto content = store.content(at);
    const GridState state =
        GridState::FromKey(w, h, GridState::Key(content.begin(), content.end()));
    for (Action action : kAllActions) {
      StepResult r = step(state, action);
      if (!r.moved) continue;
      const auto index = store.insert(r.next.key(), at, action, depth + 1);
      if (!index) continue;
      if (r.status == GameStatus::kWon) {
        std::vector<Action> actions = store.path_to(*index);
        const RunResult replay = run(grid, actions);
        assert(replay.status == GameStatus::kWon);
        const auto goal = winning_object_kind(replay.final_state);
        assert(goal.has_value());
        Solution solution{lift_trace(replay.trace, *goal, true),
                          std::move(actions), store.size()};
        return SolveResult{SolveStatus::kSolved, std::move(solution),
                           store.size()};
      }
      if (store.size() >= limits.max_states) {
        return SolveResult{SolveStatus::kLimitExceeded, std::nullopt,
                           store.size()};
      }
    }
  }
  return SolveResult{
      depth_cut ? SolveStatus::kLimitExceeded : SolveStatus::kUnsolvable,
      std::nullopt, store.size()};
}

Validation validate_plan(const GridState& grid, const Plan& plan,
                         const SearchLimits& limits) {
  const auto formable = formable_rules(grid);
  const auto& steps = plan.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const PlanStep& s = steps[i];
    bool present;
    if (s.type == PlanStep::Type::kGoto) {
      const auto ents = grid.entities();
      present = std::any_of(ents.begin(), ents.end(), [&](const Entity& e) {
        return e.kind == EntityKind::Object(s.target);
      });
    } else {
      present = std::binary_search(formable.begin(), formable.end(), s.rule);
    }
    if (!present) return {false, Validation::Reason::kMissingBlocks, {}};
    if (s.type == PlanStep::Type::kGoto && i + 1 != steps.size()) {
      // Only the final goto can be realized by a trajectory.
      return {false, Validation::Reason::kNoWitnessFound, {}};
    }
  }
  if (game_status(grid) == GameStatus::kWon) throw EpisodeOverError();
  if (!rule_sequence_feasible(grid, plan)) {
    return {false, Validation::Reason::kNoWitnessFound, {}};
  }

  std::vector<std::uint16_t> target;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    target.push_back(encode_event(steps[i].type == PlanStep::Type::kBreak
                                      ? RuleEvent::Type::kBroken
                                      : RuleEvent::Type::kMade,
                                  steps[i].rule));
  }
  const ObjectKind goal = steps.back().target;

  const int w = grid.width();
  const int h = grid.height();
  const std::size_t n = grid.entities().size();
  NodeStore store;
  store.insert(grid.key(), kNoParent, Action::kUp, 0);

  bool limited = false;
  std::vector<std::uint16_t> stack;
  for (std::uint32_t at = 0; at < store.size(); ++at) {
    const int depth = store.depth(at);
    if (depth >= limits.max_depth) {
      limited = true;
      continue;
    }
    const auto content = store.content(at);
    const GridState state = GridState::FromKey(
        w, h, GridState::Key(content.begin(), content.begin() + n));
    const std::vector<std::uint16_t> base_stack(content.begin() + n, content.end());
    for (Action action : kAllActions) {
      StepResult r = step(state, action);
      if (!r.moved) continue;
      const GridState::Key next_key = r.next.key();
      for (const auto& order : event_orders(r.events)) {
        stack.assign(base_stack.begin(), base_stack.end());
        for (std::uint16_t e : order) push_reduced(stack, e);
        std::size_t matched = 0;
        while (matched < stack.size() && matched < target.size() &&
               stack[matched] == target[matched]) {
          ++matched;
        }
        if (stack.size() - matched > kMaxPendingEvents) continue;
        if (r.status == GameStatus::kWon) {
          // Won is absorbing: either this is the witness or a dead end.
          if (stack == target && winning_object_kind(r.next) == goal) {
            std::vector<Action> witness = store.path_to(at);
            witness.push_back(action);
            return {true, Validation::Reason::kNone, std::move(witness)};
          }
          continue;
        }
        store.insert(concat(next_key, stack), at, action, depth + 1);
        if (store.size() >= limits.max_states) {
          return {false, Validation::Reason::kLimitExceeded, {}};
        }
      }
    }
  }
  return {false,
          limited ? Validation::Reason::kLimitExceeded
                  : Validation::Reason::kNoWitnessFound,
          {}};
}

std::vector<Plan> enumerate_minimal_plans(const GridState& grid,
                                          const SearchLimits& limits) {
  if (game_status(grid) == GameStatus::kWon) throw EpisodeOverError();
  const int w = grid.width();
  const int h = grid.height();
  const std::size_t n = grid.entities().size();
  NodeStore store;
  store.insert(grid.key(), kNoParent, Action::kUp, 0);

  std::vector<std::string> seen;
  std::vector<Plan> plans;
  int win_depth = -1;
  std::vector<std::uint16_t> stack;
  for (std::uint32_t at = 0; at < store.size(); ++at) {
    const int depth = store.depth(at);
    if (win_depth >= 0 && depth + 1 > win_depth) break;
    if (depth >= limits.max_depth) break;
    const auto content = store.content(at);
    const GridState state = GridState::FromKey(
        w, h, GridState::Key(content.begin(), content.begin() + n));
    const std::vector<std::uint16_t> base_stack(content.begin() + n, content.end());
    for (Action action : kAllActions) {
      StepResult r = step(state, action);
      if (!r.moved) continue;
      stack.assign(base_stack.begin(), base_stack.end());
      for (const RuleEvent& e : r.events) {
        push_reduced(stack, encode_event(e.type, e.rule));
      }
      if (r.status == GameStatus::kWon) {
        win_depth = depth + 1;
        Plan p = plan_from_stack(stack, *winning_object_kind(r.next));
        std::string text = format_plan(p);
        if (std::find(seen.begin(), seen.end(), text) == seen.end()) {
          seen.push_back(std::move(text));
          plans.push_back(std::move(p));
        }
        continue;
      }
      if (win_depth < 0) {
        store.insert(concat(r.next.key(), stack), at, action, depth + 1);
        if (store.size() >= limits.max_states) return {};
      }
    }
  }
  std::sort(plans.begin(), plans.end(), [](const Plan& a, const Plan& b) {
    return format_plan(a) < format_plan(b);
  });
  return plans;
}

}  // namespace rulegrid
