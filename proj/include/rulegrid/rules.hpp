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

#ifndef RULEGRID_RULES_HPP_
#define RULEGRID_RULES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rulegrid/core.hpp"

namespace rulegrid {

// A concrete `noun is property` triple laid out left to right on one row.
struct ActiveRuleInstance {
  Rule rule;
  Position noun_pos;
  Position is_pos;
  Position prop_pos;

  auto operator<=>(const ActiveRuleInstance&) const = default;
};

// Properties granted to each object kind by the active rules. There are no
// intrinsic properties: an empty rule set means every kind has none.
class PropertyTable {
 public:
  bool has(ObjectKind kind, PropertyKind prop) const {
    return (bits_[static_cast<int>(kind)] >> static_cast<int>(prop)) & 1u;
  }
  void add(ObjectKind kind, PropertyKind prop) {
    bits_[static_cast<int>(kind)] |=
        static_cast<std::uint8_t>(1u << static_cast<int>(prop));
  }
  std::vector<PropertyKind> properties(ObjectKind kind) const;
  bool any(PropertyKind prop) const;

  bool operator==(const PropertyTable&) const = default;

 private:
  std::array<std::uint8_t, kAllObjectKinds.size()> bits_{};
};

// Sorted, duplicate-free.
std::vector<ActiveRuleInstance> scan_active_rules(const GridState& grid);

PropertyTable property_table(std::span<const ActiveRuleInstance> rules);

inline PropertyTable property_table(const GridState& grid) {
  return property_table(scan_active_rules(grid));
}

// Distinct abstract rules among the active instances, sorted.
std::vector<Rule> active_rules(const GridState& grid);

// Every (noun, prop) whose three block types are all present somewhere.
// Necessary, not sufficient, for the rule to ever become active.
std::vector<Rule> formable_rules(const GridState& grid);

}  // namespace rulegrid

#endif  // RULEGRID_RULES_HPP_
