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

#include "rulegrid/rules.hpp"

#include <algorithm>

namespace rulegrid {

std::vector<PropertyKind> PropertyTable::properties(ObjectKind kind) const {
  std::vector<PropertyKind> out;
  for (PropertyKind p : kAllPropertyKinds) {
    if (has(kind, p)) out.push_back(p);
  }
  return out;
}

bool PropertyTable::any(PropertyKind prop) const {
  return std::any_of(kAllObjectKinds.begin(), kAllObjectKinds.end(),
                     [&](ObjectKind k) { return has(k, prop); });
}

std::vector<ActiveRuleInstance> scan_active_rules(const GridState& grid) {
  const int w = grid.width();
  const int h = grid.height();
  // Text blocks never share a cell, so one slot per cell is enough.
  std::array<std::int16_t, kMaxCells> text_code;
  text_code.fill(-1);
  for (const Entity& e : grid.entities()) {
    if (e.kind.is_text()) text_code[grid.cell_index(e.pos)] = e.kind.code();
  }

  std::vector<ActiveRuleInstance> out;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col + 2 < w; ++col) {
      const int base = row * w + col;
      if (text_code[base] < 0 || text_code[base + 1] < 0 ||
          text_code[base + 2] < 0) {
        continue;
      }
      const auto noun = EntityKind::FromCode(
          static_cast<std::uint8_t>(text_code[base]));
      const auto is = EntityKind::FromCode(
          static_cast<std::uint8_t>(text_code[base + 1]));
      const auto prop = EntityKind::FromCode(
          static_cast<std::uint8_t>(text_code[base + 2]));
      if (noun.tag() != EntityKind::Tag::kNounText ||
          is.tag() != EntityKind::Tag::kIsText ||
          prop.tag() != EntityKind::Tag::kPropertyText) {
        continue;
      }
      out.push_back(ActiveRuleInstance{Rule{noun.object(), prop.property()},
                                       Position{col, row},
                                       Position{col + 1, row},
                                       Position{col + 2, row}});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PropertyTable property_table(std::span<const ActiveRuleInstance> rules) {
  PropertyTable table;
  for (const ActiveRuleInstance& r : rules) table.add(r.rule.noun, r.rule.prop);
  return table;
}

std::vector<Rule> active_rules(const GridState& grid) {
  std::vector<Rule> out;
  for (const ActiveRuleInstance& r : scan_active_rules(grid)) {
    out.push_back(r.rule);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rule> formable_rules(const GridState& grid) {
  std::array<bool, kAllObjectKinds.size()> nouns{};
  std::array<bool, kAllPropertyKinds.size()> props{};
  bool has_is = false;
  for (const Entity& e : grid.entities()) {
    switch (e.kind.tag()) {
      case EntityKind::Tag::kNounText:
        nouns[static_cast<int>(e.kind.object())] = true;
        break;
      case EntityKind::Tag::kIsText:
        has_is = true;
        break;
      case EntityKind::Tag::kPropertyText:
        props[static_cast<int>(e.kind.property())] = true;
        break;
      case EntityKind::Tag::kObject:
        break;
    }
  }
  std::vector<Rule> out;
  if (!has_is) return out;
  for (ObjectKind n : kAllObjectKinds) {
    for (PropertyKind p : kAllPropertyKinds) {
      if (nouns[static_cast<int>(n)] && props[static_cast<int>(p)]) {
        out.push_back(Rule{n, p});
      }
    }
  }
  return out;
}

}  // namespace rulegrid
