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

#include "rulegrid/level_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rulegrid {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view s, int line) {
  Int value{};
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw LevelFormatError(line, "expected an integer, got '" +
                                     std::string(s) + "'");
  }
  return value;
}

}  // namespace

LevelFormatError::LevelFormatError(int line, const std::string& message)
    : Error("level file line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string format_level(const LevelFile& level) {
  std::ostringstream out;
  out << "# rulegrid level v1\n";
  out << "width " << level.grid.width() << "\n";
  out << "height " << level.grid.height() << "\n";
  if (level.family) out << "family " << *level.family << "\n";
  if (level.seed) out << "seed " << *level.seed << "\n";
  if (level.gold) out << "gold " << *level.gold << "\n";
  for (const Entity& e : level.grid.entities()) {
    out << to_string(e.kind) << " @ " << e.pos.col << "," << e.pos.row << "\n";
  }
  return out.str();
}

LevelFile parse_level(std::string_view text) {
  std::optional<int> width;
  std::optional<int> height;
  std::optional<std::string> family;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> gold;
  std::vector<Placement> placements;

  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto at = line.find('@');
    if (at != std::string_view::npos) {
      const std::string_view kind_text = trim(line.substr(0, at));
      const auto kind = parse_entity_kind(kind_text);
      if (!kind) {
        throw LevelFormatError(line_no,
                               "unknown kind '" + std::string(kind_text) + "'");
      }
      const std::string_view coords = line.substr(at + 1);
      const auto comma = coords.find(',');
      if (comma == std::string_view::npos) {
        throw LevelFormatError(line_no, "expected 'col,row'");
      }
      placements.push_back(
          {*kind, Position{parse_int<int>(coords.substr(0, comma), line_no),
                           parse_int<int>(coords.substr(comma + 1), line_no)}});
      continue;
    }

    const auto space = line.find_first_of(" \t");
    const std::string_view field = line.substr(0, space);
    const std::string_view value =
        space == std::string_view::npos ? std::string_view{}
                                        : trim(line.substr(space));
    if (field == "width") {
      width = parse_int<int>(value, line_no);
    } else if (field == "height") {
      height = parse_int<int>(value, line_no);
    } else if (field == "family") {
      family = std::string(value);
    } else if (field == "seed") {
      seed = parse_int<std::uint64_t>(value, line_no);
    } else if (field == "gold") {
      gold = std::string(value);
    } else {
      throw LevelFormatError(line_no,
                             "unknown field '" + std::string(field) + "'");
    }
  }
  if (!width || !height) throw LevelFormatError(line_no, "missing width/height");
  return LevelFile{make_grid(*width, *height, placements), std::move(family),
                   seed, std::move(gold)};
}

LevelFile read_level_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open level file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_level(buffer.str());
}

void write_level_file(const std::filesystem::path& path,
                      const LevelFile& level) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write level file " + path.string());
  out << format_level(level);
}

}  // namespace rulegrid
