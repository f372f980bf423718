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

// Line-oriented level files; grammar in docs/level_format.md.

#ifndef RULEGRID_LEVEL_IO_HPP_
#define RULEGRID_LEVEL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rulegrid/core.hpp"

namespace rulegrid {

class LevelFormatError : public Error {
 public:
  LevelFormatError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct LevelFile {
  GridState grid;
  std::optional<std::string> family;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> gold;  // canonical plan text
};

// Entities are written in id order; output is byte-stable.
std::string format_level(const LevelFile& level);
LevelFile parse_level(std::string_view text);

LevelFile read_level_file(const std::filesystem::path& path);
void write_level_file(const std::filesystem::path& path,
                      const LevelFile& level);

}  // namespace rulegrid

#endif  // RULEGRID_LEVEL_IO_HPP_
