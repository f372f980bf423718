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

#ifndef RULEGRID_RENDER_HPP_
#define RULEGRID_RENDER_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"

namespace rulegrid {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

struct PaletteEntry {
  char glyph = '?';
  Rgb color;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RenderConfig {
  int cell_px = 32;
  bool label_text_blocks = true;
  Rgb background{24, 24, 24};
  // Indexed by EntityKind::code().
  std::array<PaletteEntry, EntityKind::kNumCodes> palette = default_palette();

  const PaletteEntry& entry(EntityKind kind) const {
    return palette[kind.code()];
  }

  static std::array<PaletteEntry, EntityKind::kNumCodes> default_palette();

  // Throws ConfigError: cell_px below 16 with labels (4 without) or above
  // 256, object glyphs that are not distinct printable characters, or any
  // glyph equal to the reserved '.', '&' or '('.
  void validate() const;
};

// Palette files are JSON; keys not present keep their defaults. Schema in
// docs/render_config.md.
RenderConfig parse_render_config(std::string_view json_text);
RenderConfig read_render_config(const std::filesystem::path& path);
std::string format_render_config(const RenderConfig& config);

// One line of `width` glyphs per row, then a legend. Objects show their
// glyph; text cells show the text glyph and add a legend line
// `(c,r) [word]`; cells holding two objects show '&' and add
// `(c,r) kind+kind`; empty cells are '.'.
std::string render_ascii(const GridState& grid, const RenderConfig& config = {});

// Row-major RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb at(int x, int y) const;
};

// (width*cell_px) x (height*cell_px) pixels. Text blocks are labeled tiles;
// in a shared cell the you-object is drawn inset on top of the other.
Image rasterize(const GridState& grid, const RenderConfig& config = {});

// Byte-stable for fixed inputs and the libpng/zlib versions linked.
std::vector<std::uint8_t> encode_png(const Image& image);

std::vector<std::uint8_t> render_png(const GridState& grid,
                                     const RenderConfig& config = {});

}  // namespace rulegrid

#endif  // RULEGRID_RENDER_HPP_
