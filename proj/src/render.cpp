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

#include "rulegrid/render.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "rulegrid/rules.hpp"

namespace rulegrid {
namespace {

using nlohmann::json;

// 3x5 glyphs, one 3-bit row per entry, MSB on the left. Only the letters
// used by the vocabulary are present.
struct Glyph {
  char letter;
  std::array<std::uint8_t, 5> rows;
};

constexpr std::array<Glyph, 16> kFont = {{
    {'a', {0b010, 0b101, 0b111, 0b101, 0b101}},
    {'b', {0b110, 0b101, 0b110, 0b101, 0b110}},
    {'d', {0b110, 0b101, 0b101, 0b101, 0b110}},
    {'e', {0b111, 0b100, 0b110, 0b100, 0b111}},
    {'i', {0b111, 0b010, 0b010, 0b010, 0b111}},
    {'k', {0b101, 0b101, 0b110, 0b101, 0b101}},
    {'l', {0b100, 0b100, 0b100, 0b100, 0b111}},
    {'n', {0b110, 0b101, 0b101, 0b101, 0b101}},
    {'o', {0b111, 0b101, 0b101, 0b101, 0b111}},
    {'p', {0b110, 0b101, 0b110, 0b100, 0b100}},
    {'r', {0b110, 0b101, 0b110, 0b101, 0b101}},
    {'s', {0b011, 0b100, 0b010, 0b001, 0b110}},
    {'t', {0b111, 0b010, 0b010, 0b010, 0b010}},
    {'u', {0b101, 0b101, 0b101, 0b101, 0b111}},
    {'w', {0b101, 0b101, 0b101, 0b111, 0b101}},
    {'y', {0b101, 0b101, 0b010, 0b010, 0b010}},
}};

const Glyph* find_glyph(char c) {
  for (const Glyph& g : kFont) {
    if (g.letter == c) return &g;
  }
  return nullptr;
}

std::string_view text_word(EntityKind kind) {
  switch (kind.tag()) {
    case EntityKind::Tag::kNounText:
      return to_string(kind.object());
    case EntityKind::Tag::kIsText:
      return "is";
    case EntityKind::Tag::kPropertyText:
      return to_string(kind.property());
    case EntityKind::Tag::kObject:
      break;
  }
  return to_string(kind.object());
}

class Canvas {
 public:
  explicit Canvas(Image& image) : image_(image) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= image_.width || y >= image_.height) return;
    const std::size_t i = (static_cast<std::size_t>(y) * image_.width + x) * 3;
    image_.rgb[i] = c.r;
    image_.rgb[i + 1] = c.g;
    image_.rgb[i + 2] = c.b;
  }

  void fill_rect(int x0, int y0, int w, int h, Rgb c) {
    for (int y = y0; y < y0 + h; ++y) {
      for (int x = x0; x < x0 + w; ++x) set(x, y, c);
    }
  }

  void outline_rect(int x0, int y0, int w, int h, int t, Rgb c) {
    fill_rect(x0, y0, w, t, c);
    fill_rect(x0, y0 + h - t, w, t, c);
    fill_rect(x0, y0, t, h, c);
    fill_rect(x0 + w - t, y0, t, h, c);
  }

  // Integer test against twice the coordinates keeps this exact.
  void fill_circle(int x0, int y0, int size, Rgb c) {
    const int d = size;
    for (int y = 0; y < d; ++y) {
      for (int x = 0; x < d; ++x) {
        const int dx = 2 * x + 1 - d;
        const int dy = 2 * y + 1 - d;
        if (dx * dx + dy * dy <= d * d) set(x0 + x, y0 + y, c);
      }
    }
  }

  // Upward-pointing isosceles triangle filling the box.
  void fill_triangle(int x0, int y0, int size, Rgb c) {
    for (int y = 0; y < size; ++y) {
      const int span = y + 1;
      fill_rect(x0 + (size - span) / 2, y0 + y, span, 1, c);
    }
  }

 private:
  Image& image_;
};

Rgb ink_for(Rgb background) {
  const int luma = 299 * background.r + 587 * background.g + 114 * background.b;
  return luma > 128'000 ? Rgb{16, 16, 16} : Rgb{240, 240, 240};
}

Rgb darker(Rgb c) {
  return Rgb{static_cast<std::uint8_t>(c.r / 2), static_cast<std::uint8_t>(c.g / 2),
             static_cast<std::uint8_t>(c.b / 2)};
}

void draw_text_tile(Canvas& canvas, int x0, int y0, EntityKind kind,
                    const RenderConfig& config) {
  const int px = config.cell_px;
  const Rgb fill = config.entry(kind).color;
  const int border = std::max(1, px / 16);
  canvas.fill_rect(x0, y0, px, px, fill);
  canvas.outline_rect(x0, y0, px, px, border, darker(fill));
  if (!config.label_text_blocks) return;

  const std::string_view word = text_word(kind);
  const int scale = std::max(1, px / 16);
  const int n = static_cast<int>(word.size());
  const int text_w = (4 * n - 1) * scale;
  const int text_h = 5 * scale;
  const int left = x0 + (px - text_w) / 2;
  const int top = y0 + (px - text_h) / 2;
  const Rgb ink = ink_for(fill);
  for (int i = 0; i < n; ++i) {
    const Glyph* g = find_glyph(word[static_cast<std::size_t>(i)]);
    if (g == nullptr) continue;
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 3; ++col) {
        if ((g->rows[static_cast<std::size_t>(row)] >> (2 - col)) & 1) {
          canvas.fill_rect(left + (4 * i + col) * scale, top + row * scale,
                           scale, scale, ink);
        }
      }
    }
  }
}

// Draws an object into the square (x0, y0, size).
void draw_object(Canvas& canvas, int x0, int y0, int size, ObjectKind kind,
                 const RenderConfig& config) {
  const Rgb c = config.entry(EntityKind::Object(kind)).color;
  const int m = std::max(1, size / 8);
  switch (kind) {
    case ObjectKind::kBaba:
      canvas.fill_triangle(x0 + m, y0 + m, size - 2 * m, c);
      break;
    case ObjectKind::kDoor:
      canvas.fill_rect(x0 + m, y0 + m, size - 2 * m, size - 2 * m, c);
      canvas.outline_rect(x0 + m, y0 + m, size - 2 * m, size - 2 * m,
                          std::max(1, size / 16), darker(c));
      break;
    case ObjectKind::kKey: {
      const int head = size / 2 - m / 2;
      canvas.fill_circle(x0 + m, y0 + (size - head) / 2, head, c);
      const int shaft_h = std::max(1, size / 8);
      canvas.fill_rect(x0 + m + head - 1, y0 + (size - shaft_h) / 2,
                       size - 2 * m - head + 1, shaft_h, c);
      canvas.fill_rect(x0 + size - m - 2 * shaft_h, y0 + size / 2,
                       shaft_h, size / 5, c);
      break;
    }
    case ObjectKind::kBall:
      canvas.fill_circle(x0 + m, y0 + m, size - 2 * m, c);
      break;
    case ObjectKind::kWall:
      canvas.fill_rect(x0, y0, size, size, c);
      canvas.outline_rect(x0, y0, size, size, std::max(1, size / 16), darker(c));
      break;
  }
}

std::optional<Rgb> parse_color(const std::string& s) {
  if (s.size() != 7 || s[0] != '#') return std::nullopt;
  std::array<int, 3> v{};
  for (int i = 0; i < 3; ++i) {
    int value = 0;
    for (int k = 0; k < 2; ++k) {
      const char ch = static_cast<char>(
          std::tolower(static_cast<unsigned char>(s[static_cast<std::size_t>(1 + 2 * i + k)])));
      int d;
      if (ch >= '0' && ch <= '9') {
        d = ch - '0';
      } else if (ch >= 'a' && ch <= 'f') {
        d = ch - 'a' + 10;
      } else {
        return std::nullopt;
      }
      value = value * 16 + d;
    }
    v[static_cast<std::size_t>(i)] = value;
  }
  return Rgb{static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
             static_cast<std::uint8_t>(v[2])};
}

std::string format_color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb color_field(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a \"#rrggbb\" string");
  const auto c = parse_color(j.get<std::string>());
  if (!c) throw ConfigError(where + ": bad color '" + j.get<std::string>() + "'");
  return *c;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

}  // namespace

std::array<PaletteEntry, EntityKind::kNumCodes> RenderConfig::default_palette() {
  std::array<PaletteEntry, EntityKind::kNumCodes> p{};
  p[EntityKind::Object(ObjectKind::kBaba).code()] = {'B', {245, 245, 245}};
  p[EntityKind::Object(ObjectKind::kDoor).code()] = {'D', {46, 160, 67}};
  p[EntityKind::Object(ObjectKind::kKey).code()] = {'K', {230, 200, 40}};
  p[EntityKind::Object(ObjectKind::kBall).code()] = {'O', {60, 110, 220}};
  p[EntityKind::Object(ObjectKind::kWall).code()] = {'#', {120, 120, 120}};
  for (ObjectKind k : kAllObjectKinds) {
    p[EntityKind::Noun(k).code()] = {'*', {220, 90, 150}};
  }
  p[EntityKind::Is().code()] = {'*', {235, 235, 235}};
  p[EntityKind::Property(PropertyKind::kYou).code()] = {'*', {235, 140, 40}};
  p[EntityKind::Property(PropertyKind::kWin).code()] = {'*', {235, 200, 60}};
  p[EntityKind::Property(PropertyKind::kStop).code()] = {'*', {150, 70, 200}};
  return p;
}

void RenderConfig::validate() const {
  const int min_px = label_text_blocks ? 16 : 4;
  if (cell_px < min_px || cell_px > 256) {
    throw ConfigError("cell_px must be in [" + std::to_string(min_px) +
                      ", 256], got " + std::to_string(cell_px));
  }
  std::string seen;
  for (std::uint8_t code = 0; code < EntityKind::kNumCodes; ++code) {
    const EntityKind kind = EntityKind::FromCode(code);
    const char g = palette[code].glyph;
    if (!std::isgraph(static_cast<unsigned char>(g)) || g == '.' || g == '&' ||
        g == '(') {
      throw ConfigError("glyph for " + to_string(kind) + " is not allowed");
    }
    if (kind.is_object()) {
      if (seen.find(g) != std::string::npos) {
        throw ConfigError("object glyph '" + std::string(1, g) +
                          "' is used twice");
      }
      seen.push_back(g);
    }
  }
  for (std::uint8_t code = EntityKind::Noun(ObjectKind::kBaba).code();
       code < EntityKind::kNumCodes; ++code) {
    if (seen.find(palette[code].glyph) != std::string::npos) {
      throw ConfigError("text glyph collides with an object glyph");
    }
  }
}

RenderConfig parse_render_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("render config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("render config must be a JSON object");
  RenderConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "cell_px") {
      if (!value.is_number_integer()) throw ConfigError("cell_px: expected an integer");
      config.cell_px = value.get<int>();
    } else if (key == "label_text_blocks") {
      if (!value.is_boolean()) throw ConfigError("label_text_blocks: expected a boolean");
      config.label_text_blocks = value.get<bool>();
    } else if (key == "background") {
      config.background = color_field(value, "background");
    } else if (key == "palette") {
      if (!value.is_object()) throw ConfigError("palette: expected an object");
      for (const auto& [name, entry] : value.items()) {
        const auto kind = parse_entity_kind(name);
        if (!kind) throw ConfigError("palette: unknown kind '" + name + "'");
        PaletteEntry& slot = config.palette[kind->code()];
        if (!entry.is_object()) throw ConfigError("palette." + name + ": expected an object");
        for (const auto& [field, v] : entry.items()) {
          if (field == "glyph") {
            if (!v.is_string() || v.get<std::string>().size() != 1) {
              throw ConfigError("palette." + name + ".glyph: expected one character");
            }
            slot.glyph = v.get<std::string>()[0];
          } else if (field == "color") {
            slot.color = color_field(v, "palette." + name + ".color");
          } else {
            throw ConfigError("palette." + name + ": unknown field '" + field + "'");
          }
        }
      }
    } else {
      throw ConfigError("render config: unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

RenderConfig read_render_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open render config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_render_config(buffer.str());
}

std::string format_render_config(const RenderConfig& config) {
  json palette = json::object();
  for (std::uint8_t code = 0; code < EntityKind::kNumCodes; ++code) {
    const PaletteEntry& e = config.palette[code];
    palette[to_string(EntityKind::FromCode(code))] = {
        {"glyph", std::string(1, e.glyph)}, {"color", format_color(e.color)}};
  }
  const json doc = {{"cell_px", config.cell_px},
                    {"label_text_blocks", config.label_text_blocks},
                    {"background", format_color(config.background)},
                    {"palette", palette}};
  return doc.dump(2) + "\n";
}

std::string render_ascii(const GridState& grid, const RenderConfig& config) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
  std::map<Position, std::string> legend;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const Position p{col, row};
      const auto here = grid.entities_at(p);
      if (here.empty()) continue;
      char& cell = rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (here.size() == 1) {
        cell = config.entry(here[0].kind).glyph;
        if (here[0].kind.is_text()) {
          legend[p] = "[" + std::string(text_word(here[0].kind)) + "]";
        }
        continue;
      }
      cell = '&';
      std::string names;
      for (const Entity& e : here) {
        if (!names.empty()) names += '+';
        names += to_string(e.kind);
      }
      legend[p] = names;
    }
  }
  std::string out;
  for (const std::string& r : rows) out += r + "\n";
  for (const auto& [pos, text] : legend) {
    out += "(" + to_string(pos) + ") " + text + "\n";
  }
  return out;
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return Rgb{rgb[i], rgb[i + 1], rgb[i + 2]};
}

Image rasterize(const GridState& grid, const RenderConfig& config) {
  config.validate();
  const int px = config.cell_px;
  Image image;
  image.width = grid.width() * px;
  image.height = grid.height() * px;
  image.rgb.resize(static_cast<std::size_t>(image.width) * image.height * 3);
  Canvas canvas(image);
  canvas.fill_rect(0, 0, image.width, image.height, config.background);

  const PropertyTable table = property_table(grid);
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      auto here = grid.entities_at(Position{col, row});
      const int x0 = col * px;
      const int y0 = row * px;
      if (here.empty()) continue;
      if (here.size() == 1 && here[0].kind.is_text()) {
        draw_text_tile(canvas, x0, y0, here[0].kind, config);
        continue;
      }
      // Non-you objects underneath, you-objects drawn inset on top.
      std::stable_sort(here.begin(), here.end(), [&](const Entity& a, const Entity& b) {
        return !table.has(a.kind.object(), PropertyKind::kYou) &&
               table.has(b.kind.object(), PropertyKind::kYou);
      });
      for (std::size_t i = 0; i < here.size(); ++i) {
        if (i == 0) {
          draw_object(canvas, x0, y0, px, here[i].kind.object(), config);
        } else {
          const int inset = px / 4;
          draw_object(canvas, x0 + inset, y0 + inset, px - 2 * inset,
                      here[i].kind.object(), config);
        }
      }
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> out;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 9);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(
                           image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> render_png(const GridState& grid,
                                     const RenderConfig& config) {
  return encode_png(rasterize(grid, config));
}

}  // namespace rulegrid
