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

#include <gtest/gtest.h>
#include <png.h>

#include "rulegrid/render.hpp"
#include "support/reference.hpp"

namespace rulegrid {
namespace {

TEST(Ascii, GlyphsAndLegend) {
  const GridState g = ref::from_ascii({"b=y", "B..", "..D"});
  EXPECT_EQ(render_ascii(g),
            "***\n"
            "B..\n"
            "..D\n"
            "(0,0) [baba]\n"
            "(1,0) [is]\n"
            "(2,0) [you]\n");
}

TEST(Ascii, SharedCellsAreMarked) {
  const Placement p[] = {{EntityKind::Object(ObjectKind::kBaba), {1, 1}},
                         {EntityKind::Object(ObjectKind::kKey), {1, 1}},
                         {EntityKind::Object(ObjectKind::kWall), {0, 2}}};
  EXPECT_EQ(render_ascii(make_grid(3, 3, p)),
            "...\n"
            ".&.\n"
            "#..\n"
            "(1,1) baba+key\n");
}

TEST(Ascii, CustomGlyphs) {
  RenderConfig c = parse_render_config(R"({"palette": {"baba": {"glyph": "@"}}})");
  EXPECT_EQ(render_ascii(ref::from_ascii({"B..", "...", "..."}), c), "@..\n...\n...\n");
}

TEST(Raster, SizeAndColors) {
  const GridState g = ref::from_ascii({"b=y.", "....", "...D", "...."});
  RenderConfig c;
  c.cell_px = 16;
  const Image img = rasterize(g, c);
  EXPECT_EQ(img.width, 64);
  EXPECT_EQ(img.height, 64);
  EXPECT_EQ(img.rgb.size(), 64u * 64u * 3u);
  EXPECT_EQ(img.at(16 + 8, 16 + 8), c.background);
  EXPECT_EQ(img.at(3 * 16 + 8, 2 * 16 + 8), c.entry(EntityKind::Object(ObjectKind::kDoor)).color);
  EXPECT_NE(img.at(8, 8), c.background);
}

TEST(Raster, DifferentGridsDifferentImages) {
  const Image a = rasterize(ref::from_ascii({"B..", "...", "..."}));
  const Image b = rasterize(ref::from_ascii({".B.", "...", "..."}));
  EXPECT_NE(a.rgb, b.rgb);
}

TEST(Png, DecodesBackToTheRaster) {
  const GridState g = ref::from_ascii({"b=y.", "d=v.", "B..D", "#.O."});
  const Image img = rasterize(g);
  const std::vector<std::uint8_t> bytes = encode_png(img);
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(png_sig_cmp(bytes.data(), 0, 8), 0);

  png_image decoded{};
  decoded.version = PNG_IMAGE_VERSION;
  ASSERT_TRUE(png_image_begin_read_from_memory(&decoded, bytes.data(), bytes.size()));
  decoded.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(decoded));
  ASSERT_TRUE(png_image_finish_read(&decoded, nullptr, pixels.data(), 0, nullptr));
  EXPECT_EQ(static_cast<int>(decoded.width), img.width);
  EXPECT_EQ(static_cast<int>(decoded.height), img.height);
  EXPECT_EQ(pixels, img.rgb);
  EXPECT_EQ(encode_png(img), bytes);
  EXPECT_EQ(render_png(g), bytes);
}

TEST(Config, RoundTrips) {
  RenderConfig c;
  c.cell_px = 48;
  c.background = {1, 2, 3};
  c.palette[EntityKind::Object(ObjectKind::kKey).code()] = {'k', {9, 8, 7}};
  const RenderConfig back = parse_render_config(format_render_config(c));
  EXPECT_EQ(back.cell_px, 48);
  EXPECT_EQ(back.background, (Rgb{1, 2, 3}));
  EXPECT_EQ(back.entry(EntityKind::Object(ObjectKind::kKey)).glyph, 'k');
  EXPECT_EQ(back.entry(EntityKind::Object(ObjectKind::kKey)).color, (Rgb{9, 8, 7}));
  EXPECT_EQ(format_render_config(back), format_render_config(c));
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {
           "[]",
           "{",
           R"({"cell_size": 32})",
           R"({"cell_px": 8})",
           R"({"cell_px": 512})",
           R"({"cell_px": "32"})",
           R"({"background": "#12345"})",
           R"({"background": "red"})",
           R"({"palette": {"rock": {"glyph": "R"}}})",
           R"({"palette": {"key": {"glyph": "B"}}})",
           R"({"palette": {"key": {"glyph": "."}}})",
           R"({"palette": {"key": {"glyph": "&"}}})",
           R"({"palette": {"key": {"glyph": "KK"}}})",
           R"({"palette": {"key": {"shape": "x"}}})",
       }) {
    EXPECT_THROW(parse_render_config(text), ConfigError) << text;
  }
  EXPECT_NO_THROW(parse_render_config(R"({"cell_px": 8, "label_text_blocks": false})"));
}

}  // namespace
}  // namespace rulegrid
