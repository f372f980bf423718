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

#include "rulegrid/levelgen.hpp"
#include "rulegrid/prompt.hpp"

namespace rulegrid {
namespace {

std::string minimal_template(const std::string& extra = "") {
  return "@@ instructions @@\nplay\n"
         "@@ example @@\nexample {{index}} of {{count}}: {{plan}}\n"
         "@@ algorithm @@\nalgo\n"
         "@@ test @@\ntest\n"
         "@@ query @@\nanswer with PLAN: <plan>\n" + extra;
}

std::vector<LevelSpec> examples(int n) {
  std::vector<LevelSpec> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(generate({FamilyBase::kBaseGoto, false}, static_cast<std::uint64_t>(i)));
  }
  return out;
}

TEST(Template, BuiltinParses) {
  const PromptTemplate t = parse_prompt_template(builtin_prompt_template());
  EXPECT_NE(t.instructions.find("noun IS property"), std::string::npos);
  EXPECT_NE(t.query.find("PLAN:"), std::string::npos);
  EXPECT_EQ(t.hash, sha256_hex(builtin_prompt_template()));
}

TEST(Template, CommentsAreIgnored) {
  const PromptTemplate a = parse_prompt_template(minimal_template());
  const PromptTemplate b = parse_prompt_template("# note\n" + minimal_template());
  EXPECT_EQ(a.instructions, b.instructions);
  EXPECT_NE(a.hash, b.hash);
}

TEST(Template, RejectsStructuralProblems) {
  EXPECT_THROW(parse_prompt_template(minimal_template("@@ query @@\nPLAN:\n")),
               TemplateError);
  EXPECT_THROW(parse_prompt_template(minimal_template("@@ extra @@\nx\n")),
               TemplateError);
  EXPECT_THROW(parse_prompt_template("stray\n" + minimal_template()), TemplateError);
  std::string no_plan = minimal_template();
  no_plan.replace(no_plan.find("{{plan}}"), 8, "");
  EXPECT_THROW(parse_prompt_template(no_plan), TemplateError);
  std::string no_marker = minimal_template();
  no_marker.replace(no_marker.find("PLAN:"), 5, "plan");
  EXPECT_THROW(parse_prompt_template(no_marker), TemplateError);
  std::string missing = minimal_template();
  missing.erase(missing.find("@@ algorithm @@"), std::string("@@ algorithm @@\nalgo\n").size());
  EXPECT_THROW(parse_prompt_template(missing), TemplateError);
}

TEST(Template, UnknownPlaceholderFailsAtBuild) {
  std::string t = minimal_template();
  t.replace(t.find("{{count}}"), 9, "{{total}}");
  const PromptTemplate tmpl = parse_prompt_template(t);
  const auto ex = examples(2);
  const LevelSpec test = generate({FamilyBase::kBaseGoto, false}, 99);
  EXPECT_THROW(build_prompt(tmpl, ex, test, {}), TemplateError);
}

TEST(Prompt, BundleCarriesEveryPartInOrder) {
  const PromptTemplate tmpl = parse_prompt_template(minimal_template());
  const auto ex = examples(3);
  const LevelSpec test = generate({FamilyBase::kBaseGoto, false}, 99);
  const PromptBundle b = build_prompt(tmpl, ex, test, {});
  EXPECT_EQ(b.system_instructions, "play");
  ASSERT_EQ(b.examples.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(b.examples[i].gold_plan, format_plan(ex[i].gold));
    EXPECT_EQ(b.examples[i].text, "example " + std::to_string(i + 1) + " of 3: " +
                                      format_plan(ex[i].gold));
    EXPECT_EQ(b.examples[i].image_png, render_png(ex[i].grid));
  }
  EXPECT_EQ(b.algorithm_request, "algo");
  EXPECT_EQ(b.test_preamble, "test");
  EXPECT_EQ(b.test_image_png, render_png(test.grid));
  EXPECT_EQ(b.template_hash, tmpl.hash);
  EXPECT_EQ(b.final_query.find(format_plan(test.gold)), std::string::npos);
}

TEST(Prompt, HashIsStableAndSensitive) {
  const PromptTemplate tmpl = parse_prompt_template(minimal_template());
  const auto ex = examples(2);
  const LevelSpec t1 = generate({FamilyBase::kBaseGoto, false}, 50);
  const LevelSpec t2 = generate({FamilyBase::kBaseGoto, false}, 51);
  EXPECT_EQ(build_prompt(tmpl, ex, t1, {}).hash(), build_prompt(tmpl, ex, t1, {}).hash());
  EXPECT_NE(build_prompt(tmpl, ex, t1, {}).hash(), build_prompt(tmpl, ex, t2, {}).hash());
  // Comments change the template hash but not what is sent.
  const PromptTemplate commented = parse_prompt_template("# v2\n" + minimal_template());
  EXPECT_EQ(build_prompt(tmpl, ex, t1, {}).hash(), build_prompt(commented, ex, t1, {}).hash());
  std::string reworded = minimal_template();
  reworded.replace(reworded.find("play"), 4, "solve");
  const PromptTemplate other = parse_prompt_template(reworded);
  EXPECT_NE(build_prompt(tmpl, ex, t1, {}).hash(), build_prompt(other, ex, t1, {}).hash());
}

TEST(Prompt, RejectsLeakageAndEmptyExamples) {
  const PromptTemplate tmpl = parse_prompt_template(minimal_template());
  const auto ex = examples(2);
  EXPECT_THROW(build_prompt(tmpl, ex, ex[1], {}), Error);
  EXPECT_THROW(build_prompt(tmpl, {}, ex[0], {}), Error);
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex(std::string_view("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const std::string hello = "hello";
  EXPECT_EQ(base64_encode({reinterpret_cast<const std::uint8_t*>(hello.data()), hello.size()}),
            "aGVsbG8=");
  EXPECT_EQ(base64_encode({}), "");
}

}  // namespace
}  // namespace rulegrid
