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

#include "json.hpp"
#include "rulegrid/report.hpp"

namespace rulegrid {
namespace {

EvalRecord rec(const std::string& model, const std::string& family,
               std::uint64_t seed, bool correct) {
  EvalRecord r;
  r.model = model;
  r.family = family;
  r.seed = seed;
  r.correct = correct;
  return r;
}

// `hits` correct out of `n` for each seed.
void add_seeds(std::vector<EvalRecord>& out, const std::string& model,
               const std::string& family, const std::vector<int>& hits, int n) {
  for (std::size_t s = 0; s < hits.size(); ++s) {
    for (int i = 0; i < n; ++i) out.push_back(rec(model, family, s, i < hits[s]));
  }
}

TEST(Stats, SampleAndPopulationStd) {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(population_std(v), 2.0);
  EXPECT_NEAR(sample_std(v), std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(sample_std(std::vector<double>{42.0}), 0.0);
}

TEST(Stats, NumberFormatting) {
  EXPECT_EQ(format_number(20.0), "20.0");
  EXPECT_EQ(format_number(100.0), "100.0");
  EXPECT_EQ(format_number(14.666666), "14.67");
  EXPECT_EQ(format_number(44.7213595), "44.72");
  EXPECT_EQ(format_number(12.5), "12.5");
  EXPECT_EQ(format_number(0.0), "0.0");
  EXPECT_EQ(format_accuracy(40.0, 0.0), "40.0 ± 0.0");
}

TEST(Aggregate, PerFamilyUnitsAreSeeds) {
  std::vector<EvalRecord> r;
  add_seeds(r, "m1", "base-goto", {5, 4, 3, 2, 1}, 5);
  add_seeds(r, "m1", "distractor-object", {0, 0, 0, 0, 0}, 5);
  add_seeds(r, "m0", "base-goto", {5}, 5);
  const EvalReport rep = aggregate(r);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].model, "m0");
  EXPECT_TRUE(rep.rows[0].single_unit);
  const ReportRow& row = rep.rows[1];
  EXPECT_EQ(row.family, "base-goto");
  EXPECT_EQ(row.unit_accuracies, (std::vector<double>{100, 80, 60, 40, 20}));
  EXPECT_DOUBLE_EQ(row.mean, 60.0);
  EXPECT_NEAR(row.std, std::sqrt(1000.0), 1e-9);  // sample std of 100..20 step 20
  EXPECT_EQ(row.records, 25);
  EXPECT_EQ(rep.rows[2].mean, 0.0);
}

TEST(Aggregate, PerModelUnitsAreFamilySeedPairs) {
  std::vector<EvalRecord> r;
  add_seeds(r, "m", "a", {5, 0}, 5);
  add_seeds(r, "m", "b", {0, 0}, 5);
  const EvalReport rep = aggregate(r, GroupBy::kModel);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_EQ(rep.rows[0].family, "");
  EXPECT_EQ(rep.rows[0].unit_accuracies, (std::vector<double>{100, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(rep.rows[0].mean, 25.0);
  EXPECT_DOUBLE_EQ(rep.rows[0].std, 50.0);
}

TEST(Aggregate, ErroredRecordsCountAsWrong) {
  std::vector<EvalRecord> r = {rec("m", "f", 0, true), rec("m", "f", 0, false)};
  r[1].errored = true;
  EXPECT_DOUBLE_EQ(aggregate(r).rows[0].mean, 50.0);
}

TEST(Aggregate, EmptyInputThrows) {
  EXPECT_THROW(aggregate({}), EmptyInputError);
}

TEST(Render, AllFormats) {
  std::vector<EvalRecord> r;
  add_seeds(r, "m", "base-goto", {5, 0}, 5);
  add_seeds(r, "solo", "base-goto", {1}, 5);
  const EvalReport rep = aggregate(r);
  EXPECT_EQ(render_report(rep, ReportFormat::kTable),
            "| Model | Family | Accuracy (mean ± std) |\n"
            "|---|---|---|\n"
            "| m | base-goto | 50.0 ± 70.71 |\n"
            "| solo | base-goto | 20.0 ± 0.0 (single seed) |\n"
            "\n"
            "std: sample standard deviation over per-seed accuracies\n");
  EXPECT_EQ(render_report(rep, ReportFormat::kCsv),
            "model,family,units,records,mean,std,std_kind,single_seed\n"
            "m,base-goto,2,10,50.0,70.71,sample,false\n"
            "solo,base-goto,1,5,20.0,0.0,sample,true\n");
  const auto doc = nlohmann::json::parse(render_report(rep, ReportFormat::kJson));
  EXPECT_EQ(doc["group_by"], "model-family");
  EXPECT_EQ(doc["rows"][0]["display"], "50.0 ± 70.71");
  EXPECT_EQ(doc["rows"][1]["single_seed"], true);
  const std::string latex = render_report(rep, ReportFormat::kLatex);
  EXPECT_NE(latex.find("\\begin{tabular}{llc}"), std::string::npos);
  EXPECT_NE(latex.find("m & base-goto & 50.0 ± 70.71 \\\\\n"), std::string::npos);
}

TEST(Render, FormatNames) {
  for (const char* n : {"table", "csv", "json", "latex"}) {
    ASSERT_TRUE(parse_report_format(n));
    EXPECT_EQ(to_string(*parse_report_format(n)), n);
  }
  EXPECT_FALSE(parse_report_format("xml"));
  EXPECT_EQ(parse_group_by("model"), GroupBy::kModel);
  EXPECT_FALSE(parse_group_by("family"));
}

}  // namespace
}  // namespace rulegrid
