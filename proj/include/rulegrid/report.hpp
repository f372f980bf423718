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

#ifndef RULEGRID_REPORT_HPP_
#define RULEGRID_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulegrid/core.hpp"
#include "rulegrid/eval.hpp"

namespace rulegrid {

class EmptyInputError : public Error {
 public:
  EmptyInputError() : Error("no evaluation records to report") {}
};

// kModelFamily: one row per (model, test family); the units are seeds.
// kModel: one row per model; the units are (family, seed) pairs.
enum class GroupBy { kModelFamily, kModel };

std::string_view to_string(GroupBy group_by);
std::optional<GroupBy> parse_group_by(std::string_view name);

struct ReportRow {
  std::string model;
  std::string family;  // empty for GroupBy::kModel
  // Percent correct per unit, in unit order (family, then seed).
  std::vector<double> unit_accuracies;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single unit
  bool single_unit = false;
  int records = 0;
};

struct EvalReport {
  GroupBy group_by = GroupBy::kModelFamily;
  std::vector<ReportRow> rows;  // sorted by model, then family
};

// Errored and unparseable records count as incorrect. Throws
// EmptyInputError on no records.
EvalReport aggregate(std::span<const EvalRecord> records,
                     GroupBy group_by = GroupBy::kModelFamily);

double sample_std(std::span<const double> values);
double population_std(std::span<const double> values);

// Two decimals with trailing zeros dropped, keeping one: 20.0, 14.67.
std::string format_number(double value);
// `mean ± std`.
std::string format_accuracy(double mean, double std);

enum class ReportFormat { kTable, kCsv, kJson, kLatex };

std::string_view to_string(ReportFormat format);
std::optional<ReportFormat> parse_report_format(std::string_view name);

// kTable is a pipe table, kLatex a tabular block. Rows built from a single
// unit are marked `(single seed)` in the table formats and flagged in
// CSV/JSON.
std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace rulegrid

#endif  // RULEGRID_REPORT_HPP_
