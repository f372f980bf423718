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

#include "rulegrid/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <tuple>

#include "json.hpp"

namespace rulegrid {
namespace {

constexpr std::string_view kStdNote =
    "std: sample standard deviation over per-seed accuracies";

struct Tally {
  int correct = 0;
  int total = 0;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string accuracy_cell(const ReportRow& row) {
  std::string cell = format_accuracy(row.mean, row.std);
  if (row.single_unit) cell += " (single seed)";
  return cell;
}

}  // namespace

std::string_view to_string(GroupBy group_by) {
  return group_by == GroupBy::kModel ? "model" : "model-family";
}

std::optional<GroupBy> parse_group_by(std::string_view name) {
  if (name == "model") return GroupBy::kModel;
  if (name == "model-family") return GroupBy::kModelFamily;
  return std::nullopt;
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

EvalReport aggregate(std::span<const EvalRecord> records, GroupBy group_by) {
  if (records.empty()) throw EmptyInputError();
  // row key -> unit key -> tally
  using RowKey = std::pair<std::string, std::string>;
  using UnitKey = std::pair<std::string, std::uint64_t>;
  std::map<RowKey, std::map<UnitKey, Tally>> groups;
  for (const EvalRecord& r : records) {
    const RowKey row{r.model, group_by == GroupBy::kModel ? "" : r.family};
    Tally& t = groups[row][UnitKey{r.family, r.seed}];
    ++t.total;
    if (r.correct && !r.errored) ++t.correct;
  }
  EvalReport report;
  report.group_by = group_by;
  for (const auto& [key, units] : groups) {
    ReportRow row;
    row.model = key.first;
    row.family = key.second;
    for (const auto& [unit, tally] : units) {
      row.unit_accuracies.push_back(100.0 * tally.correct / tally.total);
      row.records += tally.total;
    }
    const auto n = static_cast<double>(row.unit_accuracies.size());
    row.mean = std::accumulate(row.unit_accuracies.begin(), row.unit_accuracies.end(), 0.0) / n;
    row.std = sample_std(row.unit_accuracies);
    row.single_unit = row.unit_accuracies.size() == 1;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value + 0.0);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string format_accuracy(double mean, double std) {
  return format_number(mean) + " ± " + format_number(std);
}

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::kTable:
      return "table";
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kLatex:
      return "latex";
  }
  return "?";
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  for (ReportFormat f : {ReportFormat::kTable, ReportFormat::kCsv,
                         ReportFormat::kJson, ReportFormat::kLatex}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  const bool by_family = report.group_by == GroupBy::kModelFamily;
  std::string out;
  switch (format) {
    case ReportFormat::kTable: {
      if (by_family) {
        out += "| Model | Family | Accuracy (mean ± std) |\n";
        out += "|---|---|---|\n";
      } else {
        out += "| Model | Accuracy (mean ± std) |\n";
        out += "|---|---|\n";
      }
      for (const ReportRow& row : report.rows) {
        out += "| " + row.model + " | ";
        if (by_family) out += row.family + " | ";
        out += accuracy_cell(row) + " |\n";
      }
      out += "\n";
      out += kStdNote;
      out += "\n";
      break;
    }
    case ReportFormat::kLatex: {
      out += by_family ? "\\begin{tabular}{llc}\n" : "\\begin{tabular}{lc}\n";
      out += "\\hline\n";
      out += by_family ? "\\textbf{Model} & \\textbf{Family} & "
                       : "\\textbf{Model} & ";
      out += "\\textbf{Accuracy (mean ± std)} \\\\\n";
      out += "\\hline\n";
      for (const ReportRow& row : report.rows) {
        out += row.model + " & ";
        if (by_family) out += row.family + " & ";
        out += accuracy_cell(row) + " \\\\\n";
      }
      out += "\\hline\n";
      out += "\\end{tabular}\n";
      break;
    }
    case ReportFormat::kCsv: {
      out += "model,family,units,records,mean,std,std_kind,single_seed\n";
      for (const ReportRow& row : report.rows) {
        out += csv_field(row.model) + "," + csv_field(row.family) + "," +
               std::to_string(row.unit_accuracies.size()) + "," +
               std::to_string(row.records) + "," + format_number(row.mean) + "," +
               format_number(row.std) + ",sample," +
               (row.single_unit ? "true" : "false") + "\n";
      }
      break;
    }
    case ReportFormat::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const ReportRow& row : report.rows) {
        rows.push_back({{"model", row.model},
                        {"family", row.family},
                        {"unit_accuracies", row.unit_accuracies},
                        {"records", row.records},
                        {"mean", row.mean},
                        {"std", row.std},
                        {"display", format_accuracy(row.mean, row.std)},
                        {"single_seed", row.single_unit}});
      }
      const nlohmann::json doc = {{"group_by", to_string(report.group_by)},
                                  {"std_kind", "sample"},
                                  {"rows", rows}};
      out = doc.dump(2) + "\n";
      break;
    }
  }
  return out;
}

}  // namespace rulegrid
