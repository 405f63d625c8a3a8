// Copyright 2026 The AAPDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aapda/trace_csv.hpp"

#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <string_view>

#include "aapda/error.hpp"
#include "aapda/format.hpp"

namespace aapda {
namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_double(*v);
}

void write_header_row(std::ostream& out, const char* axis) {
  out << axis;
  for (const char* c : kTraceColumns) out << ',' << c;
  out << '\n';
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

int CsvTable::find(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::optional<double>> CsvTable::column(const std::string& name) const {
  const int idx = find(name);
  if (idx < 0) throw Error(ErrorCode::kParse, "csv: no column named '" + name + "'");
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[static_cast<std::size_t>(idx)]);
  return out;
}

std::vector<std::string> trace_comments(const Trace& trace) {
  std::vector<std::string> lines;
  lines.push_back("solver: " + trace.header.solver);
  const ProblemDescriptor& d = trace.header.problem;
  lines.push_back("generator: " + d.generator);
  for (const auto& [key, value] : d.params) lines.push_back("param." + key + ": " + value);
  if (d.seed) lines.push_back("seed: " + std::to_string(*d.seed));
  for (const auto& [key, value] : trace.header.options) lines.push_back("option." + key + ": " + value);
  lines.push_back("stop: " + std::string(to_string(trace.stop)));
  lines.push_back("iterations: " + std::to_string(trace.iterations()));
  return lines;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  for (const std::string& c : trace_comments(trace)) out << "# " << c << '\n';
  write_header_row(out, "k");
  for (const TraceRecord& r : trace.records) {
    out << r.k << ',';
    put(out, r.mu);
    out << ',';
    put(out, r.gamma_next);
    out << ',';
    put(out, r.tau_next);
    out << ',' << format_double(r.grad_norm) << ',';
    put(out, r.f_gap);
    out << ',' << format_double(r.feas) << ',';
    put(out, r.pd_gap);
    out << ',';
    put(out, r.energy);
    out << ',';
    put(out, r.sub_stat);
    out << ",\n";
  }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj,
                          const std::vector<std::pair<std::string, std::string>>& header) {
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
  out << "# stop: " << to_string(traj.stop) << '\n';
  write_header_row(out, "t");
  for (const TrajectoryRow& r : traj.rows) {
    out << format_double(r.t) << ',' << format_double(r.mu) << ",," << format_double(r.tau) << ','
        << format_double(r.grad_norm) << ',';
    put(out, r.f_gap);
    out << ',' << format_double(r.feas) << ',';
    put(out, r.pd_gap);
    out << ',';
    put(out, r.energy);
    out << ",,\n";
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.emplace_back(trim(std::string_view(line).substr(1)));
      continue;
    }
    const auto fields = split_fields(line);
    if (table.columns.empty()) {
      for (auto f : fields) table.columns.emplace_back(trim(f));
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw Error(ErrorCode::kParse, "csv line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(table.columns.size()) + " fields, found " +
                                         std::to_string(fields.size()));
    }
    std::vector<std::optional<double>> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      const std::string_view token = trim(f);
      if (token.empty()) {
        row.emplace_back();
        continue;
      }
      auto v = parse_double(token);
      if (!v) {
        throw Error(ErrorCode::kParse, "csv line " + std::to_string(line_no) + ": not a number: '" +
                                           std::string(token) + "'");
      }
      row.emplace_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw Error(ErrorCode::kParse, "csv: missing header row");
  return table;
}

void validate_trace_schema(const CsvTable& table) {
  constexpr std::size_t kWidth = std::size(kTraceColumns) + 1;
  if (table.columns.size() != kWidth) {
    throw Error(ErrorCode::kParse, "trace schema: expected " + std::to_string(kWidth) + " columns, found " +
                                       std::to_string(table.columns.size()));
  }
  const std::string& axis = table.columns.front();
  if (axis != "k" && axis != "t") {
    throw Error(ErrorCode::kParse, "trace schema: first column must be 'k' or 't', found '" + axis + "'");
  }
  for (std::size_t i = 0; i + 1 < kWidth; ++i) {
    if (table.columns[i + 1] != kTraceColumns[i]) {
      throw Error(ErrorCode::kParse, "trace schema: column " + std::to_string(i + 2) + " must be '" +
                                         kTraceColumns[i] + "', found '" + table.columns[i + 1] + "'");
    }
  }
  const int grad = table.find("grad_norm");
  const int feas = table.find("feas");
  std::optional<double> prev;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (!row[0]) throw Error(ErrorCode::kParse, "trace schema: row " + std::to_string(r + 1) + " has no " + axis);
    if (prev && !(*row[0] > *prev)) {
      throw Error(ErrorCode::kParse, "trace schema: " + axis + " must increase strictly (row " +
                                         std::to_string(r + 1) + ")");
    }
    prev = row[0];
    if (!row[static_cast<std::size_t>(grad)] || !row[static_cast<std::size_t>(feas)]) {
      throw Error(ErrorCode::kParse, "trace schema: grad_norm and feas are required (row " +
                                         std::to_string(r + 1) + ")");
    }
  }
}

}  // namespace aapda
