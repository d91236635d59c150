// Copyright 2026 The neariso Authors.
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

#include "neariso/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "neariso/error.hpp"

namespace neariso {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (e - b >= 2 && s[b] == '"' && s[e - 1] == '"') {
    ++b;
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    fields.push_back(trim(std::string_view(line).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::optional<double> parse_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>& header) {
  if (!ref.name) return ref.index;
  const auto it = std::find(header.begin(), header.end(), *ref.name);
  if (it == header.end()) {
    throw InvalidArgument("column '" + *ref.name + "' not found in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

bool is_missing_marker(const std::string& field) {
  std::string lower;
  for (char c : trim(field)) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return lower.empty() || lower == "na" || lower == "nan" || lower == "n/a" ||
         lower == "null" || lower == "none" || lower == "?" || lower == "-";
}

Signal ingest_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(split(line, options.delimiter));
    row_lines.push_back(lineno);
  }

  std::size_t first_data = 0;
  std::size_t value_col = options.value_column.index;
  std::optional<std::size_t> time_col;
  if (options.time_column) time_col = options.time_column->index;
  const bool named = options.value_column.name.has_value() ||
                     (options.time_column && options.time_column->name);
  if (!rows.empty()) {
    const auto& head = rows.front();
    bool header = named;
    if (!header && value_col < head.size()) {
      header = !parse_number(head[value_col]) && !is_missing_marker(head[value_col]);
    }
    if (header) {
      value_col = resolve(options.value_column, head);
      if (options.time_column) time_col = resolve(*options.time_column, head);
      first_data = 1;
    }
  }

  std::vector<double> values, design;
  std::size_t data_row = 0;
  for (std::size_t r = first_data; r < rows.size(); ++r, ++data_row) {
    const auto& fields = rows[r];
    const std::string where = "line " + std::to_string(row_lines[r]);
    auto cell = [&](std::size_t col) -> std::string {
      return col < fields.size() ? fields[col] : std::string();
    };
    auto read = [&](std::size_t col, const char* what) -> std::optional<double> {
      const std::string f = cell(col);
      if (auto v = parse_number(f)) return v;
      if (!is_missing_marker(f)) {
        throw InvalidSignal(where + ": cannot parse " + what + " '" + f + "'");
      }
      if (!options.drop_missing) {
        throw InvalidSignal(where + ": missing " + what);
      }
      return std::nullopt;
    };
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (blank && options.drop_missing) continue;
    const auto v = read(value_col, "value");
    const auto t = time_col ? read(*time_col, "time")
                            : std::optional<double>(static_cast<double>(data_row));
    if (!v || !t) continue;
    values.push_back(*v);
    design.push_back(*t);
  }
  if (values.empty()) throw InvalidSignal("no numeric values in input");
  return make_signal(std::move(values), std::move(design));
}

Signal ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return ingest_csv(in, options);
}

}  // namespace neariso
