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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neariso/signal.hpp"

namespace neariso {

/// Column selector: a header name or a 0-based index.
struct ColumnRef {
  std::optional<std::string> name;
  std::size_t index = 0;

  static ColumnRef by_index(std::size_t i) { return {std::nullopt, i}; }
  static ColumnRef by_name(std::string n) { return {std::move(n), 0}; }
};

struct CsvOptions {
  ColumnRef value_column = ColumnRef::by_index(0);
  // Explicit design column; row order (0, 1, 2, ...) when absent.
  std::optional<ColumnRef> time_column;
  bool drop_missing = true;
  char delimiter = ',';
};

/// True for the missing-value markers "", "NA", "NaN", "nan", "null", "NULL".
bool is_missing_marker(const std::string& field);

/// Reads one numeric column. A first row whose selected field is not numeric
/// is treated as a header. Rows with missing markers are dropped when
/// drop_missing is set; any other unparsable field throws InvalidArgument
/// naming the line. An empty result throws InvalidSignal.
Signal ingest_csv(std::istream& in, const CsvOptions& options = {});
Signal ingest_csv(const std::filesystem::path& path,
                  const CsvOptions& options = {});

}  // namespace neariso
