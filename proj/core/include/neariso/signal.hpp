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
#include <optional>
#include <span>
#include <vector>

namespace neariso {

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// An ordered sequence of observations with optional design points.
///
/// Values must be finite. When present, the design has the same length and
/// is strictly increasing. Use make_signal() to construct a validated value.
struct Signal {
  std::vector<double> values;
  std::optional<std::vector<double>> design;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

Signal make_signal(std::vector<double> values,
                   std::optional<std::vector<double>> design = std::nullopt);

/// Throws InvalidSignal unless `signal` satisfies the invariants above and is
/// nonempty.
void validate(const Signal& signal);

/// Throws InvalidSignal if any entry is NaN or infinite. `what` names the
/// argument in the message.
void require_finite(std::span<const double> values, const char* what);

/// max - min of the values; 0 for an empty span.
double value_range(std::span<const double> values);

}  // namespace neariso
