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

#include "neariso/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neariso/error.hpp"

namespace neariso {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidSignal(std::string(what) + ": non-finite value at index " +
                          std::to_string(i));
    }
  }
}

void validate(const Signal& signal) {
  if (signal.values.empty()) throw InvalidSignal("signal is empty");
  require_finite(signal.values, "signal");
  if (!signal.design) return;
  const auto& x = *signal.design;
  if (x.size() != signal.values.size()) {
    throw InvalidSignal("design length " + std::to_string(x.size()) +
                        " differs from signal length " +
                        std::to_string(signal.values.size()));
  }
  require_finite(x, "design");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i - 1] < x[i])) {
      throw InvalidSignal("design is not strictly increasing at index " +
                          std::to_string(i));
    }
  }
}

Signal make_signal(std::vector<double> values,
                   std::optional<std::vector<double>> design) {
  Signal s{std::move(values), std::move(design)};
  validate(s);
  return s;
}

double value_range(std::span<const double> values) {
  if (values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace neariso
