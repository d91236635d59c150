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

#include "neariso/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "neariso/error.hpp"

namespace neariso {

double total_variation(std::span<const double> values) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    v += std::abs(values[i] - values[i + 1]);
  }
  return v;
}

double lower_total_variation(std::span<const double> values) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    v += std::max(values[i] - values[i + 1], 0.0);
  }
  return v;
}

namespace {

std::vector<IndexRange> constant_partition(std::span<const double> values,
                                           double group_tol) {
  std::vector<IndexRange> parts;
  if (values.empty()) return parts;
  double scale = value_range(values);
  if (scale == 0.0) scale = 1.0;
  const double tol = group_tol * scale;
  std::size_t begin = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i] - values[i - 1]) > tol) {
      parts.push_back({begin, i});
      begin = i;
    }
  }
  parts.push_back({begin, values.size()});
  return parts;
}

}  // namespace

std::size_t count_pieces(std::span<const double> values, double group_tol) {
  return constant_partition(values, group_tol).size();
}

PiecewiseSummary summarize(std::span<const double> values, double group_tol) {
  if (values.empty()) throw InvalidSignal("cannot summarize an empty vector");
  if (!(group_tol >= 0.0)) throw InvalidArgument("group_tol must be >= 0");
  require_finite(values, "summarize");

  PiecewiseSummary s;
  s.n = values.size();
  s.partition = constant_partition(values, group_tol);
  s.k = s.partition.size();
  s.values.reserve(s.k);
  for (const auto& part : s.partition) {
    double sum = 0.0;
    for (std::size_t i = part.begin; i < part.end; ++i) sum += values[i];
    s.values.push_back(part.size() == 1 ? values[part.begin]
                                        : sum / static_cast<double>(part.size()));
  }

  s.signs.assign(s.k + 1, 0);
  std::size_t descents = 0;
  for (std::size_t j = 1; j < s.k; ++j) {
    if (s.values[j - 1] > s.values[j]) {
      s.signs[j] = 1;
      ++descents;
    }
  }
  s.m_pieces = descents + 1;
  s.total_variation = total_variation(s.values);
  s.lower_total_variation = lower_total_variation(s.values);

  // M(theta) = sum_{j=2..k} max{1/|A_j|, k/n} 1{w_{j-1} != w_j}, 1-based.
  const double k_over_n = static_cast<double>(s.k) / static_cast<double>(s.n);
  for (std::size_t j = 1; j < s.k; ++j) {
    if (s.signs[j - 1] != s.signs[j]) {
      const double inv_len = 1.0 / static_cast<double>(s.partition[j].size());
      s.non_monotonicity += std::max(inv_len, k_over_n);
    }
  }
  return s;
}

std::vector<double> reconstruct(const PiecewiseSummary& summary) {
  std::vector<double> out(summary.n);
  for (std::size_t j = 0; j < summary.k; ++j) {
    const auto& part = summary.partition[j];
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(part.begin),
              out.begin() + static_cast<std::ptrdiff_t>(part.end),
              summary.values[j]);
  }
  return out;
}

bool check_moderate_growth(std::span<const double> segment) {
  const std::size_t n = segment.size();
  if (n < 2) throw PreconditionError("moderate growth needs length >= 2");
  require_finite(segment, "segment");
  for (std::size_t i = 1; i < n; ++i) {
    if (segment[i] < segment[i - 1]) {
      throw PreconditionError("moderate growth needs a nondecreasing segment");
    }
  }
  const double first = segment.front();
  const double variation = segment.back() - first;
  const double slack = 1e-12 * std::max(variation, std::abs(first));
  const std::size_t left_end = (n + 1) / 2;   // ceil(n/2), 1-based inclusive
  const std::size_t right_begin = n / 2 + 1;  // floor(n/2)+1, 1-based
  for (std::size_t i = 1; i <= n; ++i) {
    const double chord = first + static_cast<double>(i - 1) /
                                     static_cast<double>(n - 1) * variation;
    const double v = segment[i - 1];
    if (i <= left_end && v > chord + slack) return false;
    if (i >= right_begin && v < chord - slack) return false;
  }
  return true;
}

ConditionReport check_conditions(std::span<const double> values,
                                  double group_tol) {
  const PiecewiseSummary s = summarize(values, group_tol);
  ConditionReport report;

  // Maximal nondecreasing runs split at descents between constant pieces.
  std::size_t begin = 0;
  for (std::size_t j = 1; j < s.k; ++j) {
    if (s.signs[j] == 1) {
      report.segments.push_back({begin, s.partition[j].begin});
      begin = s.partition[j].begin;
    }
  }
  report.segments.push_back({begin, s.n});

  for (const auto& seg : report.segments) {
    if (seg.size() < 2) {
      report.moderate_growth.push_back(true);
      continue;
    }
    // Piece means may undershoot raw neighbours inside a tolerance group, so
    // test the reconstructed (exactly monotone) values.
    std::vector<double> piece(seg.size());
    for (std::size_t j = 0; j < s.k; ++j) {
      const auto& part = s.partition[j];
      for (std::size_t i = std::max(part.begin, seg.begin);
           i < std::min(part.end, seg.end); ++i) {
        piece[i - seg.begin] = s.values[j];
      }
    }
    report.moderate_growth.push_back(check_moderate_growth(piece));
  }

  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < s.k; ++i) {
    if (s.signs[i] != s.signs[i + 1]) {
      min_len = std::min(min_len, s.partition[i].size());
    }
  }
  report.min_length_constant =
      min_len == std::numeric_limits<std::size_t>::max()
          ? std::numeric_limits<double>::infinity()
          : static_cast<double>(min_len) * static_cast<double>(s.k) /
                static_cast<double>(s.n);
  return report;
}

LambdaBound lambda_star_bound(const PiecewiseSummary& summary,
                              double theta_norm, double sigma,
                              double constant) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(theta_norm >= 0.0)) throw InvalidArgument("theta_norm must be >= 0");
  if (summary.lower_total_variation <= 0.0) {
    return {std::numeric_limits<double>::infinity(), false};
  }
  const double n = static_cast<double>(summary.n);
  const double k = static_cast<double>(summary.k);

  double first = theta_norm / summary.lower_total_variation;
  double inv_len_sum = 0.0;
  for (std::size_t i = 0; i < summary.k; ++i) {
    if (summary.signs[i] != summary.signs[i + 1]) {
      inv_len_sum += 1.0 / static_cast<double>(summary.partition[i].size());
    }
  }
  double factor = first;
  if (inv_len_sum > 0.0) factor = std::min(first, 1.0 / std::sqrt(inv_len_sum));

  const double complexity = (k + n * summary.non_monotonicity / k) *
                            std::log(std::numbers::e * n / k);
  return {constant * sigma * factor * std::sqrt(complexity), true};
}

}  // namespace neariso
