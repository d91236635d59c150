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
#include <span>
#include <vector>

#include "neariso/signal.hpp"

namespace neariso {

inline constexpr double kDefaultGroupTol = 1e-9;

/// Piecewise-constant description of a vector and its monotonicity statistics.
///
/// `signs` has k + 1 entries; signs[0] and signs[k] are always 0 and
/// signs[j] (1 <= j < k) is 1 iff values[j-1] > values[j], i.e. the knot
/// opening piece j is a descent.
struct PiecewiseSummary {
  std::size_t n = 0;
  std::vector<IndexRange> partition;
  std::vector<double> values;
  std::vector<int> signs;
  std::size_t k = 0;
  std::size_t m_pieces = 0;  // minimal number of nondecreasing pieces
  double total_variation = 0.0;
  double lower_total_variation = 0.0;
  double non_monotonicity = 0.0;  // M(theta)
};

/// Groups adjacent entries whose difference is at most
/// group_tol * (max - min) (scale 1 for a constant vector) and computes the
/// knot signs, k, m, V, V_- and M.
PiecewiseSummary summarize(std::span<const double> values,
                           double group_tol = kDefaultGroupTol);

/// Expands a summary back into a length-n vector.
std::vector<double> reconstruct(const PiecewiseSummary& summary);

double total_variation(std::span<const double> values);

/// Sum of positive drops, sum_i (v_i - v_{i+1})_+.
double lower_total_variation(std::span<const double> values);

/// Number of entries in the constant partition (convenience for df counts).
std::size_t count_pieces(std::span<const double> values,
                         double group_tol = kDefaultGroupTol);

/// Checks the moderate growth condition on a nondecreasing segment of length
/// n >= 2: entries of the left half lie on or below the chord from the first
/// entry with slope V/(n-1), entries of the right half on or above it. The
/// left half is i <= ceil(n/2), the right half i >= floor(n/2) + 1 (1-based).
/// Throws PreconditionError for non-monotone or too short input.
bool check_moderate_growth(std::span<const double> segment);

struct ConditionReport {
  std::vector<IndexRange> segments;   // maximal nondecreasing runs
  std::vector<bool> moderate_growth;  // per segment; length-1 runs pass
  // Largest c with min{|A_i| : w_i != w_{i+1}} >= c n / k. Infinite when no
  // piece carries a sign change.
  double min_length_constant = 0.0;
};

ConditionReport check_conditions(std::span<const double> values,
                                 double group_tol = kDefaultGroupTol);

struct LambdaBound {
  double value = 0.0;
  bool finite = false;  // false: theta is monotone and the penalty never binds
};

/// Upper bound on the theoretical tuning parameter
///   C sigma min{|theta|_2 / V_-, (sum_i 1{w_i != w_{i+1}} / |A_i|)^{-1/2}}
///     * sqrt((k + n M / k) log(e n / k)).
LambdaBound lambda_star_bound(const PiecewiseSummary& summary,
                              double theta_norm, double sigma,
                              double constant = 1.0);

}  // namespace neariso
