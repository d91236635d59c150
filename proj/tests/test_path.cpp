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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "neariso/error.hpp"
#include "neariso/path.hpp"
#include "neariso/summary.hpp"
#include "oracles.hpp"

namespace neariso {
namespace {

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.05 * static_cast<double>(i) + noise(rng);
  return y;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Path, TwoPointsMergeAtHalfTheGap) {
  const std::vector<double> y{1.0, 0.0};
  const auto path = solve_path(y);
  ASSERT_EQ(path.breakpoints().size(), 2u);
  EXPECT_DOUBLE_EQ(path.breakpoints()[1], 0.5);
  EXPECT_EQ(eval_path(path, 0.25), (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(eval_path(path, 10.0), (std::vector<double>{0.5, 0.5}));
}

TEST(Path, ThreePointsSingleMerge) {
  const std::vector<double> y{2.0, 1.0, 3.0};
  const auto path = solve_path(y);
  ASSERT_EQ(path.breakpoints().size(), 2u);
  EXPECT_DOUBLE_EQ(path.breakpoints()[1], 0.5);
  const auto end = eval_path(path, path.terminal_lambda());
  EXPECT_DOUBLE_EQ(end[0], 1.5);
  EXPECT_DOUBLE_EQ(end[1], 1.5);
  EXPECT_DOUBLE_EQ(end[2], 3.0);
  const auto groups = path.state_at_breakpoint(1);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].range, (IndexRange{0, 2}));
}

TEST(Path, MonotoneSignalHasNoBreakpoints) {
  const std::vector<double> y{0.0, 0.0, 1.0, 2.5, 2.5, 7.0};
  const auto path = solve_path(y);
  EXPECT_EQ(path.breakpoints().size(), 1u);
  EXPECT_EQ(eval_path(path, 0.0), y);
  EXPECT_EQ(eval_path(path, 1e6), y);
}

TEST(Path, SingleObservation) {
  const std::vector<double> y{4.0};
  const auto path = solve_path(y);
  EXPECT_EQ(eval_path(path, 3.0), y);
}

TEST(Path, RejectsBadInput) {
  EXPECT_THROW(solve_path(std::vector<double>{}), InvalidSignal);
  EXPECT_THROW(solve_path(std::vector<double>{1.0, NAN}), InvalidSignal);
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(solve_path(y, std::vector<double>{1.0}), InvalidArgument);
  EXPECT_THROW(solve_path(y, std::vector<double>{1.0, -1.0}), InvalidWeights);
  EXPECT_THROW(solve_path(y, std::vector<double>{1.0, 0.0}), InvalidWeights);
  EXPECT_THROW(eval_path(solve_path(y), -1.0), InvalidArgument);
}

TEST(ValidateWeights, Examples) {
  EXPECT_TRUE(validate_weights(std::vector<double>{1, 1, 1, 1}));
  EXPECT_FALSE(validate_weights(std::vector<double>{1, 3, 1}));
  std::vector<double> root(10);
  for (std::size_t j = 0; j < root.size(); ++j) root[j] = std::sqrt(j + 1.0);
  EXPECT_TRUE(validate_weights(root));
  EXPECT_THROW(validate_weights(std::vector<double>{1, -2}), InvalidWeights);
}

TEST(ValidateWeights, ForceMarksPathHeuristic) {
  const std::vector<double> y{3, 0, 2, 1};
  const std::vector<double> w{1, 3, 1};
  EXPECT_THROW(solve_path(y, w), InvalidWeights);
  const auto path = solve_path(y, w, {.force = true});
  EXPECT_TRUE(path.heuristic());
  EXPECT_FALSE(solve_path(y).heuristic());
}

TEST(DesignWeights, InverseGaps) {
  const auto w = design_weights(std::vector<double>{0.0, 0.5, 2.0});
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[0], 2.0);
  EXPECT_DOUBLE_EQ(w[1], 1.0 / 1.5);
  EXPECT_THROW(design_weights(std::vector<double>{0.0, 0.0}), InvalidSignal);
}

TEST(Path, MatchesPatternEnumerationOnSmallSignals) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto y = random_signal(rng, n);
    const double lambda = lam(rng);
    const auto edges = oracle::chain_edges(n);
    const auto exact = oracle::neariso_by_patterns(n, edges, y, lambda);
    const auto fit = eval_path(solve_path(y), lambda);
    const double obj = oracle::objective(edges, y, fit, lambda);
    EXPECT_NEAR(obj, exact.objective, 1e-9 * (1 + std::abs(exact.objective)));
    EXPECT_LE(sup_diff(fit, exact.theta), 1e-7);
  }
}

TEST(Path, WeightedMatchesPatternEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto y = random_signal(rng, n);
    std::vector<double> w(n - 1);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::sqrt(j + 1.0);
    auto edges = oracle::chain_edges(n);
    for (std::size_t j = 0; j < edges.size(); ++j) edges[j].weight = w[j];
    const double lambda = lam(rng);
    const auto exact = oracle::neariso_by_patterns(n, edges, y, lambda);
    const auto fit = eval_path(solve_path(y, w), lambda);
    EXPECT_NEAR(oracle::objective(edges, y, fit, lambda), exact.objective,
                1e-9 * (1 + std::abs(exact.objective)));
  }
}

TEST(Path, EndpointsAreIdentityAndIsotonic) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const auto y = random_signal(rng, 1 + trial % 80);
    const auto path = solve_path(y);
    EXPECT_EQ(eval_path(path, 0.0), y);
    EXPECT_LE(sup_diff(eval_path(path, path.terminal_lambda() + 1.0), isotonic(y)),
              1e-10);
  }
}

TEST(Path, PartitionsCoarsenAndLowerVariationDecreases) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto y = random_signal(rng, 2 + trial % 60);
    const auto path = solve_path(y);
    const auto bps = path.breakpoints();
    for (std::size_t i = 1; i < bps.size(); ++i) EXPECT_LT(bps[i - 1], bps[i]);
    double prev_v = lower_total_variation(y);
    std::vector<IndexRange> prev;
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const auto groups = path.state_at_breakpoint(i);
      std::vector<IndexRange> ranges;
      for (const auto& g : groups) ranges.push_back(g.range);
      // Every new group is a union of previous groups.
      for (const auto& r : ranges) {
        for (const auto& p : prev) {
          const bool inside = p.begin >= r.begin && p.end <= r.end;
          const bool outside = p.end <= r.begin || p.begin >= r.end;
          EXPECT_TRUE(inside || outside);
        }
      }
      const double v = lower_total_variation(path.evaluate(bps[i]));
      EXPECT_LE(v, prev_v + 1e-12 * (1 + prev_v));
      prev_v = v;
      prev = std::move(ranges);
    }
  }
}

TEST(Path, PiecewiseLinearBetweenBreakpoints) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto y = random_signal(rng, 20);
    const auto path = solve_path(y);
    const auto bps = path.breakpoints();
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const auto a = path.evaluate(bps[i]);
      const auto b = path.evaluate(bps[i + 1]);
      const auto mid = path.evaluate(0.5 * (bps[i] + bps[i + 1]));
      for (std::size_t j = 0; j < y.size(); ++j) {
        EXPECT_NEAR(mid[j], 0.5 * (a[j] + b[j]), 1e-10);
      }
    }
  }
}

TEST(Isotonic, MatchesProjectionOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto y = random_signal(rng, n);
    const auto expected = oracle::project_bounded_monotone_qp(
        y, std::numeric_limits<double>::infinity());
    EXPECT_LE(sup_diff(isotonic(y), expected), 1e-10);
  }
  EXPECT_EQ(isotonic(std::vector<double>{3, 1, 2}),
            (std::vector<double>{2, 2, 2}));
}

TEST(Isotonic, ObservationWeights) {
  const auto fit = isotonic(std::vector<double>{1.0, 0.0}, std::vector<double>{3.0, 1.0});
  EXPECT_DOUBLE_EQ(fit[0], 0.75);
  EXPECT_DOUBLE_EQ(fit[1], 0.75);
}

TEST(Constrained, Examples) {
  const std::vector<double> y{1.0, 0.0};
  auto fit = solve_constrained(y, 0.0);
  EXPECT_NEAR(fit.theta[0], 0.5, 1e-12);
  EXPECT_NEAR(fit.theta[1], 0.5, 1e-12);
  EXPECT_NEAR(fit.lambda, 0.5, 1e-12);
  fit = solve_constrained(y, 0.5);
  EXPECT_NEAR(fit.theta[0], 0.75, 1e-12);
  EXPECT_NEAR(fit.theta[1], 0.25, 1e-12);
  EXPECT_NEAR(fit.lambda, 0.25, 1e-12);
  fit = solve_constrained(y, 2.0);
  EXPECT_EQ(fit.theta, y);
  EXPECT_EQ(fit.lambda, 0.0);
  EXPECT_THROW(solve_constrained(y, -1.0), InvalidArgument);
}

// The constrained fit attains its budget and is the penalized fit at the
// returned multiplier.
TEST(Constrained, LagrangianCorrespondence) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = random_signal(rng, 3 + trial % 30);
    const double v0 = lower_total_variation(y);
    if (v0 == 0.0) continue;
    const double budget = frac(rng) * v0;
    const auto fit = solve_constrained(y, budget);
    EXPECT_NEAR(lower_total_variation(fit.theta), budget, 1e-9 * (1 + v0));
    EXPECT_LE(sup_diff(fit.theta, eval_path(solve_path(y), fit.lambda)), 1e-9);
  }
}

}  // namespace
}  // namespace neariso
