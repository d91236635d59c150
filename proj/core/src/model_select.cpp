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

#include "neariso/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "neariso/error.hpp"
#include "neariso/path.hpp"

namespace neariso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double spread(std::span<const double> theta) {
  return theta.empty() ? 0.0 : theta.back() - theta.front();
}

std::vector<double> shifted_isotonic(std::span<const double> y, double mu) {
  std::vector<double> shifted(y.begin(), y.end());
  shifted.front() += mu;
  shifted.back() -= mu;
  return isotonic(shifted);
}

struct SegmentFit {
  double cost = kInf;  // squared error plus the budget term of the penalty
  std::size_t j = 0;
  double budget = kInf;
  std::vector<double> theta;
};

}  // namespace

double sieve_budget(std::size_t j) {
  return std::pow(static_cast<double>(j), 1.5);
}

std::vector<std::size_t> PartitionChoice::boundaries() const {
  std::vector<std::size_t> starts;
  for (std::size_t i = 1; i < pieces.size(); ++i) starts.push_back(pieces[i].begin);
  return starts;
}

std::vector<double> project_bounded_monotone(std::span<const double> y,
                                             double budget) {
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be >= 0");
  require_finite(y, "segment");
  std::vector<double> iso = isotonic(y);
  if (y.size() < 2 || spread(iso) <= budget) return iso;
  if (budget == 0.0) {
    double mean = 0.0;
    for (double v : y) mean += v;
    return std::vector<double>(y.size(), mean / static_cast<double>(y.size()));
  }

  // The spread of the shifted isotonic fit is continuous and nonincreasing in
  // mu; bracket the crossing, bisect, then interpolate inside the bracket.
  const double range = value_range(y);
  double lo = 0.0, hi = range;
  std::vector<double> fit_lo = iso, fit_hi = shifted_isotonic(y, hi);
  while (spread(fit_hi) > budget) {
    lo = hi;
    fit_lo = std::move(fit_hi);
    hi *= 2.0;
    fit_hi = shifted_isotonic(y, hi);
  }
  const double tol = 1e-10 * range;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto fit = shifted_isotonic(y, mid);
    if (spread(fit) > budget) {
      lo = mid;
      fit_lo = std::move(fit);
    } else {
      hi = mid;
      fit_hi = std::move(fit);
    }
  }
  const double s_lo = spread(fit_lo), s_hi = spread(fit_hi);
  if (s_lo <= s_hi) return fit_hi;
  const double w = (s_lo - budget) / (s_lo - s_hi);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = fit_lo[i] + w * (fit_hi[i] - fit_lo[i]);
  }
  return out;
}

double model_select_penalty(std::span<const IndexRange> pieces,
                            std::span<const double> budgets, std::size_t n,
                            double sigma, double c_pen) {
  if (pieces.size() != budgets.size()) {
    throw InvalidArgument("one budget per piece is required");
  }
  const double m = static_cast<double>(pieces.size());
  double total = sigma * sigma * m *
                 std::log(std::numbers::e * static_cast<double>(n) / m);
  const double s43 = std::pow(sigma, 4.0 / 3.0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (std::isinf(budgets[i])) continue;
    total += s43 * std::cbrt(static_cast<double>(pieces[i].size())) *
             std::pow(budgets[i], 2.0 / 3.0);
  }
  return c_pen * total;
}

ModelSelectResult model_select(std::span<const double> y, double sigma,
                               const ModelSelectOptions& options) {
  const std::size_t n = y.size();
  if (n == 0) throw InvalidSignal("signal is empty");
  require_finite(y, "signal");
  if (n > options.n_cap) {
    throw PreconditionError("model selection enumerates 2^(n-1) partitions; n = " +
                            std::to_string(n) + " exceeds the cap " +
                            std::to_string(options.n_cap));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be positive and finite");
  }
  if (!(options.c_pen > 0.0) || !std::isfinite(options.c_pen)) {
    throw InvalidArgument("c_pen must be positive and finite");
  }

  std::size_t j_max = 1;
  const double range = value_range(y);
  while (sieve_budget(j_max) < range) ++j_max;
  const double s43 = std::pow(sigma, 4.0 / 3.0);

  // Best fit of every segment [b, e), indexed b * (n + 1) + e.
  std::vector<SegmentFit> segments((n + 1) * (n + 1));
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t e = b + 1; e <= n; ++e) {
      const auto seg = y.subspan(b, e - b);
      SegmentFit& best = segments[b * (n + 1) + e];
      if (!options.sieve) {
        best.theta = isotonic(seg);
        best.cost = squared_distance(seg, best.theta);
        continue;
      }
      for (std::size_t j = 1; j <= j_max; ++j) {
        const double v = sieve_budget(j);
        auto theta = project_bounded_monotone(seg, v);
        const double cost =
            squared_distance(seg, theta) +
            options.c_pen * s43 * std::cbrt(static_cast<double>(e - b)) *
                std::pow(v, 2.0 / 3.0);
        if (best.j == 0 ||
            cost < best.cost - 1e-10 * std::max(1.0, std::abs(best.cost))) {
          best = {cost, j, v, std::move(theta)};
        }
      }
    }
  }

  const double s2 = sigma * sigma;
  double best_total = kInf;
  std::vector<std::size_t> best_starts;  // starts of pieces, including 0
  std::vector<std::size_t> best_js;
  std::vector<std::size_t> starts;
  std::vector<std::size_t> js;
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    starts.assign(1, 0);
    for (std::size_t i = 1; i < n; ++i) {
      if (mask >> (i - 1) & 1) starts.push_back(i);
    }
    const double m = static_cast<double>(starts.size());
    double total = options.c_pen * s2 * m *
                   std::log(std::numbers::e * static_cast<double>(n) / m);
    js.clear();
    for (std::size_t p = 0; p < starts.size(); ++p) {
      const std::size_t e = p + 1 < starts.size() ? starts[p + 1] : n;
      const SegmentFit& seg = segments[starts[p] * (n + 1) + e];
      total += seg.cost;
      js.push_back(seg.j);
    }
    const double tol = 1e-10 * std::max(1.0, std::abs(best_total));
    bool take = best_starts.empty() || total < best_total - tol;
    if (!take && std::abs(total - best_total) <= tol) {
      // Fewer pieces, then lexicographic boundaries, then smaller budgets.
      if (starts.size() != best_starts.size()) {
        take = starts.size() < best_starts.size();
      } else if (starts != best_starts) {
        take = starts < best_starts;
      } else {
        take = js < best_js;
      }
    }
    if (take) {
      best_total = total;
      best_starts = starts;
      best_js = js;
    }
  }

  ModelSelectResult result;
  result.objective = best_total;
  result.fitted.reserve(n);
  for (std::size_t p = 0; p < best_starts.size(); ++p) {
    const std::size_t b = best_starts[p];
    const std::size_t e = p + 1 < best_starts.size() ? best_starts[p + 1] : n;
    const SegmentFit& seg = segments[b * (n + 1) + e];
    result.choice.pieces.push_back({b, e});
    result.choice.sieve_index.push_back(seg.j);
    result.choice.budgets.push_back(seg.budget);
    result.fitted.insert(result.fitted.end(), seg.theta.begin(), seg.theta.end());
  }
  return result;
}

}  // namespace neariso
