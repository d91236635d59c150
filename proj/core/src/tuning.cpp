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

#include "neariso/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "neariso/error.hpp"
#include "neariso/graph.hpp"
#include "neariso/prox.hpp"

namespace neariso {

namespace {

// Relative window inside which two criterion values count as tied.
constexpr double kTieTol = 1e-12;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be positive and finite");
  }
}

void require_grid(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string(what) +
                            " must be finite and nonnegative");
    }
  }
}

// Sufficient statistics of a reference vector over a range.
struct RangeMoments {
  std::vector<long double> s1, s2;  // prefix sums of r and r^2

  explicit RangeMoments(std::span<const double> r)
      : s1(r.size() + 1, 0.0L), s2(r.size() + 1, 0.0L) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      s1[i + 1] = s1[i] + r[i];
      s2[i + 1] = s2[i] + static_cast<long double>(r[i]) * r[i];
    }
  }
};

}  // namespace

double sure(std::span<const double> y, std::span<const double> theta_hat,
            double sigma_hat, double group_tol) {
  if (y.size() != theta_hat.size()) {
    throw InvalidArgument("sure: y and theta_hat differ in length");
  }
  if (y.empty()) throw InvalidSignal("signal is empty");
  const double n = static_cast<double>(y.size());
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - theta_hat[i];
    rss += d * d;
  }
  const double k = static_cast<double>(count_pieces(theta_hat, group_tol));
  return rss / n + 2.0 * sigma_hat * sigma_hat * k / n;
}

std::size_t argmin_candidate(std::span<const TuningCandidate> candidates) {
  if (candidates.empty()) throw InvalidArgument("no tuning candidates");
  double best = candidates[0].criterion;
  for (const auto& c : candidates) best = std::min(best, c.criterion);
  const double window = best + kTieTol * std::max(1.0, std::abs(best));
  std::size_t chosen = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!(c.criterion <= window)) continue;
    if (chosen == candidates.size()) {
      chosen = i;
      continue;
    }
    const auto& b = candidates[chosen];
    const double cm = c.mu.value_or(0.0), bm = b.mu.value_or(0.0);
    if (c.lambda < b.lambda || (c.lambda == b.lambda && cm < bm)) chosen = i;
  }
  return chosen;
}

// The fit is affine in lambda between breakpoints, so the residual sum of
// squares is a quadratic whose coefficients are sums over alive nodes; nodes
// enter and leave the sum at their birth and death.
TuningReport sure_along_path(const SolutionPath& path,
                             std::span<const double> reference,
                             double sigma_hat) {
  require_sigma(sigma_hat);
  if (reference.size() != path.size()) {
    throw InvalidArgument("reference length does not match the path");
  }
  const RangeMoments moments(reference);
  const auto bps = path.breakpoints();
  const auto nodes = path.nodes();

  // Node ids ordered by birth and by death.
  std::vector<std::size_t> by_birth(nodes.size()), by_death(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) by_birth[i] = by_death[i] = i;
  std::sort(by_birth.begin(), by_birth.end(), [&](auto a, auto b) {
    return nodes[a].birth < nodes[b].birth;
  });
  std::sort(by_death.begin(), by_death.end(), [&](auto a, auto b) {
    return nodes[a].death < nodes[b].death;
  });

  long double c0 = 0.0L, c1 = 0.0L, c2 = 0.0L;
  long long alive = 0;
  auto apply = [&](std::size_t id, int sign) {
    const PathNode& node = nodes[id];
    const long double size = static_cast<long double>(node.range.size());
    const long double s1 =
        moments.s1[node.range.end] - moments.s1[node.range.begin];
    const long double s2 =
        moments.s2[node.range.end] - moments.s2[node.range.begin];
    const long double slope = node.slope;
    const long double a = node.value - slope * node.birth;
    c0 += sign * (s2 - 2.0L * s1 * a + size * a * a);
    c1 += sign * (2.0L * slope * (size * a - s1));
    c2 += sign * (size * slope * slope);
    alive += sign;
  };

  const double n = static_cast<double>(path.size());
  const double penalty_unit = 2.0 * sigma_hat * sigma_hat / n;
  TuningReport report;
  std::size_t born = 0, dead = 0;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double lambda = bps[i];
    while (dead < by_death.size() && nodes[by_death[dead]].death <= lambda) {
      apply(by_death[dead++], -1);
    }
    while (born < by_birth.size() && nodes[by_birth[born]].birth <= lambda) {
      const std::size_t id = by_birth[born++];
      // Zero-lifetime nodes never enter the sum.
      if (nodes[id].death > lambda) apply(id, +1);
    }
    auto add = [&](double at) {
      const long double l = at;
      const long double rss = std::max(0.0L, c0 + c1 * l + c2 * l * l);
      const double k = static_cast<double>(alive);
      report.candidates.push_back(
          {at, std::nullopt, static_cast<double>(rss / n) + penalty_unit * k, k});
    };
    add(lambda);
    if (i + 1 < bps.size()) add(0.5 * (lambda + bps[i + 1]));
  }
  report.chosen = argmin_candidate(report.candidates);
  return report;
}

TuningReport select_by_sure(std::span<const double> y, double sigma_hat,
                            SureEstimator estimator, const TuningGrid& grid) {
  require_sigma(sigma_hat);
  require_finite(y, "signal");
  if (y.empty()) throw InvalidSignal("signal is empty");
  if (estimator == SureEstimator::neariso) {
    const SolutionPath path = solve_path(y);
    if (grid.use_path_breakpoints) return sure_along_path(path, y, sigma_hat);
    if (grid.lambdas.empty()) throw InvalidArgument("lambda grid is empty");
    require_grid(grid.lambdas, "lambda grid");
    TuningReport report;
    for (double lambda : grid.lambdas) {
      const auto fit = path.evaluate(lambda);
      report.candidates.push_back({lambda, std::nullopt, sure(y, fit, sigma_hat),
                                   static_cast<double>(count_pieces(fit))});
    }
    report.chosen = argmin_candidate(report.candidates);
    return report;
  }

  if (grid.use_path_breakpoints || grid.lambdas.empty()) {
    throw InvalidArgument("fused lasso tuning needs an explicit lambda grid");
  }
  require_grid(grid.lambdas, "lambda grid");
  TuningReport report;
  for (double lambda : grid.lambdas) {
    const auto fit = fused_lasso(y, lambda);
    report.candidates.push_back({lambda, std::nullopt, sure(y, fit, sigma_hat),
                                 static_cast<double>(count_pieces(fit))});
  }
  report.chosen = argmin_candidate(report.candidates);
  return report;
}

std::vector<double> boundary_shift(std::span<const double> y, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("mu must be finite and >= 0");
  }
  std::vector<double> shifted(y.begin(), y.end());
  if (shifted.size() >= 2) {
    shifted.front() += mu;
    shifted.back() -= mu;
  }
  return shifted;
}

std::vector<double> boundary_corrected_fit(std::span<const double> y,
                                           double lambda, double mu) {
  const auto shifted = boundary_shift(y, mu);
  return solve_path(shifted).evaluate(lambda);
}

TuningReport select_boundary_corrected(std::span<const double> y,
                                       double sigma_hat,
                                       std::span<const double> mus) {
  require_sigma(sigma_hat);
  if (mus.empty()) throw InvalidArgument("mu grid is empty");
  require_grid(mus, "mu grid");
  TuningReport report;
  for (double mu : mus) {
    const SolutionPath path = solve_path(boundary_shift(y, mu));
    // Residuals are taken against the observed data, not the shifted copy.
    TuningReport part = sure_along_path(path, y, sigma_hat);
    for (auto& c : part.candidates) {
      c.mu = mu;
      report.candidates.push_back(c);
    }
  }
  report.chosen = argmin_candidate(report.candidates);
  return report;
}

TuningReport cross_validate(const Signal& signal,
                            std::span<const double> lambdas,
                            std::size_t folds) {
  validate(signal);
  if (!signal.design) throw InvalidSignal("cross-validation needs a design");
  const std::size_t n = signal.size();
  if (folds < 2 || 2 * folds > n) {
    throw InvalidArgument("folds must be between 2 and n/2");
  }
  if (lambdas.empty()) throw InvalidArgument("lambda grid is empty");
  require_grid(lambdas, "lambda grid");
  const auto& x = *signal.design;
  const auto& y = signal.values;

  std::vector<double> sq_error(lambdas.size(), 0.0);
  std::vector<double> pieces(lambdas.size(), 0.0);
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<std::size_t> train;
    std::vector<double> x_tr, y_tr;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % folds == fold) continue;
      train.push_back(i);
      x_tr.push_back(x[i]);
      y_tr.push_back(y[i]);
    }
    const auto weights = design_weights(x_tr);
    std::optional<SolutionPath> path;
    std::optional<WeightedDigraph> chain;
    if (validate_weights(weights)) {
      path = solve_path(y_tr, weights);
    } else {
      chain = build_chain(y_tr.size(), weights);
    }
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      ProxOptions options;
      options.certify = false;
      const auto fit = path ? path->evaluate(lambdas[l])
                            : prox(*chain, y_tr, lambdas[l], options).theta_hat;
      pieces[l] += static_cast<double>(count_pieces(fit));
      // Left-constant prediction from the nearest training point.
      std::size_t p = 0;
      for (std::size_t i = fold; i < n; i += folds) {
        while (p + 1 < train.size() && train[p + 1] < i) ++p;
        const double pred = train[p] < i ? fit[p] : fit.front();
        const double d = y[i] - pred;
        sq_error[l] += d * d;
      }
    }
  }

  TuningReport report;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    report.candidates.push_back({lambdas[l], std::nullopt,
                                 sq_error[l] / static_cast<double>(n),
                                 pieces[l] / static_cast<double>(folds)});
  }
  report.chosen = argmin_candidate(report.candidates);
  return report;
}

void write_csv(std::ostream& out, const TuningReport& report) {
  const auto old = out.precision(17);
  out << "lambda,mu,criterion,df\n";
  for (const auto& c : report.candidates) {
    out << c.lambda << ',';
    if (c.mu) out << *c.mu;
    out << ',' << c.criterion << ',' << c.df << '\n';
  }
  out.precision(old);
}

}  // namespace neariso
