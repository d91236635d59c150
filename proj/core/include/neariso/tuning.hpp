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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "neariso/path.hpp"
#include "neariso/signal.hpp"
#include "neariso/summary.hpp"

namespace neariso {

/// Candidate tuning parameters. With use_path_breakpoints the lambda list is
/// ignored and the neariso path breakpoints plus segment midpoints are used.
struct TuningGrid {
  std::vector<double> lambdas;
  std::vector<double> mus;
  bool use_path_breakpoints = false;

  static TuningGrid path_breakpoints() { return {{}, {}, true}; }
};

struct TuningCandidate {
  double lambda = 0.0;
  std::optional<double> mu;
  double criterion = 0.0;
  double df = 0.0;
};

struct TuningReport {
  std::vector<TuningCandidate> candidates;
  std::size_t chosen = 0;

  const TuningCandidate& best() const { return candidates.at(chosen); }
};

enum class SureEstimator { neariso, fused };

/// (1/n)|y - theta_hat|^2 + (2 sigma^2 / n) k(theta_hat). The constant term
/// of the risk estimate is dropped; it does not move the argmin.
double sure(std::span<const double> y, std::span<const double> theta_hat,
            double sigma_hat, double group_tol = kDefaultGroupTol);

/// SURE at every breakpoint and segment midpoint of `path`, measuring the
/// residual against `reference` (normally the data the path was built on).
TuningReport sure_along_path(const SolutionPath& path,
                             std::span<const double> reference,
                             double sigma_hat);

TuningReport select_by_sure(std::span<const double> y, double sigma_hat,
                            SureEstimator estimator, const TuningGrid& grid);

/// y with mu added to the first entry and subtracted from the last.
std::vector<double> boundary_shift(std::span<const double> y, double mu);

/// Nearly-isotonic fit with the extra term mu (theta_n - theta_1), computed
/// as the ordinary fit of boundary_shift(y, mu). For n < 2 mu is ignored.
std::vector<double> boundary_corrected_fit(std::span<const double> y,
                                           double lambda, double mu);

/// SURE over the product of the path grid of each shifted signal and `mus`.
TuningReport select_boundary_corrected(std::span<const double> y,
                                       double sigma_hat,
                                       std::span<const double> mus);

/// K-fold cross-validation under the design-point model. Fold f holds out
/// indices i with i mod K == f; held-out points are predicted by the fitted
/// value at the nearest training point on the left (the first training value
/// for points left of all training points).
TuningReport cross_validate(const Signal& signal,
                            std::span<const double> lambdas,
                            std::size_t folds);

/// Chooses the minimum criterion; ties go to the smaller lambda, then mu.
std::size_t argmin_candidate(std::span<const TuningCandidate> candidates);

/// CSV with columns lambda,mu,criterion,df (mu empty when unused).
void write_csv(std::ostream& out, const TuningReport& report);

}  // namespace neariso
