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

#include <span>

#include "neariso/graph.hpp"

namespace neariso {

/// Dual certificate for
///   minimize L(theta) + lambda sum c_(i,j) (theta_i - theta_j)_+
/// at `theta`, given r = -grad L(theta) (r = y - theta for squared loss).
///
/// Looks for edge duals z_e in [0, lambda c_e] with z_e = lambda c_e on strict
/// violations, z_e = 0 on strict ascents and r_i = sum_{out} z - sum_{in} z,
/// treating edges with |theta_i - theta_j| <= tie_tol as tied. Returns the
/// unmet demand of the best such z (0 for an exact certificate).
double kkt_residual(const WeightedDigraph& graph, std::span<const double> r,
                    std::span<const double> theta, double lambda,
                    double tie_tol);

/// Same with the default tie tolerance 1e-9 (1 + |theta|_inf).
double kkt_residual(const WeightedDigraph& graph, std::span<const double> r,
                    std::span<const double> theta, double lambda);

}  // namespace neariso
