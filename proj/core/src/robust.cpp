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

#include "neariso/robust.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neariso/error.hpp"
#include "neariso/kkt.hpp"
#include "neariso/prox.hpp"
#include "neariso/signal.hpp"

namespace neariso {

double SmoothLoss::value(double u) const {
  if (kind == Kind::squared || std::abs(u) <= delta) return 0.5 * u * u;
  return delta * (std::abs(u) - 0.5 * delta);
}

double SmoothLoss::derivative(double u) const {
  if (kind == Kind::squared || std::abs(u) <= delta) return u;
  return u > 0.0 ? delta : -delta;
}

SmoothLoss parse_loss(const std::string& text) {
  if (text == "squared") return SmoothLoss::squared();
  if (text == "huber") return SmoothLoss::huber(0.01);
  const std::string prefix = "huber:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    std::size_t used = 0;
    double delta = 0.0;
    try {
      delta = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && used > 0 && delta > 0.0 && std::isfinite(delta)) {
      return SmoothLoss::huber(delta);
    }
    throw InvalidArgument("huber threshold must be a positive number: " + text);
  }
  throw InvalidArgument("unknown loss '" + text +
                        "' (expected squared or huber:DELTA)");
}

double loss_value(const SmoothLoss& loss, std::span<const double> theta,
                  std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    total += loss.value(theta[i] - y[i]);
  }
  return total;
}

FitResult fista_fit(const WeightedDigraph& graph, std::span<const double> y,
                    double lambda, const SmoothLoss& loss,
                    const SolverConfig& config) {
  const std::size_t n = graph.num_nodes();
  if (y.size() != n) throw InvalidArgument("signal length does not match graph");
  require_finite(y, "signal");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  if (loss.kind == SmoothLoss::Kind::huber && !(loss.delta > 0.0)) {
    throw InvalidArgument("huber delta must be positive");
  }
  if (!(loss.lipschitz > 0.0)) throw InvalidArgument("lipschitz must be > 0");
  if (config.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");

  const double step = 1.0 / loss.lipschitz;
  auto objective = [&](std::span<const double> theta) {
    return loss_value(loss, theta, y) + lambda * penalty(graph, theta);
  };
  double y_scale = 0.0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  const double grad_bound = config.grad_tol * (1.0 + y_scale);

  ProxOptions prox_options;
  prox_options.certify = false;

  FitResult result;
  result.lambda = lambda;
  result.converged = false;
  std::vector<double> theta(y.begin(), y.end());
  std::vector<double> v = theta;
  std::vector<double> z(n);
  double obj = objective(theta);
  result.objective_history.push_back(obj);
  double t = 1.0;
  bool momentum = false;

  while (result.iterations < config.max_iter) {
    ++result.iterations;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = v[i] - step * loss.derivative(v[i] - y[i]);
    }
    std::vector<double> next = prox(graph, z, step * lambda, prox_options).theta_hat;
    const double obj_next = objective(next);

    if (config.restart && obj_next > obj) {
      if (momentum) {
        // Drop the momentum and retake the step from the current iterate.
        v = theta;
        t = 1.0;
        momentum = false;
        continue;
      }
      // A plain proximal step cannot increase the objective beyond rounding.
      result.converged = true;
      break;
    }

    double mapping = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mapping = std::max(mapping, std::abs(next[i] - v[i]));
    }
    const bool flat =
        std::abs(obj - obj_next) <= config.tol * std::max(1.0, std::abs(obj));

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = next[i] + beta * (next[i] - theta[i]);
    }
    momentum = beta != 0.0;
    t = t_next;
    theta = std::move(next);
    obj = obj_next;
    result.objective_history.push_back(obj);

    if (flat && mapping <= grad_bound) {
      result.converged = true;
      break;
    }
  }

  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = -loss.derivative(theta[i] - y[i]);
  result.kkt_residual = kkt_residual(graph, r, theta, lambda);
  result.df = static_cast<double>(constant_components(graph, theta));
  result.objective = obj;
  result.theta = std::move(theta);
  return result;
}

}  // namespace neariso
