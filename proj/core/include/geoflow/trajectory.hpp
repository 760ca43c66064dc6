// Copyright 2026 The geoflow Authors
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

// Time-sampled curves with dense output, and the two integrators that
// produce them: geodesics of an affine connection and gradient-descent flows.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "geoflow/manifold.hpp"
#include "geoflow/ode.hpp"

namespace geoflow {

struct TrajectorySample {
  double t;
  Vec x;
  Vec v;
};

/// Immutable curve t -> (x(t), v(t)) backed by a dense ODE solution.
class Trajectory {
 public:
  enum class Kind {
    /// First-order system x' = field(x); velocity is the field at x(t).
    Flow,
    /// Second-order system stored as (x, v).
    Geodesic,
  };

  static Trajectory from_flow(DenseSolution solution, std::function<Vec(const Vec&)> field,
                              FiniteDifference fd = {});
  static Trajectory from_geodesic(DenseSolution solution, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double t_begin() const { return solution_->t_begin(); }
  double t_end() const { return solution_->t_end(); }
  Termination termination() const { return solution_->termination(); }
  bool exited_domain() const { return termination() == Termination::DomainExit; }
  const DenseSolution& solution() const { return *solution_; }

  /// Accepted integrator nodes.
  std::vector<TrajectorySample> samples() const;

  Vec position(double t) const;
  Vec velocity(double t) const;
  /// Second derivative of the curve. Flows differentiate the generating
  /// field along v; geodesics differentiate the dense output.
  Vec acceleration(double t) const;

 private:
  Trajectory(Kind kind, int dim, std::shared_ptr<const DenseSolution> solution,
             std::function<Vec(const Vec&)> field, FiniteDifference fd);

  Kind kind_;
  int dim_;
  std::shared_ptr<const DenseSolution> solution_;
  std::function<Vec(const Vec&)> field_;
  FiniteDifference fd_;
};

/// x''^k + Gamma^k_ij x'^i x'^j along the trajectory.
Vec covariant_acceleration(const AffineConnection& conn, const Trajectory& traj, double t);

struct GeodesicOptions {
  std::size_t max_steps = 5'000'000;
};

/// Solves x''^k = -Gamma^k_ij x'^i x'^j. Leaving the chart (or the set where
/// the connection is defined) ends the curve early with exited_domain().
Trajectory integrate_geodesic(const AffineConnection& conn, const Vec& x0, const Vec& v0,
                              double t_end, double tol, const GeodesicOptions& options = {});

struct FlowOptions {
  /// Stop once |grad f|_g falls below this value (0 disables).
  double stop_gradient_below = 0.0;
  /// Throw ConvergenceError when |grad f|_g is still growing over the last
  /// quarter of the span and is above `converged_gradient`.
  bool require_convergence = false;
  double converged_gradient = 1e-6;
  std::size_t max_steps = 5'000'000;
};

/// Adaptive integration of x' = -grad f(x).
Trajectory integrate_flow(const MetricField& g, const ScalarPotential& f, const Vec& x0,
                          double t_end, double tol, const FlowOptions& options = {});

}  // namespace geoflow
