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

#include "geoflow/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {
constexpr double kGeodesicStepScale = 0.25;
}  // namespace

Trajectory::Trajectory(Kind kind, int dim, std::shared_ptr<const DenseSolution> solution,
                       std::function<Vec(const Vec&)> field, FiniteDifference fd)
    : kind_(kind), dim_(dim), solution_(std::move(solution)), field_(std::move(field)), fd_(fd) {}

Trajectory Trajectory::from_flow(DenseSolution solution, std::function<Vec(const Vec&)> field,
                                 FiniteDifference fd) {
  const int dim = static_cast<int>(solution.states().front().size());
  return Trajectory(Kind::Flow, dim, std::make_shared<const DenseSolution>(std::move(solution)),
                    std::move(field), fd);
}

Trajectory Trajectory::from_geodesic(DenseSolution solution, int dim) {
  return Trajectory(Kind::Geodesic, dim, std::make_shared<const DenseSolution>(std::move(solution)),
                    {}, {});
}

std::vector<TrajectorySample> Trajectory::samples() const {
  std::vector<TrajectorySample> out;
  const auto& ts = solution_->times();
  const auto& ys = solution_->states();
  const auto& dys = solution_->derivatives();
  out.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (kind_ == Kind::Flow) {
      out.push_back({ts[i], ys[i], dys[i]});
    } else {
      out.push_back({ts[i], ys[i].head(dim_), ys[i].tail(dim_)});
    }
  }
  return out;
}

Vec Trajectory::position(double t) const {
  const Vec y = solution_->state(t);
  return kind_ == Kind::Flow ? y : Vec(y.head(dim_));
}

Vec Trajectory::velocity(double t) const {
  if (kind_ == Kind::Flow) return field_(position(t));
  return solution_->state(t).tail(dim_);
}

Vec Trajectory::acceleration(double t) const {
  if (kind_ == Kind::Geodesic) return solution_->state_derivative(t).tail(dim_);
  const Vec x = position(t);
  const Vec v = field_(x);
  const double speed = v.norm();
  if (speed == 0.0) return Vec::Zero(dim_);
  const Vec unit = v / speed;
  return speed * directional_derivative(field_, x, unit, fd_.step_at(x), fd_.order);
}

Vec covariant_acceleration(const AffineConnection& conn, const Trajectory& traj, double t) {
  const Vec v = traj.velocity(t);
  return traj.acceleration(t) + conn(traj.position(t)).contract(v, v);
}

Trajectory integrate_geodesic(const AffineConnection& conn, const Vec& x0, const Vec& v0,
                              double t_end, double tol, const GeodesicOptions& options) {
  const int n = conn.dim();
  if (x0.size() != n || v0.size() != n) throw InvalidArgument("geodesic start has wrong dimension");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (!conn.chart.contains(x0)) throw DomainError("geodesic start outside chart");

  auto rhs = [&conn, n](double, const Vec& y) -> Vec {
    const Vec x = y.head(n);
    const Vec v = y.tail(n);
    Vec out(2 * n);
    out.head(n) = v;
    out.tail(n) = -conn(x).contract(v, v);
    return out;
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.max_steps = options.max_steps;
  // The dense-output derivative errs like h^4; this cap keeps the
  // interpolated acceleration within a small multiple of tol.
  opt.max_step = kGeodesicStepScale * std::pow(tol, 0.25) / std::max(1.0, v0.lpNorm<Eigen::Infinity>());
  opt.admissible = [&conn, n](const Vec& y) { return conn.chart.contains(y.head(n)); };

  Vec y0(2 * n);
  y0 << x0, v0;
  DenseSolution sol = integrate_dopri5(rhs, 0.0, y0, t_end, opt);

  return Trajectory::from_geodesic(std::move(sol), n);
}

Trajectory integrate_flow(const MetricField& g, const ScalarPotential& f, const Vec& x0,
                          double t_end, double tol, const FlowOptions& options) {
  if (x0.size() != g.dim()) throw InvalidArgument("flow start has wrong dimension");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (!g.chart().contains(x0)) throw DomainError("flow start outside chart");

  std::function<Vec(const Vec&)> field = [g, f](const Vec& x) -> Vec {
    return -gradient(g, f, x);
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.max_steps = options.max_steps;
  const Chart chart = g.chart();
  opt.admissible = [chart](const Vec& x) { return chart.contains(x); };
  if (options.stop_gradient_below > 0.0) {
    const double threshold = options.stop_gradient_below;
    opt.stop = [&g, &field, threshold](double, const Vec& x) {
      return norm(g, x, field(x)) < threshold;
    };
  }

  DenseSolution sol = integrate_dopri5([&field](double, const Vec& x) { return field(x); }, 0.0,
                                       x0, t_end, opt);

  if (options.require_convergence && sol.termination() == Termination::Completed &&
      sol.t_end() > sol.t_begin()) {
    const double t1 = sol.t_end();
    const double t0 = t1 - 0.25 * (t1 - sol.t_begin());
    const Vec xa = sol.state(t0);
    const Vec xb = sol.state(t1);
    const double ga = norm(g, xa, field(xa));
    const double gb = norm(g, xb, field(xb));
    if (gb > options.converged_gradient && gb > ga * (1.0 + 1e-9)) {
      throw ConvergenceError("gradient norm failed to decrease over the final output window");
    }
  }
  return Trajectory::from_flow(std::move(sol), std::move(field), g.finite_difference());
}

}  // namespace geoflow
