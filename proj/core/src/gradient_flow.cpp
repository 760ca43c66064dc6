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

#include "geoflow/gradient_flow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Curve1Faster:
      return "curve1-faster";
    case Verdict::Curve2Faster:
      return "curve2-faster";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double AsymmetryReport::min_delta_f() const {
  return delta_f.empty() ? 0.0 : *std::min_element(delta_f.begin(), delta_f.end());
}

double AsymmetryReport::max_delta_f() const {
  return delta_f.empty() ? 0.0 : *std::max_element(delta_f.begin(), delta_f.end());
}

double AsymmetryReport::max_abs_delta_f() const {
  return std::max(std::abs(min_delta_f()), std::abs(max_delta_f()));
}

double AsymmetryReport::delta_f_at(const ScalarPotential& f, double t) const {
  if (!curve1 || !curve2) throw InvalidArgument("report carries no trajectories");
  return f(curve2->position(t)) - f(curve1->position(t));
}

namespace {

Vec seed_along(const MetricField& g, const ScalarPotential& f, double level,
               const Vec& direction) {
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw InvalidArgument("seed direction must be nonzero");
  const Vec d = direction / dn;
  const Vec& q = f.minimum();
  const Chart& chart = g.chart();
  auto at = [&](double s) -> Vec { return q + s * d; };
  // A potential that cannot be evaluated counts as outside the chart.
  auto inside = [&](double s) {
    if (!chart.contains(at(s))) return false;
    try {
      return std::isfinite(f(at(s)));
    } catch (const DomainError&) {
      return false;
    }
  };

  // Bracket f(q + s d) = level, staying inside the chart.
  double s_lo = 0.0;
  double s_hi = 1e-3 * std::max(1.0, q.norm());
  bool bracketed = false;
  for (int iter = 0; iter < 4000; ++iter) {
    if (!inside(s_hi)) {
      s_hi = s_lo + 0.5 * (s_hi - s_lo);
      if (s_hi - s_lo <= 1e-15 * std::max(1.0, s_lo)) break;
      continue;
    }
    if (f(at(s_hi)) >= level) {
      bracketed = true;
      break;
    }
    s_lo = s_hi;
    s_hi *= 2.0;
    if (s_hi > 1e15) break;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "level " << level << " is not crossed inside the chart along the seed direction";
    throw LevelUnreachableError(msg.str());
  }

  for (int iter = 0; iter < 200 && s_hi - s_lo > 1e-14 * std::max(1.0, s_hi); ++iter) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (f(at(mid)) >= level) {
      s_hi = mid;
    } else {
      s_lo = mid;
    }
  }
  // Newton polish inside the bracket.
  double s = 0.5 * (s_lo + s_hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double r = f(at(s)) - level;
    if (std::abs(r) < 1e-13 * std::max(1.0, std::abs(level))) break;
    const double slope = f.covector(at(s)).dot(d);
    if (slope == 0.0) break;
    const double next = s - r / slope;
    if (!(next >= s_lo && next <= s_hi)) break;
    s = next;
  }
  if (std::abs(f(at(s)) - level) >= 1e-10) {
    throw LevelUnreachableError("level-set polish did not reach |f - level| < 1e-10");
  }
  return at(s);
}

double speed(const MetricField& g, const Trajectory& traj, double t) {
  const Vec x = traj.position(t);
  return norm(g, x, traj.velocity(t));
}

}  // namespace

EquidistantPair equidistant_seed(const MetricField& g, const ScalarPotential& f, double level,
                                 const Vec& direction1, const Vec& direction2) {
  if (!(level > f.min_value())) {
    throw InvalidArgument("equidistant level must exceed the minimum value of the potential");
  }
  return EquidistantPair{seed_along(g, f, level, direction1), seed_along(g, f, level, direction2),
                         level};
}

AsymmetryReport compare(const MetricField& g, const ScalarPotential& f, double lambda,
                        const EquidistantPair& pair, const CompareOptions& options) {
  const bool concurrent = options.concurrent && thread_count() > 1;
  auto run_both = [&](double horizon, const FlowOptions& flow) {
    if (concurrent) {
      auto second = std::async(std::launch::async, [&] {
        return integrate_flow(g, f, pair.x2, horizon, options.tol, flow);
      });
      Trajectory first = integrate_flow(g, f, pair.x1, horizon, options.tol, flow);
      return std::make_pair(std::move(first), second.get());
    }
    Trajectory first = integrate_flow(g, f, pair.x1, horizon, options.tol, flow);
    Trajectory second = integrate_flow(g, f, pair.x2, horizon, options.tol, flow);
    return std::make_pair(std::move(first), std::move(second));
  };

  double horizon = 0.0;
  if (options.t_end) {
    horizon = *options.t_end;
  } else {
    FlowOptions probe;
    probe.stop_gradient_below = options.convergence_gradient;
    auto [a, b] = run_both(options.max_horizon, probe);
    horizon = std::max(a.t_end(), b.t_end());
    if (horizon <= 0.0) horizon = 1.0;
  }
  auto [c1, c2] = run_both(horizon, FlowOptions{});
  if (c1.exited_domain() || c2.exited_domain()) {
    throw DomainError("a gradient-descent curve left the chart before the horizon");
  }

  AsymmetryReport report;
  report.level = pair.level;
  report.t_end = horizon;

  std::vector<double> grid;
  for (double t : c1.solution().times()) grid.push_back(t);
  for (double t : c2.solution().times()) grid.push_back(t);
  const std::size_t n = std::max<std::size_t>(2, options.samples);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(horizon * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.back() > horizon) grid.pop_back();

  report.times = grid;
  report.f1.reserve(grid.size());
  report.f2.reserve(grid.size());
  report.delta_f.reserve(grid.size());
  std::vector<double> speed_gap;
  speed_gap.reserve(grid.size());
  for (double t : grid) {
    const double v1 = f(c1.position(t));
    const double v2 = f(c2.position(t));
    report.f1.push_back(v1);
    report.f2.push_back(v2);
    report.delta_f.push_back(v2 - v1);
    speed_gap.push_back(speed(g, c1, t) - speed(g, c2, t));
  }

  auto record = [&](double t) {
    Coincidence c;
    c.t = t;
    c.speed1 = speed(g, c1, t);
    c.speed2 = speed(g, c2, t);
    c.cubic1 = nonmetricity_cubic(g, lambda, c1, t);
    c.cubic2 = nonmetricity_cubic(g, lambda, c2, t);
    report.coincidences.push_back(c);
  };

  const double s1_0 = speed(g, c1, 0.0);
  const double s2_0 = speed(g, c2, 0.0);
  if (std::abs(s1_0 - s2_0) <= 1e-12 * std::max({s1_0, s2_0, 1e-300})) record(0.0);

  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double da = speed_gap[i - 1];
    const double db = speed_gap[i];
    if (!((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))) continue;
    double lo = grid[i - 1];
    double hi = grid[i];
    double dlo = da;
    while (hi - lo > options.time_tol) {
      const double mid = 0.5 * (lo + hi);
      const double dm = speed(g, c1, mid) - speed(g, c2, mid);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((dm < 0.0) == (dlo < 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    record(0.5 * (lo + hi));
  }

  const Vec end1 = c1.position(horizon);
  const Vec end2 = c2.position(horizon);
  report.converged = norm(g, end1, c1.velocity(horizon)) < options.convergence_gradient &&
                     norm(g, end2, c2.velocity(horizon)) < options.convergence_gradient;

  constexpr double kSlack = 1e-9;
  if (report.coincidences.empty()) {
    report.note = "speeds never coincide; criterion not applicable";
    report.verdict = Verdict::Inconclusive;
  } else {
    const bool all_pos = std::all_of(report.coincidences.begin(), report.coincidences.end(),
                                     [](const Coincidence& c) { return c.gap() > 0.0; });
    const bool all_neg = std::all_of(report.coincidences.begin(), report.coincidences.end(),
                                     [](const Coincidence& c) { return c.gap() < 0.0; });
    if (all_pos && report.min_delta_f() >= -kSlack) {
      report.verdict = Verdict::Curve1Faster;
    } else if (all_neg && report.max_delta_f() <= kSlack) {
      report.verdict = Verdict::Curve2Faster;
    } else {
      report.verdict = Verdict::Inconclusive;
      if (all_pos || all_neg) {
        report.note = "cubic gaps are one-signed but direct delta_f contradicts them";
      } else {
        report.note = "cubic gaps change sign or vanish";
      }
    }
  }
  report.curve1.emplace(std::move(c1));
  report.curve2.emplace(std::move(c2));
  return report;
}

bool metric_symmetry_check(const MetricField& g, const ScalarPotential& f,
                           const EquidistantPair& pair, const CompareOptions& options) {
  const AsymmetryReport report = compare(g, f, 0.0, pair, options);
  return report.max_abs_delta_f() < 1e-7 * pair.level;
}

Vec constrained_minimize(const MetricField& g, const ScalarPotential& f, const Submanifold& s,
                         const Vec& u0, double tol) {
  const FiniteDifference fd = g.finite_difference();
  Chart chart{s.dim, [g, s](const Vec& u) { return g.chart().contains(s.embed(u)); }};
  MetricField induced(chart, [g, s, fd](const Vec& u) -> Mat {
    const Mat jac = jacobian(s.embed, u, fd);
    return jac.transpose() * g(s.embed(u)) * jac;
  });
  ScalarPotential pulled(
      [f, s](const Vec& u) { return f(s.embed(u)); },
      [f, s, fd](const Vec& u) -> Vec {
        return jacobian(s.embed, u, fd).transpose() * f.covector(s.embed(u));
      },
      u0);
  FlowOptions flow;
  flow.stop_gradient_below = 1e-11;
  const Trajectory traj = integrate_flow(induced, pulled, u0, 1e6, tol, flow);
  return traj.position(traj.t_end());
}

}  // namespace geoflow
