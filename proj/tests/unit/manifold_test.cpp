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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "geoflow/errors.hpp"
#include "geoflow/gaussian_chain.hpp"
#include "geoflow/manifold.hpp"
#include "geoflow/models.hpp"
#include "geoflow/trajectory.hpp"
#include "test_support.hpp"

namespace geoflow {
namespace {

using testing::rel_err;
using testing::Sampler;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MetricField constant_metric(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  return MetricField(Chart::euclidean(n), [m](const Vec&) { return m; });
}

TEST(MetricInverse, IdentityMetric) {
  const MetricField g = MetricField::euclidean(3);
  EXPECT_TRUE(metric_inverse(g, vec({0.3, -2.0, 5.0})).isApprox(Mat::Identity(3, 3), 1e-15));
}

TEST(MetricInverse, SingleModeFisherBlock) {
  const MetricField g = chain::mode_metric();
  const Mat inv = metric_inverse(g, vec({2.0}));
  EXPECT_NEAR(inv(0, 0), 8.0, 1e-14);
}

TEST(MetricInverse, Diagonal) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 0.5;
  const Mat inv = metric_inverse(constant_metric(m), vec({0.0, 0.0}));
  EXPECT_NEAR(inv(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(inv(1, 1), 2.0, 1e-15);
  EXPECT_NEAR(inv(0, 1), 0.0, 1e-15);
}

TEST(MetricInverse, ProductIsIdentityOnRandomSpdMatrices) {
  Sampler rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat a = Mat::NullaryExpr(4, 4, [&] { return rng.uniform(-1.0, 1.0); });
    const Mat spd = a * a.transpose() + 0.1 * Mat::Identity(4, 4);
    const Mat inv = metric_inverse(constant_metric(spd), Vec::Zero(4));
    EXPECT_LT((inv * spd - Mat::Identity(4, 4)).norm(), 1e-10);
  }
}

TEST(MetricInverse, IllConditionedMetricIsSingular) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = 1e-13;
  EXPECT_THROW(metric_inverse(constant_metric(m), Vec::Zero(2)), SingularMatrixError);
}

TEST(MetricField, PositiveDefinitenessIsCheckedOnDemand) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = -1.0;
  const MetricField g = constant_metric(m);
  EXPECT_THROW(g.check_positive_definite(Vec::Zero(2)), DomainError);
  EXPECT_NO_THROW(models::sphere_metric().check_positive_definite(vec({1.0, 0.0})));
}

TEST(MetricField, EvaluationOutsideChartThrows) {
  EXPECT_THROW(models::sphere_metric()(vec({-0.1, 0.0})), DomainError);
  EXPECT_THROW(chain::mode_metric()(vec({0.0})), DomainError);
}

TEST(Gradient, EuclideanQuadratic) {
  const Vec grad = gradient(MetricField::euclidean(2), models::euclidean_quadratic(), vec({1.0, 0.0}));
  EXPECT_NEAR(grad(0), 1.0, 1e-15);
  EXPECT_NEAR(grad(1), 0.0, 1e-15);
}

TEST(Gradient, FisherGradientOfModePotential) {
  // Symbolic oracle: 2 a^2 * lambda (a - a*) / a^2 = 2 lambda (a - a*).
  for (double lambda : {0.5, 2.0, 3.7}) {
    const ScalarPotential f = chain::mode_potential(lambda);
    const double a_star = 2.0 / lambda;
    for (double a : {0.3, 1.0, 2.5, 9.0}) {
      const Vec grad = gradient(chain::mode_metric(), f, vec({a}));
      EXPECT_LT(rel_err(grad(0), 2.0 * lambda * (a - a_star)), 1e-12) << lambda << " " << a;
    }
  }
}

TEST(Gradient, VanishesAtMinimum) {
  const ScalarPotential f = chain::mode_potential(2.0);
  EXPECT_EQ(gradient(chain::mode_metric(), f, f.minimum()).norm(), 0.0);
  const ScalarPotential h = models::distance_squared(vec({0.4, -1.0}));
  EXPECT_EQ(gradient(MetricField::euclidean(2), h, h.minimum()).norm(), 0.0);
}

TEST(Gradient, FiniteDifferenceCovectorMatchesAnalytic) {
  const ScalarPotential analytic = models::sphere_height();
  const ScalarPotential numeric([](const Vec& x) { return std::cos(x(0)); }, analytic.minimum());
  const Vec x = vec({0.8, 0.3});
  EXPECT_LT((numeric.covector(x) - analytic.covector(x)).norm(), 1e-10);
}

// g(grad f, w) = df(w) for randomized (x, w); 100 pairs per fixture.
TEST(GradientProperty, DualityOnFixtures) {
  Sampler rng(2024);
  const chain::ModeSpectrum s = chain::spectrum(3);
  struct Case {
    MetricField g;
    ScalarPotential f;
    double lo, hi;
  };
  const std::vector<Case> cases = {
      {MetricField::euclidean(2), models::euclidean_quadratic(), -3.0, 3.0},
      {models::sphere_metric(), models::sphere_height(), 0.2, 2.9},
      {chain::chain_metric(s), chain::chain_potential(s), 0.2, 4.0},
  };
  for (const auto& c : cases) {
    for (int i = 0; i < 100; ++i) {
      const Vec x = rng.uniform_vec(c.g.dim(), c.lo, c.hi);
      const Vec w = rng.normal_vec(c.g.dim());
      const double lhs = inner(c.g, x, gradient(c.g, c.f, x), w);
      const double rhs = c.f.covector(x).dot(w);
      EXPECT_LE(std::abs(lhs - rhs), 1e-8 * std::max(std::abs(rhs), 1e-12) + 1e-14);
    }
  }
}

TEST(LeviCivita, EuclideanIsZero) {
  EXPECT_EQ(christoffel_levi_civita(MetricField::euclidean(3), vec({1.0, 2.0, 3.0})).max_abs(), 0.0);
}

TEST(LeviCivita, SingleModeFisherMetric) {
  for (double a : {0.5, 1.0, 3.0}) {
    const ChristoffelSymbols gamma = christoffel_levi_civita(chain::mode_metric(), vec({a}));
    EXPECT_LT(rel_err(gamma(0, 0, 0), -1.0 / a), 1e-14);
    // Finite-difference oracle: 1/2 g^{-1} dg with a central difference of g.
    const double h = 1e-5;
    const double dg = (chain::fisher_block(a + h) - chain::fisher_block(a - h)) / (2 * h);
    EXPECT_LT(rel_err(0.5 * dg / chain::fisher_block(a), -1.0 / a), 1e-8);
  }
}

TEST(LeviCivita, RoundSphere) {
  const Vec x = vec({std::numbers::pi / 4, 0.0});
  const ChristoffelSymbols analytic = christoffel_levi_civita(models::sphere_metric(), x);
  EXPECT_NEAR(analytic(0, 1, 1), -0.5, 1e-15);
  EXPECT_NEAR(analytic(1, 0, 1), 1.0, 1e-14);  // cot(pi/4)
  const ChristoffelSymbols numeric =
      christoffel_levi_civita(models::sphere_metric().with_finite_differences({}), x);
  EXPECT_LT((numeric - analytic).max_abs(), 1e-9);
  EXPECT_EQ(analytic.asymmetry(), 0.0);
}

// Halving h shrinks the analytic/finite-difference discrepancy by >= 3.5x.
TEST(LeviCivita, FiniteDifferenceConvergesWithStep) {
  const Vec x = vec({0.9, 0.4});
  const ChristoffelSymbols exact = christoffel_levi_civita(models::sphere_metric(), x);
  for (int order : {2, 4}) {
    double previous = 0.0;
    for (double h : {0.1, 0.05, 0.025}) {
      FiniteDifference fd{order, h};
      const double err =
          (christoffel_levi_civita(models::sphere_metric().with_finite_differences(fd), x) - exact)
              .max_abs();
      if (previous > 0.0) EXPECT_GE(previous / err, 3.5) << "order " << order << " h " << h;
      previous = err;
    }
  }
}

TEST(FiniteDifference, StepTooSmallIsDetected) {
  FiniteDifference tiny{4, 1e-14};
  EXPECT_TRUE(tiny.step_too_small(vec({100.0})));
  EXPECT_FALSE(FiniteDifference{}.step_too_small(vec({100.0})));
}

// d/dt g(V,W) = g(nabla V, W) + g(V, nabla W) along straight chart curves.
TEST(LeviCivitaProperty, MetricCompatibility) {
  Sampler rng(7);
  const chain::ModeSpectrum s = chain::spectrum(3);
  const std::vector<std::pair<MetricField, std::pair<double, double>>> cases = {
      {models::sphere_metric(), {0.4, 2.7}},
      {chain::chain_metric(s), {0.5, 3.0}},
      {chain::mode_metric_with_mean(), {0.5, 3.0}},
  };
  for (const auto& [g, range] : cases) {
    const int n = g.dim();
    const AffineConnection conn = levi_civita(g);
    for (int trial = 0; trial < 20; ++trial) {
      const Mat a = Mat::NullaryExpr(n, n, [&] { return rng.uniform(-1.0, 1.0); });
      const Mat b = Mat::NullaryExpr(n, n, [&] { return rng.uniform(-1.0, 1.0); });
      const Vec c = rng.normal_vec(n);
      auto vfield = [a, c](const Vec& x) -> Vec { return a * x.array().sin().matrix() + c; };
      auto wfield = [b](const Vec& x) -> Vec { return b * x + x.array().square().matrix(); };
      const Vec x = rng.uniform_vec(n, range.first, range.second);
      const Vec u = rng.normal_vec(n);
      auto pairing = [&](const Vec& p) { return inner(g, p, vfield(p), wfield(p)); };
      const double lhs = directional_derivative(pairing, x, u, 1e-4);
      const double rhs = inner(g, x, covariant_derivative(conn, vfield, x, u), wfield(x)) +
                         inner(g, x, vfield(x), covariant_derivative(conn, wfield, x, u));
      EXPECT_LE(std::abs(lhs - rhs), 1e-6 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(CovariantAcceleration, StraightLineUnderZeroConnection) {
  const AffineConnection flat = flat_connection(Chart::euclidean(2));
  const Trajectory line = integrate_geodesic(flat, vec({0.0, 0.0}), vec({1.0, 2.0}), 1.0, 1e-10);
  EXPECT_LT(covariant_acceleration(flat, line, 0.37).norm(), 1e-12);
}

TEST(CovariantAcceleration, EuclideanGradientCurve) {
  // gamma(t) = e^{-t} (1, 0): acceleration equals gamma.
  const MetricField g = MetricField::euclidean(2);
  const Trajectory traj =
      integrate_flow(g, models::euclidean_quadratic(), vec({1.0, 0.0}), 2.0, 1e-12);
  const Vec acc0 = covariant_acceleration(levi_civita(g), traj, 0.0);
  EXPECT_NEAR(acc0(0), 1.0, 1e-9);
  EXPECT_NEAR(acc0(1), 0.0, 1e-12);
  const Vec acc1 = covariant_acceleration(levi_civita(g), traj, 1.3);
  EXPECT_NEAR(acc1(0), std::exp(-1.3), 1e-8);
}

TEST(CovariantAcceleration, OutOfSpanThrows) {
  const Trajectory traj = integrate_flow(MetricField::euclidean(2), models::euclidean_quadratic(),
                                         vec({1.0, 0.0}), 1.0, 1e-10);
  EXPECT_THROW(covariant_acceleration(levi_civita(MetricField::euclidean(2)), traj, 1.5),
               OutOfSpanError);
  EXPECT_THROW(traj.position(-0.1), OutOfSpanError);
}

TEST(Geodesic, StraightLineEndpoint) {
  const Trajectory line = integrate_geodesic(flat_connection(Chart::euclidean(2)),
                                             vec({0.0, 0.0}), vec({1.0, 2.0}), 1.0, 1e-10);
  EXPECT_FALSE(line.exited_domain());
  EXPECT_LT((line.position(1.0) - vec({1.0, 2.0})).norm(), 1e-12);
}

TEST(Geodesic, GreatCircleReachesAntipode) {
  // Tilted great circle from the equator: after arclength pi it reaches the
  // antipodal equator point (theta, phi) = (pi/2, pi).
  const double tilt = std::numbers::pi / 4;
  const Vec x0 = vec({std::numbers::pi / 2, 0.0});
  const Vec v0 = vec({std::cos(tilt), std::sin(tilt)});
  const double tol = 1e-10;
  const AffineConnection conn = levi_civita(models::sphere_metric());
  const Trajectory gc = integrate_geodesic(conn, x0, v0, std::numbers::pi, tol);
  const Vec end = gc.position(std::numbers::pi);
  EXPECT_LT((end - vec({std::numbers::pi / 2, std::numbers::pi})).norm(), 1e-6);
  // Closed form on the great circle: cos(theta(t)) = -sin(tilt) ... in the
  // embedding, z(t) = -cos(tilt) sin(t).
  for (double t : {0.3, 1.1, 2.0, 2.9}) {
    EXPECT_NEAR(std::cos(gc.position(t)(0)), -std::cos(tilt) * std::sin(t), 1e-7);
  }
  // Geodesic residual.
  for (double t : {0.25, 0.77, 1.6, 3.0}) {
    EXPECT_LE(covariant_acceleration(conn, gc, t).norm(), 10 * tol) << t;
  }
  // Unit speed is preserved.
  EXPECT_NEAR(norm(models::sphere_metric(), end, gc.velocity(std::numbers::pi)), 1.0, 1e-8);
}

TEST(Geodesic, LeavingTheChartStopsEarly) {
  const AffineConnection flat = flat_connection(Chart{1, [](const Vec& x) { return x(0) < 1.0; }});
  const Trajectory traj = integrate_geodesic(flat, vec({0.0}), vec({1.0}), 5.0, 1e-10);
  EXPECT_TRUE(traj.exited_domain());
  EXPECT_LT(traj.t_end(), 1.0);
  EXPECT_GT(traj.t_end(), 0.99);
}

TEST(Flow, EuclideanQuadraticDecaysExponentially) {
  const double tol = 1e-10;
  const Trajectory traj = integrate_flow(MetricField::euclidean(2), models::euclidean_quadratic(),
                                         vec({1.0, 0.0}), 3.0, tol);
  EXPECT_LT(std::abs(traj.position(3.0)(0) - std::exp(-3.0)), tol);
  EXPECT_LT(std::abs(traj.position(1.7)(0) - std::exp(-1.7)), tol);
}

TEST(Flow, SingleModeMatchesClosedForm) {
  const chain::ModeSpectrum s = chain::spectrum(5);
  for (int k = 0; k < s.size(); ++k) {
    const double l = s.lambdas[static_cast<std::size_t>(k)];
    for (double temp : {0.25, 2.0}) {
      const Trajectory traj = integrate_flow(chain::mode_metric(), chain::mode_potential(l),
                                             vec({2.0 * temp / l}), 5.0 / l, 1e-12);
      for (double frac : {0.1, 0.5, 1.0}) {
        const double t = frac * 5.0 / l;
        EXPECT_LT(rel_err(traj.position(t)(0), chain::analytic_variance(s, k, temp, t)), 1e-8);
      }
    }
  }
}

TEST(Flow, StartAtMinimumStaysPut) {
  const ScalarPotential f = chain::mode_potential(2.0);
  const Trajectory traj = integrate_flow(chain::mode_metric(), f, f.minimum(), 10.0, 1e-10);
  EXPECT_EQ(traj.position(10.0)(0), f.minimum()(0));
  EXPECT_EQ(traj.velocity(4.0).norm(), 0.0);
}

TEST(Flow, SamplesCarryTheGeneratingField) {
  const MetricField g = models::sphere_metric();
  const ScalarPotential f = models::sphere_height();
  const Trajectory traj = integrate_flow(g, f, vec({0.5, 1.0}), 4.0, 1e-10);
  const auto samples = traj.samples();
  ASSERT_GT(samples.size(), 3u);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    EXPECT_GT(samples[i].t, samples[i - 1].t);
    EXPECT_LT((samples[i].v + gradient(g, f, samples[i].x)).norm(), 1e-14);
  }
}

// f' = -|x'|^2_g at dense samples.
TEST(FlowProperty, EnergyIdentity) {
  const chain::ModeSpectrum s = chain::spectrum(4);
  struct Case {
    MetricField g;
    ScalarPotential f;
    Vec x0;
    double t_end;
  };
  const std::vector<Case> cases = {
      {MetricField::euclidean(2), models::euclidean_quadratic(), vec({1.0, -0.5}), 3.0},
      {models::sphere_metric(), models::sphere_height(), vec({0.6, 0.2}), 3.0},
      {chain::chain_metric(s), chain::chain_potential(s), chain::initial_state(s, 3.0), 2.0},
  };
  for (const auto& c : cases) {
    const Trajectory traj = integrate_flow(c.g, c.f, c.x0, c.t_end, 1e-11);
    for (int i = 1; i < 40; ++i) {
      const double t = c.t_end * i / 40.0;
      auto f_of_t = [&](const Vec& tv) { return c.f(traj.position(tv(0))); };
      const double fdot = directional_derivative(f_of_t, vec({t}), vec({1.0}), 1e-4);
      const Vec x = traj.position(t);
      const double speed2 = inner(c.g, x, traj.velocity(t), traj.velocity(t));
      EXPECT_LE(rel_err(fdot, -speed2), 1e-6) << t;
    }
  }
}

TEST(Flow, NonConvergenceIsReported) {
  // An unbounded-below tilt: gradient norm keeps growing.
  const ScalarPotential f([](const Vec& x) { return -std::exp(x(0)); },
                          [](const Vec& x) -> Vec { return -x.array().exp().matrix(); }, vec({0.0}));
  FlowOptions opts;
  opts.require_convergence = true;
  EXPECT_THROW(integrate_flow(MetricField::euclidean(1), f, vec({0.0}), 1.0, 1e-8, opts),
               ConvergenceError);
}

TEST(Flow, InvalidArguments) {
  EXPECT_THROW(integrate_flow(chain::mode_metric(), chain::mode_potential(2.0), vec({-1.0}), 1.0,
                              1e-8),
               DomainError);
  EXPECT_THROW(integrate_flow(chain::mode_metric(), chain::mode_potential(2.0), vec({1.0}), 1.0,
                              0.0),
               InvalidArgument);
}

}  // namespace
}  // namespace geoflow
