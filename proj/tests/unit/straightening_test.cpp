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
#include "geoflow/gradient_flow.hpp"
#include "geoflow/models.hpp"
#include "geoflow/straightening.hpp"
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

struct Fixture {
  std::string name;
  MetricField g;
  ScalarPotential f;
  Vec lo;
  Vec hi;
};

std::vector<Fixture> fixtures() {
  const chain::ModeSpectrum two = chain::spectrum(3);
  return {
      {"euclidean", MetricField::euclidean(2), models::euclidean_quadratic(), vec({-2, -2}),
       vec({2, 2})},
      {"gaussian-mode", chain::mode_metric(), chain::mode_potential(2.0), vec({0.05}), vec({6})},
      {"two-mode", chain::chain_metric(two), chain::chain_potential(two), vec({0.2, 0.1}),
       vec({8, 3})},
      {"sphere", models::sphere_metric(), models::sphere_height(), vec({0.1, -3}), vec({3.0, 3})},
  };
}

Vec sample(Sampler& rng, const Fixture& fx) {
  Vec x(fx.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(fx.lo(i), fx.hi(i));
  return x;
}

TEST(ZField, EuclideanQuadratic) {
  const Vec z0 = z_field(MetricField::euclidean(2), models::euclidean_quadratic(), 0.0, vec({1, 0}));
  EXPECT_NEAR(z0(0), 1.0, 1e-9);
  EXPECT_NEAR(z0(1), 0.0, 1e-9);
  const Vec z1 = z_field(MetricField::euclidean(2), models::euclidean_quadratic(), 1.0, vec({1, 0}));
  EXPECT_NEAR(z1.norm(), 0.0, 1e-9);
}

TEST(ZField, SingleModeAgainstLinearSolve) {
  // lambda_k = 2, a* = 1, a = 2: grad = 4, nabla_grad grad = 16 - 8 = 8,
  // |grad|^2 = 2, so Z = 4.
  const MetricField g = chain::mode_metric();
  const ScalarPotential f = chain::mode_potential(2.0);
  const Vec x = vec({2.0});
  const Vec z = z_field(g, f, 0.0, x);
  EXPECT_LT(rel_err(z(0), 4.0), 1e-9);
  // Brute force: solve |grad|^2 Z = nabla_grad grad as a linear system.
  const Vec grad = gradient(g, f, x);
  Mat lhs = Mat::Identity(1, 1) * inner(g, x, grad, grad);
  const Vec rhs = gradient_self_derivative(g, f, x);
  EXPECT_LT(rel_err(z(0), lhs.fullPivLu().solve(rhs)(0)), 1e-12);
  EXPECT_LT(rel_err(rhs(0), 8.0), 1e-9);
}

TEST(ZFieldProperty, DefiningRelationHolds) {
  Sampler rng(3);
  for (const auto& fx : fixtures()) {
    for (double lambda : {0.0, 0.8}) {
      for (int i = 0; i < 20; ++i) {
        const Vec x = sample(rng, fx);
        const Vec grad = gradient(fx.g, fx.f, x);
        const Vec lhs = inner(fx.g, x, grad, grad) * z_field(fx.g, fx.f, lambda, x);
        const Vec rhs = gradient_self_derivative(fx.g, fx.f, x) - lambda * grad;
        EXPECT_LE((lhs - rhs).norm(), 1e-9 * std::max(rhs.norm(), grad.norm())) << fx.name;
      }
    }
  }
}

TEST(ZField, CriticalPointRaises) {
  const ScalarPotential f = models::euclidean_quadratic();
  EXPECT_THROW(z_field(MetricField::euclidean(2), f, 0.0, vec({0, 0})), CriticalPointError);
  EXPECT_THROW(straightening_coeffs(MetricField::euclidean(2), f, 0.0, vec({0, 0})),
               CriticalPointError);
  const StraighteningConnection conn(chain::mode_metric(), chain::mode_potential(2.0));
  EXPECT_THROW(conn.coeffs(vec({1.0})), CriticalPointError);
  EXPECT_FALSE(conn.connection().chart.contains(vec({1.0})));
  EXPECT_TRUE(conn.connection().chart.contains(vec({1.5})));
}

TEST(StraighteningCoeffs, EuclideanQuadratic) {
  const ChristoffelSymbols c =
      straightening_coeffs(MetricField::euclidean(2), models::euclidean_quadratic(), 0.0, vec({1, 0}));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double want = (i == j && k == 0) ? -1.0 : 0.0;
        EXPECT_NEAR(c(k, i, j), want, 1e-9) << k << i << j;
      }
}

TEST(StraighteningCoeffs, SymmetricInLowerIndices) {
  Sampler rng(5);
  for (const auto& fx : fixtures()) {
    const Vec x = sample(rng, fx);
    EXPECT_EQ(straightening_coeffs(fx.g, fx.f, 0.3, x).asymmetry(), 0.0) << fx.name;
  }
}

// Gradient curves are pregeodesics of the straightening connection.
TEST(StraighteningProperty, PregeodesicResidual) {
  Sampler rng(1);
  for (const auto& fx : fixtures()) {
    for (double lambda : {0.0, 1.0, -0.4}) {
      const StraighteningConnection conn(fx.g, fx.f, lambda);
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) worst = std::max(worst, conn.pregeodesic_residual(sample(rng, fx)));
      EXPECT_LT(worst, 1e-8) << fx.name << " lambda " << lambda;
    }
  }
}

TEST(Nonmetricity, EuclideanQuadraticExamples) {
  const StraighteningConnection s(MetricField::euclidean(2), models::euclidean_quadratic());
  const AffineConnection conn = s.connection();
  const MetricField g = MetricField::euclidean(2);
  const Vec x = vec({1, 0});
  const Vec e1 = vec({1, 0});
  EXPECT_NEAR(nonmetricity(conn, g, x, e1, e1, e1), 2.0, 1e-8);
  EXPECT_NEAR(nonmetricity(conn, g, x, -e1, -e1, -e1), -2.0, 1e-8);
  EXPECT_NEAR(s.nonmetricity_closed_form(x, e1, e1, e1), 2.0, 1e-9);
}

TEST(Nonmetricity, LeviCivitaIsMetric) {
  Sampler rng(8);
  for (const auto& fx : fixtures()) {
    const AffineConnection lc = levi_civita(fx.g);
    const int n = fx.g.dim();
    for (int i = 0; i < 10; ++i) {
      const Vec x = sample(rng, fx);
      const double c =
          nonmetricity(lc, fx.g, x, rng.normal_vec(n), rng.normal_vec(n), rng.normal_vec(n));
      EXPECT_NEAR(c, 0.0, 1e-8) << fx.name;
    }
  }
}

// Definition-based (nabla_W g)(X, Y) against the closed form.
TEST(NonmetricityProperty, ClosedFormMatchesDefinition) {
  Sampler rng(99);
  for (const auto& fx : fixtures()) {
    for (double lambda : {0.0, 0.5}) {
      const StraighteningConnection s(fx.g, fx.f, lambda);
      const AffineConnection conn = s.connection();
      const int n = fx.g.dim();
      for (int i = 0; i < 25; ++i) {
        const Vec x = sample(rng, fx);
        const Vec w = rng.normal_vec(n), u = rng.normal_vec(n), v = rng.normal_vec(n);
        const double closed = s.nonmetricity_closed_form(x, w, u, v);
        const double direct = nonmetricity(conn, fx.g, x, w, u, v);
        const double scale = fx.g(x).norm() * fx.g(x).norm() * s.z(x).norm() * w.norm() * u.norm() *
                             v.norm();
        EXPECT_LE(std::abs(direct - closed), 1e-8 * std::max(std::abs(closed), scale)) << fx.name;
      }
    }
  }
}

TEST(NonmetricityProperty, NotTotallySymmetric) {
  const chain::ModeSpectrum s = chain::spectrum(3);
  const MetricField g = chain::chain_metric(s);
  const StraighteningConnection conn(g, chain::chain_potential(s));
  const Vec x = vec({3.0, 0.4});
  const Vec e1 = vec({1, 0}), e2 = vec({0, 1});
  const double wxy = nonmetricity(conn.connection(), g, x, e1, e2, e1);
  const double xyw = nonmetricity(conn.connection(), g, x, e2, e1, e1);
  EXPECT_GT(std::abs(wxy - xyw), 1e-3);
}

TEST(NonmetricityCubic, EuclideanQuadraticAtStart) {
  const MetricField g = MetricField::euclidean(2);
  const Trajectory traj = integrate_flow(g, models::euclidean_quadratic(), vec({1, 0}), 2.0, 1e-12);
  EXPECT_NEAR(nonmetricity_cubic(g, 0.0, traj, 0.0), -2.0, 1e-8);
  EXPECT_NEAR(nonmetricity_cubic(g, 1.0, traj, 0.7), 0.0, 1e-8);
  EXPECT_THROW(nonmetricity_cubic(g, 0.0, traj, 2.5), OutOfSpanError);
}

TEST(NonmetricityCubic, SingleGaussianMode) {
  const chain::ModeSpectrum s = chain::spectrum(4);
  for (int k = 0; k < s.size(); ++k) {
    const double l = s.lambdas[static_cast<std::size_t>(k)];
    for (double temp : {0.4, 3.0}) {
      const Trajectory traj = integrate_flow(chain::mode_metric(), chain::mode_potential(l),
                                             vec({2.0 * temp / l}), 3.0 / l, 1e-12);
      for (double t : {0.0, 0.5 / l, 2.0 / l}) {
        Vec a = chain::analytic_variances(s, temp, t);
        a(k) = traj.position(t)(0);
        const double want = -chain::cubic_closed_form(s, a, k);
        EXPECT_LT(rel_err(nonmetricity_cubic(chain::mode_metric(), 0.0, traj, t), want), 1e-7);
      }
    }
  }
}

TEST(NonmetricityCubic, ZeroAtEquilibrium) {
  const ScalarPotential f = chain::mode_potential(2.0);
  const Trajectory traj = integrate_flow(chain::mode_metric(), f, f.minimum(), 1.0, 1e-10);
  EXPECT_EQ(nonmetricity_cubic(chain::mode_metric(), 0.0, traj, 0.5), 0.0);
}

// f'' + C(v,v,v) + 2 lambda f' = 0 along gradient curves, and the cubic agrees
// with the closed-form tensor at the curve's velocity.
TEST(NonmetricityProperty, IdentityChain) {
  Sampler rng(12);
  for (const auto& fx : fixtures()) {
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x0 = sample(rng, fx);
      const Trajectory traj = integrate_flow(fx.g, fx.f, x0, 1.0, 1e-12);
      for (double lambda : {0.0, 1.0}) {
        const StraighteningConnection s(fx.g, fx.f, lambda);
        for (double t : {0.1, 0.45, 0.9}) {
          auto f_of = [&](const Vec& tv) { return fx.f(traj.position(tv(0))); };
          const double fdd = (f_of(vec({t + 1e-3})) - 2 * f_of(vec({t})) + f_of(vec({t - 1e-3}))) / 1e-6;
          const Vec x = traj.position(t);
          const Vec v = traj.velocity(t);
          const double fd = fx.f.covector(x).dot(v);
          const double c = nonmetricity_cubic(fx.g, lambda, traj, t);
          const double scale = std::max({std::abs(fdd), std::abs(c), std::abs(2 * lambda * fd), 1e-12});
          EXPECT_LE(std::abs(fdd + c + 2 * lambda * fd), 1e-5 * scale) << fx.name << " t=" << t;
          EXPECT_LE(std::abs(c - s.nonmetricity_closed_form(x, v, v, v)), 1e-7 * scale) << fx.name;
        }
      }
    }
  }
}

// lambda = 0: gradient curves are geodesics; lambda = 1: acceleration is grad f.
TEST(StraighteningProperty, LambdaConsistency) {
  Sampler rng(21);
  for (const auto& fx : fixtures()) {
    const Trajectory traj = integrate_flow(fx.g, fx.f, sample(rng, fx), 1.0, 1e-12);
    for (double lambda : {0.0, 1.0}) {
      const StraighteningConnection s(fx.g, fx.f, lambda);
      for (double t : {0.2, 0.6}) {
        const Vec x = traj.position(t);
        const Vec grad = gradient(fx.g, fx.f, x);
        const Vec acc = covariant_acceleration(s.connection(), traj, t);
        EXPECT_LE((acc - lambda * grad).norm(), 1e-7 * std::max(1.0, grad.norm())) << fx.name;
      }
    }
  }
}

TEST(StraighteningProperty, GeodesicTracesGradientCurve) {
  const chain::ModeSpectrum s = chain::spectrum(3);
  const MetricField g = chain::chain_metric(s);
  const ScalarPotential f = chain::chain_potential(s);
  const Vec x0 = chain::initial_state(s, 2.5);
  const StraighteningConnection conn(g, f, 0.0);
  const Trajectory flow = integrate_flow(g, f, x0, 1.0, 1e-12);
  const Trajectory geo = integrate_geodesic(conn.connection(), x0, -gradient(g, f, x0), 1.0, 1e-10);
  for (double t : {0.25, 0.5, 1.0}) {
    EXPECT_LT((geo.position(t) - flow.position(t)).norm(), 1e-7) << t;
  }
}

TEST(ScalarCurvature, FlatAndSphere) {
  const MetricField e = MetricField::euclidean(2);
  EXPECT_NEAR(scalar_curvature(levi_civita(e), e, vec({0.3, 1.0})), 0.0, 1e-9);
  const MetricField sphere = models::sphere_metric();
  for (double theta : {0.5, 1.2, 2.0}) {
    const Vec x = vec({theta, 0.7});
    EXPECT_NEAR(scalar_curvature(levi_civita(sphere), sphere, x), 2.0, 1e-6);
    EXPECT_NEAR(scalar_curvature(levi_civita(sphere), sphere, x, RicciConvention::SecondIndex), -2.0,
                1e-6);
  }
}

TEST(ScalarCurvature, SingleModeStraighteningConnection) {
  const chain::ModeSpectrum s = chain::spectrum(2);
  const double as = s.a_star[0];
  const MetricField g = chain::mode_metric_with_mean();
  const StraighteningConnection conn(g, chain::mode_potential_with_mean(s.lambdas[0]));
  const Vec x = vec({0.0, 2.0 * as});
  EXPECT_NEAR(scalar_curvature(conn.connection(), g, x, RicciConvention::SecondIndex), -6.0, 6e-4);
  EXPECT_NEAR(scalar_curvature(conn.connection(), g, x, RicciConvention::FirstIndex), 6.0, 6e-4);
  for (double ratio : {0.2, 0.5, 1.5, 3.0, 10.0}) {
    const double a = ratio * as;
    const double want = chain::scalar_curvature_mode(s, 0, a);
    const double got =
        scalar_curvature(conn.connection(), g, vec({0.3, a}), RicciConvention::SecondIndex);
    EXPECT_LE(std::abs(got - want), 1e-4 * std::max(1.0, std::abs(want))) << ratio;
  }
}

TEST(ProjectionOrthogonality, EuclideanLine) {
  const Submanifold line{1, [](const Vec& u) { return vec({1.0, u(0)}); }};
  const ProjectionCheck check = projection_orthogonality(
      MetricField::euclidean(2), models::euclidean_quadratic(), line, vec({0.0}));
  EXPECT_LT(check.residual, 1e-12);
  EXPECT_FALSE(check.flagged);
}

TEST(ProjectionOrthogonality, TwoModeConstrainedMinimizer) {
  const chain::ModeSpectrum s = chain::spectrum(3);
  const MetricField g = chain::chain_metric(s);
  const ScalarPotential f = chain::chain_potential(s);
  const Submanifold slice{1, [](const Vec& u) { return vec({3.0, u(0)}); }};
  const Vec u_hat = constrained_minimize(g, f, slice, vec({2.0}));
  EXPECT_NEAR(u_hat(0), s.a_star[1], 1e-8);
  const ProjectionCheck check = projection_orthogonality(g, f, slice, u_hat);
  EXPECT_LT(check.residual, 1e-6);
  EXPECT_FALSE(check.flagged);
  const ProjectionCheck bad = projection_orthogonality(g, f, slice, vec({2.0}));
  EXPECT_GE(bad.residual, 0.1);
  EXPECT_TRUE(bad.flagged);
}

TEST(ProjectionOrthogonality, DegenerateTangentRaises) {
  const Submanifold flat{1, [](const Vec&) { return vec({1.0, 1.0}); }};
  EXPECT_THROW(projection_orthogonality(MetricField::euclidean(2), models::euclidean_quadratic(),
                                        flat, vec({0.0})),
               DegenerateTangentError);
}

}  // namespace
}  // namespace geoflow
