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

#include <gtest/gtest.h>

#include "geoflow/errors.hpp"
#include "geoflow/ode.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {
namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

TEST(Dopri5, ExponentialDecay) {
  OdeOptions opt;
  opt.rtol = opt.atol = 1e-12;
  const DenseSolution sol =
      integrate_dopri5([](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0), 5.0, opt);
  EXPECT_EQ(sol.termination(), Termination::Completed);
  EXPECT_DOUBLE_EQ(sol.t_end(), 5.0);
  EXPECT_NEAR(sol.state(5.0)(0), std::exp(-5.0), 1e-12);
  // Dense output between nodes.
  for (double t : {0.013, 0.5, 2.2, 4.999}) {
    EXPECT_NEAR(sol.state(t)(0), std::exp(-t), 1e-11) << t;
    EXPECT_NEAR(sol.state_derivative(t)(0), -std::exp(-t), 1e-9) << t;
  }
}

TEST(Dopri5, HarmonicOscillatorConservesEnergyWithinTolerance) {
  OdeOptions opt;
  opt.rtol = opt.atol = 1e-11;
  auto rhs = [](double, const Vec& y) -> Vec {
    Vec d(2);
    d << y(1), -y(0);
    return d;
  };
  Vec y0(2);
  y0 << 1.0, 0.0;
  const DenseSolution sol = integrate_dopri5(rhs, 0.0, y0, 20.0, opt);
  EXPECT_NEAR(sol.state(20.0)(0), std::cos(20.0), 1e-8);
  EXPECT_NEAR(sol.state(20.0)(1), -std::sin(20.0), 1e-8);
}

TEST(Dopri5, TimeDependentRightHandSide) {
  OdeOptions opt;
  const DenseSolution sol = integrate_dopri5(
      [](double t, const Vec&) -> Vec { return scalar(std::cos(t)); }, 0.0, scalar(0.0), 3.0, opt);
  EXPECT_NEAR(sol.state(3.0)(0), std::sin(3.0), 1e-9);
}

TEST(Dopri5, NodesAreStrictlyIncreasing) {
  const DenseSolution sol = integrate_dopri5(
      [](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0), 2.0, OdeOptions{});
  ASSERT_EQ(sol.times().size(), sol.states().size());
  ASSERT_EQ(sol.times().size(), sol.step_count() + 1);
  for (std::size_t i = 1; i < sol.times().size(); ++i) EXPECT_GT(sol.times()[i], sol.times()[i - 1]);
  EXPECT_EQ(sol.times().front(), 0.0);
}

TEST(Dopri5, StopPredicateEndsEarly) {
  OdeOptions opt;
  opt.stop = [](double, const Vec& y) { return y(0) < 0.5; };
  const DenseSolution sol =
      integrate_dopri5([](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0), 10.0, opt);
  EXPECT_EQ(sol.termination(), Termination::Stopped);
  EXPECT_LT(sol.t_end(), 10.0);
  EXPECT_LT(sol.state(sol.t_end())(0), 0.5);
}

TEST(Dopri5, DomainExitIsFlagged) {
  OdeOptions opt;
  opt.admissible = [](const Vec& y) { return y(0) < 1.0; };
  const DenseSolution sol = integrate_dopri5(
      [](double, const Vec&) -> Vec { return scalar(1.0); }, 0.0, scalar(0.0), 5.0, opt);
  EXPECT_EQ(sol.termination(), Termination::DomainExit);
  EXPECT_GT(sol.t_end(), 0.99);
  EXPECT_LT(sol.t_end(), 1.0);
}

TEST(Dopri5, DomainErrorInRhsIsInadmissible) {
  // y' = 1 with the field undefined beyond y = 2.
  auto rhs = [](double, const Vec& y) -> Vec {
    if (y(0) >= 2.0) throw DomainError("outside");
    return scalar(1.0);
  };
  const DenseSolution sol = integrate_dopri5(rhs, 0.0, scalar(0.0), 5.0, OdeOptions{});
  EXPECT_EQ(sol.termination(), Termination::DomainExit);
  EXPECT_NEAR(sol.t_end(), 2.0, 1e-2);
}

TEST(Dopri5, OutOfSpanQueriesThrow) {
  const DenseSolution sol = integrate_dopri5(
      [](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0), 1.0, OdeOptions{});
  EXPECT_THROW(sol.state(1.5), OutOfSpanError);
  EXPECT_THROW(sol.state(-0.5), OutOfSpanError);
  EXPECT_NO_THROW(sol.state(1.0));
}

TEST(Dopri5, StepBudgetExhaustionThrows) {
  OdeOptions opt;
  opt.max_steps = 5;
  EXPECT_THROW(integrate_dopri5([](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0),
                                1000.0, opt),
               ConvergenceError);
}

TEST(Dopri5, ZeroSpanReturnsInitialState) {
  const DenseSolution sol = integrate_dopri5(
      [](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(3.0), 0.0, OdeOptions{});
  EXPECT_EQ(sol.state(0.0)(0), 3.0);
  EXPECT_EQ(sol.step_count(), 0u);
}

TEST(Dopri5, ErrorScalesWithTolerance) {
  double previous = 0.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    OdeOptions opt;
    opt.rtol = opt.atol = tol;
    const DenseSolution sol = integrate_dopri5(
        [](double, const Vec& y) -> Vec { return -y; }, 0.0, scalar(1.0), 4.0, opt);
    const double err = std::abs(sol.state(4.0)(0) - std::exp(-4.0));
    EXPECT_LT(err, 10 * tol);
    if (previous > 0.0) EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(Parallel, RunsEveryIndexOnce) {
  std::vector<int> hits(37, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GE(thread_count(), 1u);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(4,
                            [](std::size_t i) {
                              if (i == 2) throw DomainError("boom");
                            }),
               DomainError);
}

}  // namespace
}  // namespace geoflow
