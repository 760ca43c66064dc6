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

// Embedded Runge-Kutta 5(4) (Dormand-Prince) with Hairer's fourth-order
// continuous extension. Deterministic: identical inputs give bit-identical
// steps.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "geoflow/manifold.hpp"

namespace geoflow {

using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// 0 selects an automatic first step.
  double initial_step = 0.0;
  std::size_t max_steps = 5'000'000;
  /// Upper bound on the step size; 0 means unbounded.
  double max_step = 0.0;
  /// States for which this returns false are outside the domain; stage
  /// points landing there shrink the step, and the integration stops
  /// (flagged) when no admissible step remains.
  std::function<bool(const Vec&)> admissible;
  /// Checked after every accepted step; true stops the integration there.
  std::function<bool(double, const Vec&)> stop;
};

enum class Termination { Completed, Stopped, DomainExit };

/// One accepted step and its interpolation coefficients.
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec, 5> coeffs;

  Vec eval(double t) const;
  Vec eval_derivative(double t) const;
};

class DenseSolution {
 public:
  DenseSolution(double t0, Vec y0, Vec dy0);

  double t_begin() const { return t_begin_; }
  double t_end() const { return steps_.empty() ? t_begin_ : steps_.back().t0 + steps_.back().h; }
  Termination termination() const { return termination_; }
  std::size_t step_count() const { return steps_.size(); }
  const std::vector<DenseStep>& steps() const { return steps_; }

  /// Accepted step-end times, starting with t_begin.
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& states() const { return states_; }
  const std::vector<Vec>& derivatives() const { return derivatives_; }

  Vec state(double t) const;
  /// Time derivative of the interpolant.
  Vec state_derivative(double t) const;

 private:
  friend DenseSolution integrate_dopri5(const OdeRhs&, double, const Vec&, double,
                                        const OdeOptions&);
  const DenseStep& locate(double t) const;

  double t_begin_;
  std::vector<DenseStep> steps_;
  std::vector<double> times_;
  std::vector<Vec> states_;
  std::vector<Vec> derivatives_;
  Termination termination_ = Termination::Completed;
};

/// Integrates y' = rhs(t, y) from t0 to t_end. A rhs that throws DomainError
/// is treated like an inadmissible stage point.
DenseSolution integrate_dopri5(const OdeRhs& rhs, double t0, const Vec& y0, double t_end,
                               const OdeOptions& options);

}  // namespace geoflow
