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

// f-equidistant initial conditions, paired gradient-descent comparison and
// the non-metricity asymmetry verdict.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoflow/manifold.hpp"
#include "geoflow/straightening.hpp"
#include "geoflow/trajectory.hpp"

namespace geoflow {

/// Two starting points on a common level set f = level.
struct EquidistantPair {
  Vec x1;
  Vec x2;
  double level = 0.0;
};

enum class Verdict { Curve1Faster, Curve2Faster, Inconclusive };

std::string_view to_string(Verdict v);

/// A time at which both curves move at the same metric speed.
struct Coincidence {
  double t = 0.0;
  double speed1 = 0.0;
  double speed2 = 0.0;
  /// C^f(v,v,v) on each curve.
  double cubic1 = 0.0;
  double cubic2 = 0.0;

  double gap() const { return cubic2 - cubic1; }
};

struct AsymmetryReport {
  double level = 0.0;
  double t_end = 0.0;
  /// Sample grid and f along each curve; delta_f = f2 - f1.
  std::vector<double> times;
  std::vector<double> f1;
  std::vector<double> f2;
  std::vector<double> delta_f;
  std::vector<Coincidence> coincidences;
  Verdict verdict = Verdict::Inconclusive;
  /// Both gradient norms below the convergence threshold at t_end.
  bool converged = false;
  std::string note;
  std::optional<Trajectory> curve1;
  std::optional<Trajectory> curve2;

  double min_delta_f() const;
  double max_delta_f() const;
  double max_abs_delta_f() const;
  /// delta_f evaluated on the dense output.
  double delta_f_at(const ScalarPotential& f, double t) const;
};

/// Points q + s_i d_i with f = level, found by bracketing, bisection and a
/// Newton polish to |f - level| < 1e-10.
EquidistantPair equidistant_seed(const MetricField& g, const ScalarPotential& f, double level,
                                 const Vec& direction1, const Vec& direction2);

struct CompareOptions {
  /// Horizon; when unset, integrate until both |grad f|_g < convergence_gradient.
  std::optional<double> t_end;
  double tol = 1e-10;
  /// Uniform samples added to the union of integrator nodes.
  std::size_t samples = 2001;
  double convergence_gradient = 1e-6;
  double max_horizon = 1e6;
  /// Location tolerance for speed-coincidence times.
  double time_tol = 1e-9;
  /// Integrate the two curves concurrently.
  bool concurrent = true;
};

AsymmetryReport compare(const MetricField& g, const ScalarPotential& f, double lambda,
                        const EquidistantPair& pair, const CompareOptions& options = {});

/// True iff max_t |delta_f| < 1e-7 * level.
bool metric_symmetry_check(const MetricField& g, const ScalarPotential& f,
                           const EquidistantPair& pair, const CompareOptions& options = {});

/// Minimizer of f restricted to the submanifold, by gradient descent of the
/// pulled-back potential under the induced metric. Returns parameters u.
Vec constrained_minimize(const MetricField& g, const ScalarPotential& f, const Submanifold& s,
                         const Vec& u0, double tol = 1e-12);

}  // namespace geoflow
