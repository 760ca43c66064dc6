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

// Gaussian (Rouse) chain: N+1 beads joined by ideal zero-rest-length
// springs. Normal-mode variances a_k relax independently,
//
//   a_k(t) = (2 / lambda_k) (1 + (T - 1) exp(-2 lambda_k t)),
//   da_k/dt = -2 lambda_k (a_k - a*_k),   a*_k = 2 / lambda_k,
//
// which is the gradient flow of F = sum_k lambda_k (a*_k/a_k - ln(a*_k/a_k) - 1)
// under the variance block 1/(2 a_k^2) of the Fisher metric.

#include <vector>

#include "geoflow/gradient_flow.hpp"
#include "geoflow/manifold.hpp"

namespace geoflow::chain {

struct ChainSpec {
  /// N + 1 beads, N >= 1 internal modes.
  int n_beads = 2;
  /// Initial over equilibrium temperature.
  double t_tilde = 1.0;

  void validate() const;
  int modes() const { return n_beads - 1; }
};

struct ModeSpectrum {
  /// Ascending, strictly positive.
  std::vector<double> lambdas;
  /// a*_k = 2 / lambda_k.
  std::vector<double> a_star;

  int size() const { return static_cast<int>(lambdas.size()); }
  Vec a_star_vec() const;
};

/// Nonzero eigenvalues of the free-end path-graph Laplacian on n_beads
/// vertices, ascending.
ModeSpectrum spectrum(int n_beads);
inline ModeSpectrum spectrum(const ChainSpec& spec) { return spectrum(spec.n_beads); }

/// Closed-form variance of mode k at time t for initial temperature ratio t_tilde.
double analytic_variance(const ModeSpectrum& s, int k, double t_tilde, double t);
Vec analytic_variances(const ModeSpectrum& s, double t_tilde, double t);

/// Uniform start a_k = t_tilde * a*_k.
Vec initial_state(const ModeSpectrum& s, double t_tilde);

/// -2 lambda_k (a_k - a*_k), componentwise.
Vec ode_rhs(const ModeSpectrum& s, const Vec& a);

/// KL divergence of mode k from equilibrium: 1/2 [a*/a - ln(a*/a) - 1].
double mode_kl(double a_star, double a);

/// F = sum_k 2 lambda_k KL(a*_k || a_k).
double potential_F(const ModeSpectrum& s, const Vec& a);
double potential_mode(const ModeSpectrum& s, int k, double a);

/// Variance block of the single-mode Fisher metric, 1 / (2 a^2).
double fisher_block(double a);

/// Fisher metric over all variances (diagonal), the chart a_k > 0.
MetricField chain_metric(const ModeSpectrum& s);
ScalarPotential chain_potential(const ModeSpectrum& s);

/// One mode on its own variance chart.
MetricField mode_metric();
ScalarPotential mode_potential(double lambda);

/// One mode on the (mu, a) chart with the full Fisher block
/// 2/a dmu^2 + 1/(2a^2) da^2; needed for curvature (a 1-D chart is flat).
MetricField mode_metric_with_mean();
ScalarPotential mode_potential_with_mean(double lambda);

/// F_k'' = -C^{F_k}(v,v,v) = 2 lambda_k (a*/a) (a'/a)^2 with a' from ode_rhs.
double cubic_closed_form(const ModeSpectrum& s, const Vec& a, int k);

/// s = a (a - 5 a*) / (a - a*)^2 for the lambda = 0 straightening connection
/// of F_k, in the RicciConvention::SecondIndex sign convention. Throws
/// SingularityError when |a - a*| < 1e-6 a*.
double scalar_curvature_mode(const ModeSpectrum& s, int k, double a);

/// T- in (0, 1) with F(T- start) = F(T+ start): solves u - ln u = 1/T+ + ln T+
/// for u > 1 by bisection and returns 1/u.
double equidistant_temperatures(double t_plus);

struct ChainExperiment {
  double t_plus = 1.0;
  double t_minus = 1.0;
  ModeSpectrum spectrum;
  /// Curve 1 = warming start, curve 2 = cooling start, distance F.
  AsymmetryReport chain;
  /// Same comparison per mode with distance F_k.
  std::vector<AsymmetryReport> modes;

  /// Chain and every mode report curve 1 (warming) faster.
  bool warming_faster() const;
};

/// Builds the F-equidistant warming/cooling pair and compares it for the
/// whole chain and per mode. t_plus == 1 pairs equilibrium with itself.
ChainExperiment universal_asymmetry_experiment(int n_beads, double t_plus,
                                               const CompareOptions& options = {});

}  // namespace geoflow::chain
