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

// Hessian (dually flat) models: metric potential phi in affine coordinates
// theta, dual coordinates eta = d phi, dual potential psi via the Legendre
// transform, and the canonical divergence.

#include <functional>
#include <string>

#include "geoflow/manifold.hpp"

namespace geoflow {

class HessianModel {
 public:
  using Potential = std::function<double(const Vec&)>;
  using Gradient = std::function<Vec(const Vec&)>;
  using Hessian = std::function<Mat(const Vec&)>;

  /// `reference` is any chart point; it seeds the eta -> theta Newton solve.
  HessianModel(std::string name, Chart theta_chart, Vec reference, Potential phi,
               Gradient gradient = {}, Hessian hessian = {});

  const std::string& name() const { return name_; }
  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  const Vec& reference() const { return reference_; }

  double phi(const Vec& theta) const;
  /// eta_i = d phi / d theta^i.
  Vec eta(const Vec& theta) const;
  Mat hessian(const Vec& theta) const;

  /// g_ij = d^2 phi / d theta^i d theta^j.
  MetricField metric() const;

  /// Inverts eta(theta) = target by damped Newton.
  Vec theta_from_eta(const Vec& eta) const;
  /// psi(eta) = theta(eta) . eta - phi(theta(eta)).
  double psi(const Vec& eta) const;

  /// phi = theta^2 / 2 (componentwise sum); self-dual.
  static HessianModel quadratic(int dim = 1);
  /// phi = sum exp(theta_i); Poisson log-partition.
  static HessianModel exponential(int dim = 1);
  /// Log-partition of the 1-D Gaussian in natural parameters
  /// theta = (mu / sigma^2, -1 / (2 sigma^2)).
  static HessianModel gaussian();

 private:
  std::string name_;
  Chart chart_;
  Vec reference_;
  Potential phi_;
  Gradient gradient_;
  Hessian hessian_;
};

struct LegendrePoint {
  Vec coords;
  double potential = 0.0;
};

/// (eta, psi) at theta. Throws DomainError("non-convex") when the Hessian of
/// phi is not positive definite there.
LegendrePoint legendre_dual(const HessianModel& model, const Vec& theta);

/// The transform applied from the dual side: (theta, phi) from eta, with
/// theta = d psi / d eta taken by finite differences.
LegendrePoint legendre_from_dual(const HessianModel& model, const Vec& eta);

/// D(p || q) = phi(p) + psi(q) - theta(p) . eta(q), points given in theta.
double canonical_divergence(const HessianModel& model, const Vec& p, const Vec& q);

/// D*(p || q) = D(q || p).
double dual_divergence(const HessianModel& model, const Vec& p, const Vec& q);

/// D_q = D(q || .) as a potential on the theta chart, minimum at q.
/// Partial derivatives by finite differences.
ScalarPotential divergence_potential(const HessianModel& model, const Vec& q);

/// |(dV) V - V| / |V| for V = grad D_q in theta coordinates, where the flat
/// connection has vanishing coefficients. Throws CriticalPointError at x = q.
double fujiwara_amari_residual(const HessianModel& model, const Vec& q, const Vec& x);

}  // namespace geoflow
