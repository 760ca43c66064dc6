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

// The straightening connection of a potential: a symmetric connection under
// which every gradient curve of f is a pregeodesic,
//
//   Gamma~^k_ij = Gamma^k_ij(g) - g_ij Z^k,
//   |grad f|^2 Z = nabla^g_{grad f} grad f - lambda grad f,
//
// together with its non-metricity tensor and curvature.

#include <functional>

#include "geoflow/manifold.hpp"
#include "geoflow/trajectory.hpp"

namespace geoflow {

inline constexpr double kDefaultEpsGrad = 1e-10;

/// nabla^g_{grad f} grad f at x (Levi-Civita self-derivative of the gradient).
Vec gradient_self_derivative(const MetricField& g, const ScalarPotential& f, const Vec& x);

/// Z = (nabla^g_{grad f} grad f - lambda grad f) / |grad f|^2.
/// Throws CriticalPointError where |grad f|_g <= eps_grad.
Vec z_field(const MetricField& g, const ScalarPotential& f, double lambda, const Vec& x,
            double eps_grad = kDefaultEpsGrad);

ChristoffelSymbols straightening_coeffs(const MetricField& g, const ScalarPotential& f,
                                        double lambda, const Vec& x,
                                        double eps_grad = kDefaultEpsGrad);

class StraighteningConnection {
 public:
  StraighteningConnection(MetricField g, ScalarPotential f, double lambda = 0.0,
                          double eps_grad = kDefaultEpsGrad);

  const MetricField& metric() const { return g_; }
  const ScalarPotential& potential() const { return f_; }
  double lambda() const { return lambda_; }
  double eps_grad() const { return eps_grad_; }

  Vec z(const Vec& x) const { return z_field(g_, f_, lambda_, x, eps_grad_); }
  ChristoffelSymbols coeffs(const Vec& x) const {
    return straightening_coeffs(g_, f_, lambda_, x, eps_grad_);
  }
  /// Coefficient field over the chart minus the critical set.
  AffineConnection connection() const;

  /// |nabla~_{grad f} grad f - lambda grad f|_g / |grad f|_g.
  double pregeodesic_residual(const Vec& x) const;

  /// g(W,X) g(Y,Z) + g(W,Y) g(X,Z).
  double nonmetricity_closed_form(const Vec& x, const Vec& w, const Vec& u,
                                  const Vec& v) const;

 private:
  MetricField g_;
  ScalarPotential f_;
  double lambda_;
  double eps_grad_;
};

/// (nabla_W g)(X, Y) = W[g(X,Y)] - g(nabla_W X, Y) - g(X, nabla_W Y), with
/// X and Y extended as coordinate-constant fields.
double nonmetricity(const AffineConnection& conn, const MetricField& g, const Vec& x,
                    const Vec& w, const Vec& u, const Vec& v);

/// C^f(v,v,v) along a gradient-descent trajectory of f, from the curve alone:
/// 2 [lambda |v|^2 + g(v, nabla^g_v v)]. Satisfies f'' = -C - 2 lambda f'.
double nonmetricity_cubic(const MetricField& g, double lambda, const Trajectory& traj,
                          double t);

/// Contraction used for the Ricci tensor, with
/// R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.
enum class RicciConvention {
  /// Ric_jk = R^i_ijk. The unit round sphere has s = +2.
  FirstIndex,
  /// Ric_jk = R^i_jik = -R^i_ijk. The unit round sphere has s = -2.
  SecondIndex,
};

/// s = g^{jk} Ric_jk, with derivatives of the coefficients taken by central
/// differences under the metric's finite-difference policy.
double scalar_curvature(const AffineConnection& conn, const MetricField& g, const Vec& x,
                        RicciConvention convention = RicciConvention::FirstIndex);

/// Parametrized submanifold u -> x(u).
struct Submanifold {
  int dim = 1;
  std::function<Vec(const Vec&)> embed;
};

struct ProjectionCheck {
  double residual = 0.0;
  /// residual above the orthogonality threshold.
  bool flagged = false;
};

/// Largest |g(grad f, v)| / (|grad f| |v|) over the tangent basis of the
/// submanifold at parameter `u_hat`. Near zero at a constrained minimizer.
ProjectionCheck projection_orthogonality(const MetricField& g, const ScalarPotential& f,
                                         const Submanifold& s, const Vec& u_hat,
                                         double threshold = 1e-6);

}  // namespace geoflow
