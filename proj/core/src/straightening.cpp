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

#include "geoflow/straightening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

[[noreturn]] void throw_critical(double gn) {
  std::ostringstream msg;
  msg << "critical point of the potential (|grad f|_g = " << gn << ")";
  throw CriticalPointError(msg.str());
}

}  // namespace

Vec gradient_self_derivative(const MetricField& g, const ScalarPotential& f, const Vec& x) {
  const Vec grad = gradient(g, f, x);
  const double gn = grad.norm();
  if (gn == 0.0) return Vec::Zero(x.size());
  const FiniteDifference& fd = g.finite_difference();
  auto field = [&g, &f](const Vec& p) -> Vec { return gradient(g, f, p); };
  const Vec transport =
      gn * directional_derivative(field, x, grad / gn, fd.step_at(x), fd.order);
  return transport + christoffel_levi_civita(g, x).contract(grad, grad);
}

Vec z_field(const MetricField& g, const ScalarPotential& f, double lambda, const Vec& x,
            double eps_grad) {
  const Vec grad = gradient(g, f, x);
  const double gn2 = inner(g, x, grad, grad);
  if (!(std::sqrt(gn2) > eps_grad)) throw_critical(std::sqrt(gn2));
  return (gradient_self_derivative(g, f, x) - lambda * grad) / gn2;
}

ChristoffelSymbols straightening_coeffs(const MetricField& g, const ScalarPotential& f,
                                        double lambda, const Vec& x, double eps_grad) {
  const Vec z = z_field(g, f, lambda, x, eps_grad);
  const Mat gx = g(x);
  ChristoffelSymbols out = christoffel_levi_civita(g, x);
  const int n = g.dim();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(k, i, j) -= gx(i, j) * z(k);
    }
  }
  return out;
}

StraighteningConnection::StraighteningConnection(MetricField g, ScalarPotential f,
                                                 double lambda, double eps_grad)
    : g_(std::move(g)), f_(std::move(f)), lambda_(lambda), eps_grad_(eps_grad) {}

AffineConnection StraighteningConnection::connection() const {
  const StraighteningConnection self = *this;
  Chart chart = g_.chart();
  chart.domain_check = [self](const Vec& x) {
    if (self.g_.chart().domain_check && !self.g_.chart().domain_check(x)) return false;
    return norm(self.g_, x, gradient(self.g_, self.f_, x)) > self.eps_grad_;
  };
  return AffineConnection{chart, [self](const Vec& x) { return self.coeffs(x); }, true,
                          "straightening"};
}

double StraighteningConnection::pregeodesic_residual(const Vec& x) const {
  const Vec grad = gradient(g_, f_, x);
  const double gn = norm(g_, x, grad);
  if (!(gn > eps_grad_)) throw_critical(gn);
  // Full Jacobian route, independent of the directional stencil inside Z.
  const Mat jac = jacobian([this](const Vec& p) -> Vec { return gradient(g_, f_, p); }, x,
                           g_.finite_difference());
  const Vec accel = jac * grad + coeffs(x).contract(grad, grad);
  return norm(g_, x, accel - lambda_ * grad) / gn;
}

double StraighteningConnection::nonmetricity_closed_form(const Vec& x, const Vec& w,
                                                         const Vec& u, const Vec& v) const {
  const Mat gx = g_(x);
  const Vec zx = z(x);
  return w.dot(gx * u) * v.dot(gx * zx) + w.dot(gx * v) * u.dot(gx * zx);
}

double nonmetricity(const AffineConnection& conn, const MetricField& g, const Vec& x,
                    const Vec& w, const Vec& u, const Vec& v) {
  const Mat gx = g(x);
  const std::vector<Mat> dg = g.derivatives(x);
  const ChristoffelSymbols gamma = conn(x);
  double directional = 0.0;
  for (int i = 0; i < g.dim(); ++i) directional += w(i) * u.dot(dg[i] * v);
  const Vec nabla_w_u = gamma.contract(w, u);
  const Vec nabla_w_v = gamma.contract(w, v);
  return directional - nabla_w_u.dot(gx * v) - u.dot(gx * nabla_w_v);
}

double nonmetricity_cubic(const MetricField& g, double lambda, const Trajectory& traj,
                          double t) {
  const Vec x = traj.position(t);
  const Vec v = traj.velocity(t);
  const Vec nabla_v_v = traj.acceleration(t) + christoffel_levi_civita(g, x).contract(v, v);
  const Mat gx = g(x);
  return 2.0 * (lambda * v.dot(gx * v) + v.dot(gx * nabla_v_v));
}

double scalar_curvature(const AffineConnection& conn, const MetricField& g, const Vec& x,
                        RicciConvention convention) {
  const int n = conn.dim();
  const FiniteDifference& fd = g.finite_difference();
  const double h = fd.step_at(x);
  std::vector<ChristoffelSymbols> dgamma;
  dgamma.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    ChristoffelSymbols d = conn(x + h * e);
    d -= conn(x - h * e);
    if (fd.order == 2) {
      d *= 1.0 / (2.0 * h);
    } else {
      d *= 8.0;
      ChristoffelSymbols far = conn(x + 2.0 * h * e);
      far -= conn(x - 2.0 * h * e);
      d -= far;
      d *= 1.0 / (12.0 * h);
    }
    dgamma.push_back(std::move(d));
  }
  const ChristoffelSymbols gamma = conn(x);

  // Ric_jk = R^i_ijk
  Mat ricci = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += dgamma[i](i, j, k) - dgamma[j](i, i, k);
        for (int m = 0; m < n; ++m) {
          acc += gamma(i, i, m) * gamma(m, j, k) - gamma(i, j, m) * gamma(m, i, k);
        }
      }
      ricci(j, k) = acc;
    }
  }
  const double s = (metric_inverse(g, x).cwiseProduct(ricci)).sum();
  return convention == RicciConvention::FirstIndex ? s : -s;
}

ProjectionCheck projection_orthogonality(const MetricField& g, const ScalarPotential& f,
                                         const Submanifold& s, const Vec& u_hat,
                                         double threshold) {
  const Mat tangent = jacobian(s.embed, u_hat, g.finite_difference());
  Eigen::JacobiSVD<Mat> svd(tangent);
  const Vec sv = svd.singularValues();
  if (sv.size() < s.dim || !(sv(s.dim - 1) > 1e-10 * std::max(1.0, sv(0)))) {
    throw DegenerateTangentError("submanifold parametrization is rank-deficient");
  }
  const Vec x = s.embed(u_hat);
  const Vec grad = gradient(g, f, x);
  const double gn = norm(g, x, grad);
  ProjectionCheck out;
  if (gn == 0.0) return out;
  for (Eigen::Index c = 0; c < tangent.cols(); ++c) {
    const Vec v = tangent.col(c);
    out.residual = std::max(out.residual, std::abs(inner(g, x, grad, v)) / (gn * norm(g, x, v)));
  }
  out.flagged = out.residual > threshold;
  return out;
}

}  // namespace geoflow
