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

#include "geoflow/dually_flat.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "geoflow/errors.hpp"

namespace geoflow {

HessianModel::HessianModel(std::string name, Chart theta_chart, Vec reference, Potential phi,
                           Gradient gradient, Hessian hessian)
    : name_(std::move(name)),
      chart_(std::move(theta_chart)),
      reference_(std::move(reference)),
      phi_(std::move(phi)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (!chart_.contains(reference_)) throw InvalidArgument("reference point outside chart");
}

double HessianModel::phi(const Vec& theta) const {
  if (!chart_.contains(theta)) throw DomainError("theta outside chart");
  return phi_(theta);
}

Vec HessianModel::eta(const Vec& theta) const {
  if (!chart_.contains(theta)) throw DomainError("theta outside chart");
  if (gradient_) return gradient_(theta);
  const FiniteDifference fd;
  Vec out(dim());
  for (int i = 0; i < dim(); ++i) {
    out(i) = directional_derivative(phi_, theta, Vec::Unit(dim(), i), fd.step_at(theta));
  }
  return out;
}

Mat HessianModel::hessian(const Vec& theta) const {
  if (!chart_.contains(theta)) throw DomainError("theta outside chart");
  if (hessian_) return hessian_(theta);
  const Mat jac = jacobian([this](const Vec& t) { return eta(t); }, theta);
  return 0.5 * (jac + jac.transpose());
}

MetricField HessianModel::metric() const {
  const HessianModel self = *this;
  return MetricField(chart_, [self](const Vec& theta) { return self.hessian(theta); });
}

Vec HessianModel::theta_from_eta(const Vec& target) const {
  Vec theta = reference_;
  for (int iter = 0; iter < 200; ++iter) {
    const Vec r = eta(theta) - target;
    if (r.norm() <= 1e-15 * std::max(1.0, target.norm())) return theta;
    const Vec step = hessian(theta).ldlt().solve(r);
    double scale = 1.0;
    Vec next = theta - step;
    while (!chart_.contains(next) && scale > 1e-12) {
      scale *= 0.5;
      next = theta - scale * step;
    }
    if (!chart_.contains(next)) break;
    if ((next - theta).norm() <= 4.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(1.0, theta.norm())) {
      return next;
    }
    theta = next;
  }
  const Vec r = eta(theta) - target;
  if (r.norm() > 1e-9 * std::max(1.0, target.norm())) {
    throw DomainError("eta is not in the image of the dual coordinate map");
  }
  return theta;
}

double HessianModel::psi(const Vec& eta_value) const {
  const Vec theta = theta_from_eta(eta_value);
  return theta.dot(eta_value) - phi(theta);
}

HessianModel HessianModel::quadratic(int dim) {
  return HessianModel(
      "quadratic", Chart::euclidean(dim), Vec::Zero(dim),
      [](const Vec& t) { return 0.5 * t.squaredNorm(); }, [](const Vec& t) -> Vec { return t; },
      [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); });
}

HessianModel HessianModel::exponential(int dim) {
  return HessianModel(
      "exponential", Chart::euclidean(dim), Vec::Zero(dim),
      [](const Vec& t) { return t.array().exp().sum(); },
      [](const Vec& t) -> Vec { return t.array().exp().matrix(); },
      [](const Vec& t) -> Mat { return t.array().exp().matrix().asDiagonal(); });
}

HessianModel HessianModel::gaussian() {
  Chart chart{2, [](const Vec& t) { return t(1) < 0.0; }};
  Vec reference(2);
  reference << 0.0, -0.5;
  return HessianModel(
      "gaussian", chart, reference,
      [](const Vec& t) {
        return -t(0) * t(0) / (4.0 * t(1)) + 0.5 * std::log(-std::numbers::pi / t(1));
      },
      [](const Vec& t) -> Vec {
        Vec e(2);
        e << -t(0) / (2.0 * t(1)), t(0) * t(0) / (4.0 * t(1) * t(1)) - 1.0 / (2.0 * t(1));
        return e;
      },
      [](const Vec& t) -> Mat {
        const double a = t(0), b = t(1);
        Mat h(2, 2);
        h(0, 0) = -1.0 / (2.0 * b);
        h(0, 1) = h(1, 0) = a / (2.0 * b * b);
        h(1, 1) = -a * a / (2.0 * b * b * b) + 1.0 / (2.0 * b * b);
        return h;
      });
}

LegendrePoint legendre_dual(const HessianModel& model, const Vec& theta) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(model.hessian(theta), Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("non-convex metric potential: Hessian is not positive definite");
  }
  const Vec eta = model.eta(theta);
  return LegendrePoint{eta, theta.dot(eta) - model.phi(theta)};
}

LegendrePoint legendre_from_dual(const HessianModel& model, const Vec& eta) {
  const FiniteDifference fd;
  const auto psi = [&model](const Vec& e) { return model.psi(e); };
  Vec theta(model.dim());
  for (int i = 0; i < model.dim(); ++i) {
    theta(i) = directional_derivative(psi, eta, Vec::Unit(model.dim(), i), fd.step_at(eta));
  }
  return LegendrePoint{theta, theta.dot(eta) - model.psi(eta)};
}

double canonical_divergence(const HessianModel& model, const Vec& p, const Vec& q) {
  const LegendrePoint dual_q = legendre_dual(model, q);
  return model.phi(p) + dual_q.potential - p.dot(dual_q.coords);
}

double dual_divergence(const HessianModel& model, const Vec& p, const Vec& q) {
  return canonical_divergence(model, q, p);
}

ScalarPotential divergence_potential(const HessianModel& model, const Vec& q) {
  const HessianModel m = model;
  const Vec base = q;
  // d/dx [psi(eta(x)) - q . eta(x)] = H(x) (x - q) by the chain rule.
  return ScalarPotential([m, base](const Vec& x) { return canonical_divergence(m, base, x); },
                         [m, base](const Vec& x) -> Vec { return m.hessian(x) * (x - base); },
                         base);
}

double fujiwara_amari_residual(const HessianModel& model, const Vec& q, const Vec& x) {
  if ((x - q).norm() <= 1e-8 * std::max(1.0, q.norm())) {
    throw CriticalPointError("Fujiwara-Amari residual undefined on the diagonal x = q");
  }
  const MetricField g = model.metric();
  const ScalarPotential dq = divergence_potential(model, q);
  const auto field = [&g, &dq](const Vec& p) -> Vec { return gradient(g, dq, p); };
  const Vec v = field(x);
  const double vn = v.norm();
  const FiniteDifference fd;
  const Vec transport = vn * directional_derivative(field, x, v / vn, fd.step_at(x));
  return (transport - v).norm() / vn;
}

}  // namespace geoflow
