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

#include "geoflow/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMaxCondition = 1e12;

double scale_of(const Vec& x) {
  return std::max(1.0, x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0);
}

}  // namespace

double FiniteDifference::step_at(const Vec& x) const {
  if (step) return *step;
  return std::cbrt(kEps) * scale_of(x);
}

bool FiniteDifference::step_too_small(const Vec& x) const {
  const double xnorm = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return step_at(x) < 1e3 * kEps * xnorm;
}

Mat jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
             const FiniteDifference& fd) {
  const double h = fd.step_at(x);
  const Vec f0 = field(x);
  Mat jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Vec e = Vec::Unit(x.size(), i);
    jac.col(i) = directional_derivative(field, x, e, h, fd.order);
  }
  return jac;
}

bool Chart::contains(const Vec& x) const {
  if (x.size() != dim) return false;
  if (!x.allFinite()) return false;
  return !domain_check || domain_check(x);
}

Chart Chart::euclidean(int dim) { return Chart{dim, {}}; }

MetricField::MetricField(Chart chart, Eval eval, Derivative derivative,
                         FiniteDifference fd)
    : chart_(std::move(chart)),
      eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      fd_(fd) {
  if (chart_.dim < 1) throw InvalidArgument("chart dimension must be >= 1");
}

Mat MetricField::operator()(const Vec& x) const {
  if (!chart_.contains(x)) throw DomainError("metric evaluated outside chart");
  return eval_(x);
}

std::vector<Mat> MetricField::derivatives(const Vec& x) const {
  if (!chart_.contains(x)) throw DomainError("metric evaluated outside chart");
  if (derivative_) return derivative_(x);
  if (fd_.step_too_small(x)) {
    std::clog << "geoflow: warning: finite-difference step " << fd_.step_at(x)
              << " is below roundoff resolution at this point\n";
  }
  const double h = fd_.step_at(x);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    out.push_back(directional_derivative(eval_, x, Vec::Unit(dim(), i), h,
                                         fd_.order));
  }
  return out;
}

MetricField MetricField::with_finite_differences(FiniteDifference fd) const {
  return MetricField(chart_, eval_, {}, fd);
}

void MetricField::check_positive_definite(const Vec& x) const {
  const Mat g = (*this)(x);
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    std::ostringstream msg;
    msg << "metric not symmetric (asymmetry " << asym << ")";
    throw DomainError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("metric not positive definite");
  }
}

MetricField MetricField::euclidean(int dim) {
  return MetricField(
      Chart::euclidean(dim), [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); },
      [dim](const Vec&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); });
}

ScalarPotential::ScalarPotential(Value value, Covector covector, Vec minimum,
                                 FiniteDifference fd)
    : value_(std::move(value)),
      covector_(std::move(covector)),
      minimum_(std::move(minimum)),
      min_value_(value_(minimum_)),
      fd_(fd) {}

Vec ScalarPotential::covector(const Vec& x) const {
  if (covector_) return covector_(x);
  const double h = fd_.step_at(x);
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out(i) = directional_derivative(value_, x, Vec::Unit(x.size(), i), h, fd_.order);
  }
  return out;
}

Vec ChristoffelSymbols::contract(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) acc += (*this)(k, i, j) * u(i) * v(j);
    }
    out(k) = acc;
  }
  return out;
}

double ChristoffelSymbols::asymmetry() const {
  double worst = 0.0;
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i + 1; j < dim_; ++j) {
        worst = std::max(worst, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
      }
    }
  }
  return worst;
}

ChristoffelSymbols& ChristoffelSymbols::operator+=(const ChristoffelSymbols& other) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

ChristoffelSymbols& ChristoffelSymbols::operator-=(const ChristoffelSymbols& other) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

ChristoffelSymbols& ChristoffelSymbols::operator*=(double s) {
  for (double& d : data_) d *= s;
  return *this;
}

double ChristoffelSymbols::max_abs() const {
  double worst = 0.0;
  for (double d : data_) worst = std::max(worst, std::abs(d));
  return worst;
}

ChristoffelSymbols operator-(ChristoffelSymbols a, const ChristoffelSymbols& b) {
  a -= b;
  return a;
}

Mat checked_inverse(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(m);
  if (eig.info() != Eigen::Success) throw SingularMatrixError("eigen-decomposition failed");
  const Vec& ev = eig.eigenvalues();
  const double lo = ev.cwiseAbs().minCoeff();
  const double hi = ev.cwiseAbs().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    std::ostringstream msg;
    msg << "matrix condition number exceeds " << kMaxCondition;
    throw SingularMatrixError(msg.str());
  }
  const Mat& q = eig.eigenvectors();
  return q * ev.cwiseInverse().asDiagonal() * q.transpose();
}

Mat metric_inverse(const MetricField& g, const Vec& x) { return checked_inverse(g(x)); }

double inner(const MetricField& g, const Vec& x, const Vec& u, const Vec& v) {
  return u.dot(g(x) * v);
}

double norm(const MetricField& g, const Vec& x, const Vec& u) {
  return std::sqrt(std::max(0.0, inner(g, x, u, u)));
}

Vec gradient(const MetricField& g, const ScalarPotential& f, const Vec& x) {
  return metric_inverse(g, x) * f.covector(x);
}

ChristoffelSymbols christoffel_levi_civita(const MetricField& g, const Vec& x) {
  const int n = g.dim();
  const Mat ginv = metric_inverse(g, x);
  const std::vector<Mat> dg = g.derivatives(x);
  // First kind: Gamma_{ijl} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  ChristoffelSymbols out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vec first(n);
      for (int l = 0; l < n; ++l) {
        first(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      }
      const Vec second = ginv * first;
      for (int k = 0; k < n; ++k) {
        out(k, i, j) = second(k);
        out(k, j, i) = second(k);
      }
    }
  }
  return out;
}

AffineConnection levi_civita(const MetricField& g) {
  return AffineConnection{
      g.chart(), [g](const Vec& x) { return christoffel_levi_civita(g, x); }, true,
      "levi-civita"};
}

AffineConnection flat_connection(const Chart& chart) {
  const int n = chart.dim;
  return AffineConnection{chart, [n](const Vec&) { return ChristoffelSymbols(n); }, true,
                          "flat"};
}

Vec covariant_derivative(const AffineConnection& conn,
                         const std::function<Vec(const Vec&)>& field, const Vec& x,
                         const Vec& direction, const FiniteDifference& fd) {
  const double dn = direction.norm();
  Vec out = Vec::Zero(x.size());
  if (dn > 0.0) {
    const Vec unit = direction / dn;
    out = dn * directional_derivative(field, x, unit, fd.step_at(x), fd.order);
  }
  return out + conn(x).contract(direction, field(x));
}

}  // namespace geoflow
