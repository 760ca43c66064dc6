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

// Charts, metrics, potentials and affine connections on a single global
// coordinate patch, plus the Levi-Civita connection and gradients.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geoflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Central-difference policy used wherever an analytic derivative is absent.
///
/// The default step is (machine epsilon)^(1/3) * max(1, |x|_inf); order 4
/// uses the five-point stencil, order 2 the three-point one.
struct FiniteDifference {
  int order = 4;
  std::optional<double> step;

  double step_at(const Vec& x) const;
  /// True when the step is so small that roundoff dominates
  /// (h < 1e3 * eps * |x|).
  bool step_too_small(const Vec& x) const;
};

/// d/ds fn(x + s*direction) at s = 0.
template <typename Fn>
auto directional_derivative(const Fn& fn, const Vec& x, const Vec& direction,
                            double h, int order = 4) -> decltype(fn(x)) {
  if (order == 2) {
    return (fn(x + h * direction) - fn(x - h * direction)) / (2.0 * h);
  }
  const auto fp1 = fn(x + h * direction);
  const auto fm1 = fn(x - h * direction);
  const auto fp2 = fn(x + 2.0 * h * direction);
  const auto fm2 = fn(x - 2.0 * h * direction);
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

/// Jacobian of a vector field, J(k, i) = d field_k / d x_i.
Mat jacobian(const std::function<Vec(const Vec&)>& field, const Vec& x,
             const FiniteDifference& fd = {});

/// A single global coordinate patch.
struct Chart {
  int dim = 1;
  std::function<bool(const Vec&)> domain_check;

  bool contains(const Vec& x) const;
  /// Whole of R^dim.
  static Chart euclidean(int dim);
};

/// Position-dependent symmetric positive-definite bilinear form g_ij.
class MetricField {
 public:
  using Eval = std::function<Mat(const Vec&)>;
  /// Returns [d_0 g, d_1 g, ...], each a dim x dim matrix.
  using Derivative = std::function<std::vector<Mat>(const Vec&)>;

  MetricField(Chart chart, Eval eval, Derivative derivative = {},
              FiniteDifference fd = {});

  int dim() const { return chart_.dim; }
  const Chart& chart() const { return chart_; }
  const FiniteDifference& finite_difference() const { return fd_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  Mat operator()(const Vec& x) const;
  std::vector<Mat> derivatives(const Vec& x) const;

  /// Same metric with analytic derivatives dropped in favour of `fd`.
  MetricField with_finite_differences(FiniteDifference fd) const;

  /// Throws DomainError unless g(x) is symmetric to 1e-12 and all of its
  /// eigenvalues are positive. Not called on every evaluation.
  void check_positive_definite(const Vec& x) const;

  static MetricField euclidean(int dim);

 private:
  Chart chart_;
  Eval eval_;
  Derivative derivative_;
  FiniteDifference fd_;
};

/// Smooth function with a designated unique minimum.
class ScalarPotential {
 public:
  using Value = std::function<double(const Vec&)>;
  /// Covector of partial derivatives d_i f.
  using Covector = std::function<Vec(const Vec&)>;

  ScalarPotential(Value value, Covector covector, Vec minimum,
                  FiniteDifference fd = {});
  ScalarPotential(Value value, Vec minimum, FiniteDifference fd = {})
      : ScalarPotential(std::move(value), Covector{}, std::move(minimum), fd) {}

  double operator()(const Vec& x) const { return value_(x); }
  Vec covector(const Vec& x) const;

  const Vec& minimum() const { return minimum_; }
  double min_value() const { return min_value_; }
  bool has_analytic_covector() const { return static_cast<bool>(covector_); }

 private:
  Value value_;
  Covector covector_;
  Vec minimum_;
  double min_value_;
  FiniteDifference fd_;
};

/// Connection coefficients Gamma^k_ij at one point.
class ChristoffelSymbols {
 public:
  explicit ChristoffelSymbols(int dim)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }

  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  /// Gamma^k_ij u^i v^j.
  Vec contract(const Vec& u, const Vec& v) const;
  /// Largest |Gamma^k_ij - Gamma^k_ji|.
  double asymmetry() const;

  ChristoffelSymbols& operator+=(const ChristoffelSymbols& other);
  ChristoffelSymbols& operator-=(const ChristoffelSymbols& other);
  ChristoffelSymbols& operator*=(double s);
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }

  int dim_;
  std::vector<double> data_;
};

ChristoffelSymbols operator-(ChristoffelSymbols a, const ChristoffelSymbols& b);

/// Coefficient field of an affine connection over a chart.
struct AffineConnection {
  Chart chart;
  std::function<ChristoffelSymbols(const Vec&)> coeffs;
  bool symmetric = true;
  std::string name;

  int dim() const { return chart.dim; }
  ChristoffelSymbols operator()(const Vec& x) const { return coeffs(x); }
};

/// Inverse metric g^{ij}(x). Throws SingularMatrixError when the condition
/// number exceeds 1e12.
Mat metric_inverse(const MetricField& g, const Vec& x);
Mat checked_inverse(const Mat& m);

double inner(const MetricField& g, const Vec& x, const Vec& u, const Vec& v);
double norm(const MetricField& g, const Vec& x, const Vec& u);

/// Riemannian gradient g^{ij} d_j f.
Vec gradient(const MetricField& g, const ScalarPotential& f, const Vec& x);

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelSymbols christoffel_levi_civita(const MetricField& g, const Vec& x);

AffineConnection levi_civita(const MetricField& g);

/// The zero connection on a chart (straight lines are geodesics).
AffineConnection flat_connection(const Chart& chart);

/// Covariant derivative of the vector field `field` along `direction` at x:
/// (d field^k/dx^i) direction^i + Gamma^k_ij direction^i field^j.
Vec covariant_derivative(const AffineConnection& conn,
                         const std::function<Vec(const Vec&)>& field,
                         const Vec& x, const Vec& direction,
                         const FiniteDifference& fd = {});

}  // namespace geoflow
