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

#include "geoflow/gaussian_chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow::chain {

namespace {

bool all_positive(const Vec& a) { return (a.array() > 0.0).all(); }

void require_positive(const Vec& a) {
  if (!all_positive(a)) throw DomainError("mode variances must be positive");
}

double u_minus_log(double u) { return u - std::log(u); }

}  // namespace

void ChainSpec::validate() const {
  if (n_beads < 2) throw InvalidArgument("a chain needs at least 2 beads");
  if (!(t_tilde > 0.0) || !std::isfinite(t_tilde)) {
    throw InvalidArgument("temperature ratio must be positive");
  }
}

Vec ModeSpectrum::a_star_vec() const {
  return Eigen::Map<const Vec>(a_star.data(), static_cast<Eigen::Index>(a_star.size()));
}

ModeSpectrum spectrum(int n_beads) {
  if (n_beads < 2) throw InvalidArgument("a chain needs at least 2 beads");
  const int n = n_beads;
  Mat lap = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    lap(i, i) += 1.0;
    lap(i + 1, i + 1) += 1.0;
    lap(i, i + 1) = lap(i + 1, i) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(lap, Eigen::EigenvaluesOnly);
  ModeSpectrum out;
  // Eigenvalues come sorted ascending; the first is the centre-of-mass mode.
  for (int i = 1; i < n; ++i) {
    const double l = eig.eigenvalues()(i);
    out.lambdas.push_back(l);
    out.a_star.push_back(2.0 / l);
  }
  return out;
}

double analytic_variance(const ModeSpectrum& s, int k, double t_tilde, double t) {
  const double l = s.lambdas.at(static_cast<std::size_t>(k));
  return 2.0 * (1.0 + (t_tilde - 1.0) * std::exp(-2.0 * l * t)) / l;
}

Vec analytic_variances(const ModeSpectrum& s, double t_tilde, double t) {
  Vec a(s.size());
  for (int k = 0; k < s.size(); ++k) a(k) = analytic_variance(s, k, t_tilde, t);
  return a;
}

Vec initial_state(const ModeSpectrum& s, double t_tilde) { return t_tilde * s.a_star_vec(); }

Vec ode_rhs(const ModeSpectrum& s, const Vec& a) {
  require_positive(a);
  Vec out(s.size());
  for (int k = 0; k < s.size(); ++k) {
    out(k) = -2.0 * s.lambdas[static_cast<std::size_t>(k)] * (a(k) - s.a_star[static_cast<std::size_t>(k)]);
  }
  return out;
}

double mode_kl(double a_star, double a) {
  if (!(a > 0.0)) throw DomainError("variance must be positive");
  const double r = a_star / a;
  return 0.5 * (r - std::log(r) - 1.0);
}

double potential_mode(const ModeSpectrum& s, int k, double a) {
  const auto i = static_cast<std::size_t>(k);
  return 2.0 * s.lambdas.at(i) * mode_kl(s.a_star.at(i), a);
}

double potential_F(const ModeSpectrum& s, const Vec& a) {
  require_positive(a);
  double total = 0.0;
  for (int k = 0; k < s.size(); ++k) total += potential_mode(s, k, a(k));
  return total;
}

double fisher_block(double a) {
  if (!(a > 0.0)) throw DomainError("variance must be positive");
  return 1.0 / (2.0 * a * a);
}

MetricField chain_metric(const ModeSpectrum& s) {
  const int n = s.size();
  Chart chart{n, all_positive};
  return MetricField(
      chart,
      [](const Vec& a) -> Mat { return (0.5 * a.array().square().inverse()).matrix().asDiagonal(); },
      [n](const Vec& a) {
        std::vector<Mat> d(static_cast<std::size_t>(n), Mat::Zero(n, n));
        for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)](k, k) = -1.0 / (a(k) * a(k) * a(k));
        return d;
      });
}

ScalarPotential chain_potential(const ModeSpectrum& s) {
  return ScalarPotential([s](const Vec& a) { return potential_F(s, a); },
                         [s](const Vec& a) -> Vec {
                           Vec out(s.size());
                           for (int k = 0; k < s.size(); ++k) {
                             const auto i = static_cast<std::size_t>(k);
                             out(k) = s.lambdas[i] * (a(k) - s.a_star[i]) / (a(k) * a(k));
                           }
                           return out;
                         },
                         s.a_star_vec());
}

MetricField mode_metric() {
  ModeSpectrum unit;
  unit.lambdas = {1.0};
  unit.a_star = {2.0};
  return chain_metric(unit);
}

ScalarPotential mode_potential(double lambda) {
  ModeSpectrum one;
  one.lambdas = {lambda};
  one.a_star = {2.0 / lambda};
  return chain_potential(one);
}

MetricField mode_metric_with_mean() {
  Chart chart{2, [](const Vec& x) { return x(1) > 0.0; }};
  return MetricField(
      chart,
      [](const Vec& x) -> Mat {
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = 2.0 / x(1);
        g(1, 1) = 0.5 / (x(1) * x(1));
        return g;
      },
      [](const Vec& x) {
        std::vector<Mat> d(2, Mat::Zero(2, 2));
        d[1](0, 0) = -2.0 / (x(1) * x(1));
        d[1](1, 1) = -1.0 / (x(1) * x(1) * x(1));
        return d;
      });
}

ScalarPotential mode_potential_with_mean(double lambda) {
  const double a_star = 2.0 / lambda;
  Vec minimum(2);
  minimum << 0.0, a_star;
  return ScalarPotential(
      [lambda, a_star](const Vec& x) {
        const double r = a_star / x(1);
        return lambda * (r - std::log(r) - 1.0);
      },
      [lambda, a_star](const Vec& x) -> Vec {
        Vec out(2);
        out << 0.0, lambda * (x(1) - a_star) / (x(1) * x(1));
        return out;
      },
      minimum);
}

double cubic_closed_form(const ModeSpectrum& s, const Vec& a, int k) {
  require_positive(a);
  const auto i = static_cast<std::size_t>(k);
  const double l = s.lambdas.at(i);
  const double rate = -2.0 * l * (a(k) - s.a_star[i]);
  const double rel = rate / a(k);
  return 2.0 * l * (s.a_star[i] / a(k)) * rel * rel;
}

double scalar_curvature_mode(const ModeSpectrum& s, int k, double a) {
  const double as = s.a_star.at(static_cast<std::size_t>(k));
  if (!(a > 0.0)) throw DomainError("variance must be positive");
  if (std::abs(a - as) < 1e-6 * as) {
    throw SingularityError("scalar curvature diverges at a = a*");
  }
  const double d = a - as;
  return a * (a - 5.0 * as) / (d * d);
}

double equidistant_temperatures(double t_plus) {
  if (!(t_plus > 1.0) || !std::isfinite(t_plus)) {
    throw InvalidArgument("cooling temperature ratio must exceed 1");
  }
  const double level = 1.0 / t_plus + std::log(t_plus);
  // u - ln u >= u / 2 for all u > 0, so 2 * level brackets the root.
  double lo = 1.0;
  double hi = 2.0 * level;
  while (hi - lo > 0.0) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (u_minus_log(mid) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double u = std::abs(u_minus_log(lo) - level) <= std::abs(u_minus_log(hi) - level) ? lo : hi;
  return 1.0 / u;
}

bool ChainExperiment::warming_faster() const {
  if (chain.verdict != Verdict::Curve1Faster) return false;
  return std::all_of(modes.begin(), modes.end(),
                     [](const AsymmetryReport& r) { return r.verdict == Verdict::Curve1Faster; });
}

ChainExperiment universal_asymmetry_experiment(int n_beads, double t_plus,
                                               const CompareOptions& options) {
  ChainSpec{n_beads, t_plus}.validate();
  if (t_plus < 1.0) throw InvalidArgument("cooling temperature ratio must be >= 1");

  ChainExperiment out;
  out.t_plus = t_plus;
  out.t_minus = t_plus == 1.0 ? 1.0 : equidistant_temperatures(t_plus);
  out.spectrum = spectrum(n_beads);
  const ModeSpectrum& s = out.spectrum;

  const MetricField g = chain_metric(s);
  const ScalarPotential f = chain_potential(s);
  const Vec cooling = initial_state(s, out.t_plus);
  const Vec warming = initial_state(s, out.t_minus);
  const EquidistantPair pair{warming, cooling, f(cooling)};

  // Chain and modes are independent comparisons; the chain runs alongside
  // the per-mode jobs.
  out.modes.resize(static_cast<std::size_t>(s.size()));
  CompareOptions inner = options;
  inner.concurrent = false;
  parallel_for(static_cast<std::size_t>(s.size()) + 1, [&](std::size_t job) {
    if (job == 0) {
      out.chain = compare(g, f, 0.0, pair, inner);
      return;
    }
    const double l = s.lambdas[job - 1];
    const double as = s.a_star[job - 1];
    const MetricField gk = mode_metric();
    const ScalarPotential fk = mode_potential(l);
    Vec wk(1), ck(1);
    wk << out.t_minus * as;
    ck << out.t_plus * as;
    out.modes[job - 1] = compare(gk, fk, 0.0, EquidistantPair{wk, ck, fk(ck)}, inner);
  });
  return out;
}

}  // namespace geoflow::chain
