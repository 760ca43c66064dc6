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

#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "geoflow/geoflow.hpp"

namespace geoflow::cli {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Vec uniform_vec(const Vec& lo, const Vec& hi) {
    Vec v(lo.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(lo(i), hi(i));
    return v;
  }
  Vec normal_vec(int n) {
    std::normal_distribution<double> d;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = d(engine_);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

struct Fixture {
  std::string name;
  MetricField g;
  ScalarPotential f;
  Vec lo, hi;
};

std::vector<Fixture> fixtures() {
  const chain::ModeSpectrum two = chain::spectrum(3);
  return {
      {"euclidean", MetricField::euclidean(2), models::euclidean_quadratic(), vec({-2, -2}), vec({2, 2})},
      {"gaussian-mode", chain::mode_metric(), chain::mode_potential(2.0), vec({0.05}), vec({6})},
      {"two-mode", chain::chain_metric(two), chain::chain_potential(two), vec({0.2, 0.1}), vec({8, 3})},
      {"sphere", models::sphere_metric(), models::sphere_height(), vec({0.1, -3}), vec({3.0, 3})},
  };
}

class Battery {
 public:
  Battery(std::string suite, std::vector<CheckResult>& out, const std::string& fault)
      : suite_(std::move(suite)), out_(out), fault_(fault) {}

  bool faulty(const std::string& name) const { return fault_ == name; }

  void below(const std::string& name, double value, double threshold) {
    out_.push_back({suite_, name, value, threshold, false, value < threshold});
  }
  void at_least(const std::string& name, double value, double threshold) {
    out_.push_back({suite_, name, value, threshold, true, value >= threshold});
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
  std::string fault_;
};

void manifold_core(Battery& b, Rng& rng, double tol) {
  double duality = 0.0, compat = 0.0, energy = 0.0;
  for (const auto& fx : fixtures()) {
    const int n = fx.g.dim();
    for (int i = 0; i < 100; ++i) {
      const Vec x = rng.uniform_vec(fx.lo, fx.hi);
      const Vec w = rng.normal_vec(n);
      const double rhs = fx.f.covector(x).dot(w);
      duality = std::max(duality, std::abs(inner(fx.g, x, gradient(fx.g, fx.f, x), w) - rhs) /
                                      std::max(std::abs(rhs), 1e-12));
    }
    const AffineConnection lc = levi_civita(fx.g);
    for (int i = 0; i < 10; ++i) {
      const Mat a = Mat::NullaryExpr(n, n, [&] { return rng.uniform(-1, 1); });
      auto vf = [a](const Vec& x) -> Vec { return a * x.array().sin().matrix(); };
      auto wf = [a](const Vec& x) -> Vec { return a.transpose() * x + x.array().square().matrix(); };
      const Vec x = rng.uniform_vec(fx.lo, fx.hi) * 0.9 + 0.05 * (fx.lo + fx.hi);
      const Vec u = rng.normal_vec(n);
      auto pairing = [&](const Vec& p) { return inner(fx.g, p, vf(p), wf(p)); };
      const double lhs = directional_derivative(pairing, x, u, 1e-4);
      const double rhs = inner(fx.g, x, covariant_derivative(lc, vf, x, u), wf(x)) +
                         inner(fx.g, x, vf(x), covariant_derivative(lc, wf, x, u));
      compat = std::max(compat, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    const Vec x0 = rng.uniform_vec(fx.lo, fx.hi) * 0.8 + 0.1 * (fx.lo + fx.hi);
    if (gradient(fx.g, fx.f, x0).norm() < 1e-6) continue;
    const Trajectory traj = integrate_flow(fx.g, fx.f, x0, 1.0, std::min(tol, 1e-11));
    for (int i = 1; i < 20; ++i) {
      const double t = traj.t_end() * i / 20.0;
      auto f_of = [&](const Vec& tv) { return fx.f(traj.position(tv(0))); };
      const double fdot = directional_derivative(f_of, vec({t}), vec({1.0}), 1e-4);
      const double speed2 = inner(fx.g, traj.position(t), traj.velocity(t), traj.velocity(t));
      if (speed2 > 1e-12) energy = std::max(energy, rel(fdot, -speed2));
    }
  }
  b.below("gradient-duality", duality, 1e-8);
  b.below("metric-compatibility", compat, 1e-6);
  b.below("energy-identity", energy, 1e-6);

  const double tilt = rng.uniform(0.2, 1.3);
  const AffineConnection sphere = levi_civita(models::sphere_metric());
  const Trajectory gc = integrate_geodesic(sphere, vec({std::numbers::pi / 2, 0.0}),
                                           vec({std::cos(tilt), std::sin(tilt)}), std::numbers::pi, tol);
  double residual = 0.0;
  for (int i = 1; i < 50; ++i) {
    residual = std::max(residual, covariant_acceleration(sphere, gc, std::numbers::pi * i / 50.0).norm());
  }
  b.below("geodesic-residual", residual, 10 * tol);
  b.below("geodesic-antipode",
          (gc.position(std::numbers::pi) - vec({std::numbers::pi / 2, std::numbers::pi})).norm(), 1e-6);

  const Vec x = vec({0.9, 0.4});
  const ChristoffelSymbols exact = christoffel_levi_civita(models::sphere_metric(), x);
  double worst_ratio = INFINITY, previous = 0.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const double err =
        (christoffel_levi_civita(models::sphere_metric().with_finite_differences({4, h}), x) - exact)
            .max_abs();
    if (previous > 0.0) worst_ratio = std::min(worst_ratio, previous / err);
    previous = err;
  }
  b.at_least("fd-step-convergence", worst_ratio, 3.5);

  const chain::ModeSpectrum s = chain::spectrum(4);
  double flow_err = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    const double l = s.lambdas[static_cast<std::size_t>(k)];
    const double temp = rng.uniform(0.2, 4.0);
    const Trajectory traj =
        integrate_flow(chain::mode_metric(), chain::mode_potential(l), vec({2 * temp / l}), 5 / l, 1e-12);
    for (int i = 0; i <= 10; ++i) {
      const double t = 0.5 * i / l;
      flow_err = std::max(flow_err, rel(traj.position(t)(0), chain::analytic_variance(s, k, temp, t)));
    }
  }
  b.below("flow-closed-form", flow_err, 1e-8);
}

void straightening(Battery& b, Rng& rng, double tol) {
  double pregeo = 0.0, closed = 0.0, chain_err = 0.0, consistency = 0.0;
  for (const auto& fx : fixtures()) {
    const int n = fx.g.dim();
    for (double lambda : {0.0, 1.0}) {
      const StraighteningConnection conn(fx.g, fx.f, lambda);
      const AffineConnection ac = conn.connection();
      for (int i = 0; i < 100; ++i) pregeo = std::max(pregeo, conn.pregeodesic_residual(rng.uniform_vec(fx.lo, fx.hi)));
      for (int i = 0; i < 20; ++i) {
        const Vec x = rng.uniform_vec(fx.lo, fx.hi);
        const Vec w = rng.normal_vec(n), u = rng.normal_vec(n), v = rng.normal_vec(n);
        double want = conn.nonmetricity_closed_form(x, w, u, v);
        if (b.faulty("nonmetricity-sign")) want = -want;
        const double got = nonmetricity(ac, fx.g, x, w, u, v);
        const double scale = std::max(std::abs(want), fx.g(x).squaredNorm() * conn.z(x).norm() *
                                                           w.norm() * u.norm() * v.norm());
        closed = std::max(closed, std::abs(got - want) / scale);
      }
    }
    const Trajectory traj = integrate_flow(fx.g, fx.f, rng.uniform_vec(fx.lo, fx.hi), 1.0, std::min(tol, 1e-12));
    for (double lambda : {0.0, 1.0}) {
      const StraighteningConnection conn(fx.g, fx.f, lambda);
      for (double t : {0.15, 0.5, 0.85}) {
        const double h = 5e-3;
        auto ft = [&](double s) { return fx.f(traj.position(s)); };
        const double fdd = (-ft(t + 2 * h) + 16 * ft(t + h) - 30 * ft(t) + 16 * ft(t - h) -
                            ft(t - 2 * h)) / (12 * h * h);
        const Vec x = traj.position(t);
        const double fd = fx.f.covector(x).dot(traj.velocity(t));
        const double c = nonmetricity_cubic(fx.g, lambda, traj, t);
        const double scale = std::max({std::abs(fdd), std::abs(c), std::abs(2 * lambda * fd), 1e-12});
        chain_err = std::max(chain_err, std::abs(fdd + c + 2 * lambda * fd) / scale);
        const Vec grad = gradient(fx.g, fx.f, x);
        const Vec acc = covariant_acceleration(conn.connection(), traj, t);
        consistency = std::max(consistency, (acc - lambda * grad).norm() / std::max(1.0, grad.norm()));
      }
    }
  }
  b.below("pregeodesic-residual", pregeo, 1e-8);
  b.below("nonmetricity-closed-form", closed, 1e-8);
  b.below("identity-chain", chain_err, 1e-5);
  b.below("lambda-consistency", consistency, 1e-7);

  const chain::ModeSpectrum two = chain::spectrum(3);
  const MetricField g2 = chain::chain_metric(two);
  const StraighteningConnection s2(g2, chain::chain_potential(two));
  const Vec x2 = vec({rng.uniform(2.5, 4.0), rng.uniform(0.2, 0.5)});
  const Vec e1 = vec({1, 0}), e2 = vec({0, 1});
  b.at_least("nonmetricity-asymmetry",
             std::abs(nonmetricity(s2.connection(), g2, x2, e1, e2, e1) -
                      nonmetricity(s2.connection(), g2, x2, e2, e1, e1)),
             1e-3);

  const MetricField sphere = models::sphere_metric();
  b.below("curvature-sphere",
          std::abs(scalar_curvature(levi_civita(sphere), sphere, vec({rng.uniform(0.3, 2.8), 0.0})) - 2.0),
          1e-6);
  const chain::ModeSpectrum one = chain::spectrum(2);
  const MetricField gm = chain::mode_metric_with_mean();
  const StraighteningConnection sm(gm, chain::mode_potential_with_mean(one.lambdas[0]));
  b.below("curvature-two-a-star",
          std::abs(scalar_curvature(sm.connection(), gm, vec({0.0, 2 * one.a_star[0]}),
                                    RicciConvention::SecondIndex) + 6.0),
          6e-4);

  const ScalarPotential f2 = chain::chain_potential(two);
  const Submanifold slice{1, [](const Vec& u) { return vec({3.0, u(0)}); }};
  const Vec u_hat = constrained_minimize(g2, f2, slice, vec({rng.uniform(0.3, 3.0)}));
  const Submanifold line{1, [](const Vec& u) { return vec({1.0, u(0)}); }};
  const Vec u_line = constrained_minimize(MetricField::euclidean(2), models::euclidean_quadratic(), line,
                                          vec({rng.uniform(-2.0, 2.0)}));
  b.below("projection-orthogonality",
          std::max(projection_orthogonality(g2, f2, slice, u_hat).residual,
                   projection_orthogonality(MetricField::euclidean(2), models::euclidean_quadratic(),
                                            line, u_line)
                       .residual),
          1e-6);
  b.at_least("projection-negative-control", projection_orthogonality(g2, f2, slice, vec({2.0})).residual,
             0.1);
}

void gradient_flow(Battery& b, Rng& rng, double tol) {
  const MetricField g = chain::mode_metric();
  const ScalarPotential f = chain::mode_potential(2.0);
  const EquidistantPair pair = equidistant_seed(g, f, f(vec({rng.uniform(1.5, 4.0)})), vec({-1.0}), vec({1.0}));
  CompareOptions opt;
  opt.tol = tol;
  const AsymmetryReport r = compare(g, f, 0.0, pair, opt);
  b.below("endpoint-start", std::abs(r.delta_f.front()), 1e-9);
  b.below("endpoint-converged", r.converged ? std::abs(r.delta_f.back()) : INFINITY, 10 * tol);
  b.below("verdict-soundness",
          r.verdict == Verdict::Curve1Faster ? std::max(0.0, -r.min_delta_f()) : INFINITY, 1e-9);
  double speed_gap = 0.0, sign_mismatch = 0.0;
  for (const auto& c : r.coincidences) {
    speed_gap = std::max(speed_gap, std::abs(c.speed1 * c.speed1 - c.speed2 * c.speed2));
    const double h = 1e-3;
    const double d2 = (r.delta_f_at(f, c.t + h) - 2 * r.delta_f_at(f, c.t) + r.delta_f_at(f, c.t - h)) / (h * h);
    if (std::signbit(d2) != std::signbit(-c.gap())) sign_mismatch += 1;
  }
  b.at_least("coincidences-found", static_cast<double>(r.coincidences.size()), 1.0);
  b.below("coincidence-speed-match", speed_gap, 1e-8);
  b.below("coincidence-curvature-sign-mismatches", sign_mismatch, 0.5);

  CompareOptions half = opt;
  half.tol = 0.5 * tol;
  b.below("tolerance-halving-verdict-changes", compare(g, f, 0.0, pair, half).verdict == r.verdict ? 0.0 : 1.0, 0.5);

  double symmetric = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ScalarPotential d = models::distance_squared(vec({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    const double level = rng.uniform(0.1, 2.0);
    const EquidistantPair p = equidistant_seed(MetricField::euclidean(2), d, level, rng.normal_vec(2), rng.normal_vec(2));
    symmetric = std::max(symmetric, compare(MetricField::euclidean(2), d, 0.0, p, opt).max_abs_delta_f() / level);
  }
  b.below("distance-potential-symmetry", symmetric, 1e-7);
}

void fujiwara_amari(Battery& b, Rng& rng, double) {
  double involution = 0.0, consistency = 0.0, positivity = 0.0;
  for (const HessianModel& m : {HessianModel::quadratic(2), HessianModel::exponential(2), HessianModel::gaussian()}) {
    const bool gauss = m.name() == "gaussian";
    const Vec lo = gauss ? vec({-2, -3}) : vec({-2, -2});
    const Vec hi = gauss ? vec({2, -0.2}) : vec({2, 2});
    const MetricField g = m.metric();
    double fa = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec theta = rng.uniform_vec(lo, hi);
      const LegendrePoint dual = legendre_dual(m, theta);
      const LegendrePoint back = legendre_from_dual(m, dual.coords);
      involution = std::max({involution, (back.coords - theta).norm() / std::max(1.0, theta.norm()),
                             std::abs(back.potential - m.phi(theta)) / std::max(1.0, std::abs(m.phi(theta)))});
      const Mat fd = jacobian([&m](const Vec& t) { return m.eta(t); }, theta);
      consistency = std::max(consistency, (fd - g(theta)).norm() / g(theta).norm());
      const Vec q = rng.uniform_vec(lo, hi);
      if (!(canonical_divergence(m, theta, q) > 0.0)) positivity += 1;
      if (std::abs(canonical_divergence(m, theta, theta)) > 1e-10) positivity += 1;
      if ((q - theta).norm() > 0.05) fa = std::max(fa, fujiwara_amari_residual(m, q, theta));
    }
    b.below("residual-" + m.name(), fa, 1e-6);
  }
  b.below("legendre-involution", involution, 1e-8);
  b.below("hessian-metric-consistency", consistency, 1e-8);
  b.below("divergence-positivity-violations", positivity, 0.5);
}

void gaussian_chain(Battery& b, Rng& rng, double tol) {
  double spec = 0.0;
  for (int n : {2, 3, 6, 11, 33, 65}) {
    const chain::ModeSpectrum s = chain::spectrum(n);
    for (int k = 1; k < n; ++k) {
      spec = std::max(spec, std::abs(s.lambdas[static_cast<std::size_t>(k - 1)] -
                                     2.0 * (1.0 - std::cos(k * std::numbers::pi / n))));
    }
  }
  b.below("spectrum-closed-form", spec, 1e-12);

  const chain::ModeSpectrum s = chain::spectrum(9);
  const MetricField g = chain::chain_metric(s);
  const ScalarPotential f = chain::chain_potential(s);
  double identity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec a = rng.uniform_vec(Vec::Constant(s.size(), 0.05), Vec::Constant(s.size(), 20.0));
    const Vec lhs = -gradient(g, f, a);
    const Vec rhs = chain::ode_rhs(s, a);
    for (int k = 0; k < s.size(); ++k) identity = std::max(identity, rel(lhs(k), rhs(k)));
  }
  b.below("gradient-flow-identity", identity, 1e-10);

  double ode = 0.0;
  const double horizon = 5.0 / s.lambdas.front();
  for (double temp : {0.25, 0.5, 2.0, 4.0}) {
    const Trajectory traj = integrate_flow(g, f, chain::initial_state(s, temp), horizon, 1e-12);
    for (int i = 0; i <= 50; ++i) {
      const double t = horizon * i / 50.0;
      const Vec got = traj.position(t);
      const Vec want = chain::analytic_variances(s, temp, t);
      for (int k = 0; k < s.size(); ++k) ode = std::max(ode, rel(got(k), want(k)));
    }
  }
  b.below("ode-closed-form", ode, 1e-8);

  double cubic = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double temp = rng.uniform(0.2, 5.0);
    const double span = 2.0 / s.lambdas[kk];
    const Trajectory traj = integrate_flow(chain::mode_metric(), chain::mode_potential(s.lambdas[kk]),
                                           vec({s.a_star[kk] * temp}), span, 1e-12);
    const double t = rng.uniform(0.0, span);
    Vec a = chain::analytic_variances(s, temp, t);
    a(k) = traj.position(t)(0);
    cubic = std::max(cubic, rel(-nonmetricity_cubic(chain::mode_metric(), 0.0, traj, t),
                                chain::cubic_closed_form(s, a, k)));
  }
  b.below("cubic-cross-validation", cubic, 1e-6);

  const MetricField gm = chain::mode_metric_with_mean();
  double curv = 0.0;
  for (int k = 0; k < s.size(); k += 3) {
    const auto kk = static_cast<std::size_t>(k);
    const StraighteningConnection conn(gm, chain::mode_potential_with_mean(s.lambdas[kk]));
    for (int i = 0; i < 6; ++i) {
      const double ratio = i % 2 ? rng.uniform(0.2, 0.8) : rng.uniform(1.2, 5.0);
      const double a = ratio * s.a_star[kk];
      const double want = chain::scalar_curvature_mode(s, k, a);
      const double got = scalar_curvature(conn.connection(), gm, vec({0.0, a}), RicciConvention::SecondIndex);
      curv = std::max(curv, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  b.below("curvature-cross-validation", curv, 1e-4);

  double equi = 0.0;
  for (int n : {2, 5, 17, 65}) {
    const chain::ModeSpectrum sn = chain::spectrum(n);
    const double tp = rng.uniform(1.05, 8.0);
    const double fp = chain::potential_F(sn, chain::initial_state(sn, tp));
    const double fm = chain::potential_F(sn, chain::initial_state(sn, chain::equidistant_temperatures(tp)));
    equi = std::max(equi, std::abs(fp - fm) / fp);
  }
  b.below("equidistance", equi, 1e-10);

  double order = 0.0;
  const double tp = rng.uniform(1.1, 8.0);
  const double tm = chain::equidistant_temperatures(tp);
  for (int k = 0; k < s.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.25 * i / s.lambdas[kk];
      if (!(chain::analytic_variance(s, k, tm, t) < s.a_star[kk])) order += 1;
      if (!(chain::analytic_variance(s, k, tp, t) > s.a_star[kk])) order += 1;
    }
  }
  b.below("order-relation-violations", order, 0.5);

  CompareOptions opt;
  opt.tol = tol;
  double failures = 0.0;
  for (int modes : {1, 2, 5, 10}) {
    const chain::ChainExperiment e = chain::universal_asymmetry_experiment(modes + 1, rng.uniform(1.1, 8.0), opt);
    const std::size_t mid = e.chain.times.size() / 2;
    if (!e.warming_faster() || e.chain.min_delta_f() < -1e-9 || !(e.chain.delta_f[mid] > 0.0)) failures += 1;
  }
  b.below("asymmetry-sweep-failures", failures, 0.5);
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"manifold-core", "straightening", "gradient-flow",
                                                 "fujiwara-amari", "gaussian-chain"};
  return names;
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& suites, std::uint64_t seed, double tol,
                                    const std::string& fault) {
  using Runner = void (*)(Battery&, Rng&, double);
  const std::vector<std::pair<std::string, Runner>> all = {
      {"manifold-core", manifold_core},   {"straightening", straightening},
      {"gradient-flow", gradient_flow},   {"fujiwara-amari", fujiwara_amari},
      {"gaussian-chain", gaussian_chain},
  };
  std::vector<CheckResult> out;
  std::uint64_t offset = 0;
  for (const auto& [name, run] : all) {
    ++offset;
    if (!suites.empty() && std::find(suites.begin(), suites.end(), name) == suites.end()) continue;
    Battery battery(name, out, fault);
    Rng rng(seed * 1000003ULL + offset);
    run(battery, rng, tol);
  }
  return out;
}

}  // namespace geoflow::cli
