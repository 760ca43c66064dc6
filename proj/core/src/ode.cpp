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

#include "geoflow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense output.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const OdeOptions& opt) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = err(i) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

// Hairer & Wanner's starting step heuristic.
double initial_step(const OdeRhs& rhs, double t0, const Vec& y0, const Vec& f0, double span,
                    const OdeOptions& opt) {
  Vec sc = (opt.atol + opt.rtol * y0.cwiseAbs().array()).matrix();
  const double n = static_cast<double>(std::max<Eigen::Index>(1, y0.size()));
  const double d0 = std::sqrt(y0.cwiseQuotient(sc).squaredNorm() / n);
  const double d1n = std::sqrt(f0.cwiseQuotient(sc).squaredNorm() / n);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  Vec y1 = y0 + h0 * f0;
  double d2 = 0.0;
  try {
    if (!opt.admissible || opt.admissible(y1)) {
      d2 = std::sqrt((rhs(t0 + h0, y1) - f0).cwiseQuotient(sc).squaredNorm() / n) / h0;
    }
  } catch (const DomainError&) {
    d2 = 0.0;
  }
  const double dmax = std::max(d1n, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

Vec DenseStep::eval(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  return coeffs[0] +
         th * (coeffs[1] + th1 * (coeffs[2] + th * (coeffs[3] + th1 * coeffs[4])));
}

Vec DenseStep::eval_derivative(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  const Vec p = coeffs[3] + th1 * coeffs[4];
  const Vec dp = -coeffs[4];
  const Vec q = coeffs[2] + th * p;
  const Vec dq = p + th * dp;
  const Vec r = coeffs[1] + th1 * q;
  const Vec dr = -q + th1 * dq;
  return (r + th * dr) / h;
}

DenseSolution::DenseSolution(double t0, Vec y0, Vec dy0) : t_begin_(t0) {
  times_.push_back(t0);
  states_.push_back(std::move(y0));
  derivatives_.push_back(std::move(dy0));
}

const DenseStep& DenseSolution::locate(double t) const {
  const double span_tol = 1e-12 * std::max(1.0, std::abs(t_end()));
  if (steps_.empty() || t < t_begin_ - span_tol || t > t_end() + span_tol) {
    std::ostringstream msg;
    msg << "time " << t << " outside [" << t_begin_ << ", " << t_end() << "]";
    throw OutOfSpanError(msg.str());
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double value, const DenseStep& s) { return value < s.t0; });
  if (it == steps_.begin()) return steps_.front();
  return *std::prev(it);
}

Vec DenseSolution::state(double t) const {
  if (steps_.empty()) {
    if (std::abs(t - t_begin_) <= 0.0) return states_.front();
    throw OutOfSpanError("empty solution");
  }
  return locate(t).eval(t);
}

Vec DenseSolution::state_derivative(double t) const {
  if (steps_.empty()) {
    if (std::abs(t - t_begin_) <= 0.0) return derivatives_.front();
    throw OutOfSpanError("empty solution");
  }
  return locate(t).eval_derivative(t);
}

DenseSolution integrate_dopri5(const OdeRhs& rhs, double t0, const Vec& y0, double t_end,
                               const OdeOptions& opt) {
  if (!(t_end >= t0)) throw InvalidArgument("integration end precedes start");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (opt.admissible && !opt.admissible(y0)) throw DomainError("initial state outside domain");

  Vec k1 = rhs(t0, y0);
  DenseSolution sol(t0, y0, k1);
  if (t_end == t0) return sol;
  if (opt.stop && opt.stop(t0, y0)) {
    sol.termination_ = Termination::Stopped;
    return sol;
  }

  const double span = t_end - t0;
  double h = opt.initial_step > 0.0 ? std::min(opt.initial_step, span)
                                    : initial_step(rhs, t0, y0, k1, span, opt);
  double t = t0;
  Vec y = y0;

  // Returns nullopt if any stage leaves the domain.
  auto stage = [&](double ts, const Vec& ys) -> std::optional<Vec> {
    if (!ys.allFinite()) return std::nullopt;
    if (opt.admissible && !opt.admissible(ys)) return std::nullopt;
    try {
      Vec k = rhs(ts, ys);
      if (!k.allFinite()) return std::nullopt;
      return k;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };

  bool last_rejected = false;
  std::size_t n_steps = 0;
  while (t < t_end) {
    if (++n_steps > opt.max_steps) throw ConvergenceError("maximum number of ODE steps exceeded");
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    bool final_step = false;
    if (t + h >= t_end || t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }
    if (h < h_min) {
      if (final_step) break;
      throw StepUnderflowError("step size underflow");
    }

    std::optional<Vec> k2, k3, k4, k5, k6, k7;
    Vec y1;
    bool domain_fail = true;
    do {
      k2 = stage(t + c2 * h, y + h * (a21 * k1));
      if (!k2) break;
      k3 = stage(t + c3 * h, y + h * (a31 * k1 + a32 * *k2));
      if (!k3) break;
      k4 = stage(t + c4 * h, y + h * (a41 * k1 + a42 * *k2 + a43 * *k3));
      if (!k4) break;
      k5 = stage(t + c5 * h, y + h * (a51 * k1 + a52 * *k2 + a53 * *k3 + a54 * *k4));
      if (!k5) break;
      k6 = stage(t + h, y + h * (a61 * k1 + a62 * *k2 + a63 * *k3 + a64 * *k4 + a65 * *k5));
      if (!k6) break;
      y1 = y + h * (a71 * k1 + a73 * *k3 + a74 * *k4 + a75 * *k5 + a76 * *k6);
      k7 = stage(t + h, y1);
      if (!k7) break;
      domain_fail = false;
    } while (false);

    if (domain_fail) {
      h *= 0.25;
      last_rejected = true;
      if (h < h_min) {
        sol.termination_ = Termination::DomainExit;
        return sol;
      }
      continue;
    }

    const Vec err = h * (e1 * k1 + e3 * *k3 + e4 * *k4 + e5 * *k5 + e6 * *k6 + e7 * *k7);
    const double en = error_norm(err, y, y1, opt);
    if (!std::isfinite(en)) {
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    double factor = en == 0.0 ? kMaxFactor : kSafety * std::pow(en, -0.2);
    if (en <= 1.0) {
      DenseStep step;
      step.t0 = t;
      step.h = h;
      step.coeffs[0] = y;
      step.coeffs[1] = y1 - y;
      step.coeffs[2] = h * k1 - step.coeffs[1];
      step.coeffs[3] = step.coeffs[1] - h * *k7 - step.coeffs[2];
      step.coeffs[4] = h * (d1 * k1 + d3 * *k3 + d4 * *k4 + d5 * *k5 + d6 * *k6 + d7 * *k7);
      sol.steps_.push_back(std::move(step));

      t = final_step ? t_end : t + h;
      y = y1;
      k1 = *k7;
      sol.times_.push_back(t);
      sol.states_.push_back(y);
      sol.derivatives_.push_back(k1);

      if (opt.stop && opt.stop(t, y)) {
        sol.termination_ = Termination::Stopped;
        return sol;
      }
      factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
      last_rejected = false;
    } else {
      factor = std::clamp(factor, kMinFactor, 1.0);
      last_rejected = true;
    }
    h *= factor;
  }
  return sol;
}

}  // namespace geoflow
