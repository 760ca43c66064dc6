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

#include "geoflow/models.hpp"

#include <cmath>
#include <numbers>

#include "geoflow/dually_flat.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/gaussian_chain.hpp"

namespace geoflow::models {

ScalarPotential distance_squared(const Vec& center) {
  return ScalarPotential([center](const Vec& x) { return 0.5 * (x - center).squaredNorm(); },
                         [center](const Vec& x) -> Vec { return x - center; }, center);
}

MetricField sphere_metric() {
  Chart chart{2, [](const Vec& x) { return x(0) > 0.0 && x(0) < std::numbers::pi; }};
  return MetricField(
      chart,
      [](const Vec& x) -> Mat {
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(x(0)) * std::sin(x(0));
        return g;
      },
      [](const Vec& x) {
        std::vector<Mat> d(2, Mat::Zero(2, 2));
        d[0](1, 1) = 2.0 * std::sin(x(0)) * std::cos(x(0));
        return d;
      });
}

ScalarPotential sphere_height() {
  Vec south(2);
  south << std::numbers::pi, 0.0;
  return ScalarPotential([](const Vec& x) { return std::cos(x(0)); },
                         [](const Vec& x) -> Vec {
                           Vec out(2);
                           out << -std::sin(x(0)), 0.0;
                           return out;
                         },
                         south);
}

std::vector<std::string> model_names() {
  return {"euclidean-quadratic", "gaussian-mode", "hessian-exp"};
}

NamedModel named_model(const std::string& name) {
  if (name == "euclidean-quadratic") {
    return NamedModel{name, MetricField::euclidean(2), euclidean_quadratic(2), Vec::Unit(2, 0),
                      Vec::Unit(2, 1), 0.5};
  }
  if (name == "gaussian-mode") {
    // Single mode of the two-bead chain (lambda = 2, a* = 1); warming seed
    // first, level of the T = 2 cooling start.
    const chain::ModeSpectrum s = chain::spectrum(2);
    const ScalarPotential f = chain::mode_potential(s.lambdas[0]);
    return NamedModel{name, chain::mode_metric(), f, -Vec::Ones(1), Vec::Ones(1),
                      chain::potential_mode(s, 0, 2.0 * s.a_star[0])};
  }
  if (name == "hessian-exp") {
    const HessianModel m = HessianModel::exponential(1);
    return NamedModel{name, m.metric(), divergence_potential(m, Vec::Zero(1)), -Vec::Ones(1),
                      Vec::Ones(1), 0.5};
  }
  throw InvalidArgument("unknown model '" + name + "'");
}

}  // namespace geoflow::models
