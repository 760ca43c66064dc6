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

// Reference models: Euclidean plane, round sphere, and the registry of named
// (metric, potential) pairs exposed on the command line.

#include <string>
#include <vector>

#include "geoflow/manifold.hpp"

namespace geoflow::models {

/// f = |x - center|^2 / 2 on the Euclidean chart; for the flat metric this is
/// half the squared Riemannian distance to `center`.
ScalarPotential distance_squared(const Vec& center);
inline ScalarPotential euclidean_quadratic(int dim = 2) {
  return distance_squared(Vec::Zero(dim));
}

/// Unit round sphere in (theta, phi), theta in (0, pi): dtheta^2 + sin^2 theta dphi^2.
MetricField sphere_metric();
/// Height z = cos(theta); minimum at the south pole, which lies on the chart
/// boundary.
ScalarPotential sphere_height();

struct NamedModel {
  std::string name;
  MetricField metric;
  ScalarPotential potential;
  Vec direction1;
  Vec direction2;
  double level = 0.0;
};

/// euclidean-quadratic, gaussian-mode, hessian-exp.
std::vector<std::string> model_names();
/// Throws InvalidArgument for unknown names.
NamedModel named_model(const std::string& name);

}  // namespace geoflow::models
