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

#include <stdexcept>
#include <string>

namespace geoflow {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric (or other matrix) too ill-conditioned to invert.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Point outside the chart, or outside the set where an object is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically at) a critical point of the potential,
/// where straightening connections are undefined.
class CriticalPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation exactly on a known singular set (e.g. a = a* for curvature).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Adaptive step size collapsed below the representable resolution.
class StepUnderflowError : public Error {
 public:
  using Error::Error;
};

/// Requested time lies outside a trajectory's span.
class OutOfSpanError : public Error {
 public:
  using Error::Error;
};

/// A flow that should relax did not.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Requested level set of the potential is not crossed inside the chart.
class LevelUnreachableError : public Error {
 public:
  using Error::Error;
};

/// Parametrization Jacobian lost rank.
class DegenerateTangentError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied argument (bad parameter ranges, malformed input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace geoflow
