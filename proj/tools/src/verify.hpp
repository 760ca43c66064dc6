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

#include <cstdint>
#include <string>
#include <vector>

namespace geoflow::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  /// Worst observed value and the bound it is held to.
  double value = 0.0;
  double threshold = 0.0;
  /// True when the check requires value >= threshold instead of value < threshold.
  bool lower_bound = false;
  bool pass = false;
};

const std::vector<std::string>& verify_suites();

/// Runs the named suites (all when empty). `fault` corrupts one check by
/// name, for negative-control testing.
std::vector<CheckResult> run_checks(const std::vector<std::string>& suites, std::uint64_t seed,
                                    double tol, const std::string& fault = "");

}  // namespace geoflow::cli
