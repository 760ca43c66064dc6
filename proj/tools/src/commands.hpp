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

#include <iosfwd>

#include "bundle.hpp"
#include "config.hpp"

namespace geoflow::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kNumericalFailure = 2, kInconclusive = 3 };

struct CommandResult {
  ResultBundle bundle;
  int exit_code = kSuccess;
};

CommandResult cmd_chain(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_curvature(const RunConfig& cfg);

/// Full entry point: parse, run, write the bundle, report on `out`/`err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoflow::cli
