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

// Run configuration: defaults, then the config file, then command-line flags.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace geoflow::cli {

/// Any problem with flags, config files or output paths; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> config_path;
  std::string out_dir = "geoflow-out";
  std::uint64_t seed = 20260517;
  double tol = 1e-10;

  // chain
  int n_beads = 11;
  double t_plus = 2.0;
  std::optional<double> t_end;
  int samples = 2001;

  // compare
  std::string model = "gaussian-mode";
  std::optional<double> level;
  double lambda = 0.0;
  std::vector<double> direction1;
  std::vector<double> direction2;

  // curvature
  std::vector<double> ratios = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 5.0};
  int mode = 0;

  // verify
  std::vector<std::string> suites;
  /// Test hook: deliberately corrupt one check.
  std::string inject_fault;

  void validate() const;
  nlohmann::json to_json() const;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"chain", "compare", "verify", "curvature"};
  return names;
}

/// Parses argv; throws ConfigError on bad flags. Returns nullopt when help or
/// version output was requested and already printed to `out`.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Loads an INI file into `cfg`. Diagnostics carry "path:line:".
void load_config_file(const std::string& path, RunConfig& cfg);

std::vector<double> parse_real_list(const std::string& text);

}  // namespace geoflow::cli
