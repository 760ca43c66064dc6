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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "CLI11.hpp"
#include "geoflow/models.hpp"
#include "geoflow/version.hpp"
#include "verify.hpp"

namespace geoflow::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "section.key" -> 1-based line of its definition.
std::map<std::string, int> index_lines(const std::string& path) {
  std::map<std::string, int> lines;
  std::ifstream in(path);
  std::string raw, section;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      lines.emplace(section, n);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    lines.emplace(section.empty() ? key : section + "." + key, n);
  }
  return lines;
}

template <typename T>
T convert(const std::string& text);

template <>
double convert<double>(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

template <>
int convert<int>(const std::string& text) {
  std::size_t used = 0;
  const long v = std::stol(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  if (v < INT32_MIN || v > INT32_MAX) throw std::out_of_range("int");
  return static_cast<int>(v);
}

template <>
std::uint64_t convert<std::uint64_t>(const std::string& text) {
  if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

template <>
std::string convert<std::string>(const std::string& text) {
  return text;
}

template <>
std::vector<double> convert<std::vector<double>>(const std::string& text) {
  return parse_real_list(text);
}

template <>
std::vector<std::string> convert<std::vector<std::string>>(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : convert<std::vector<std::string>>(text)) {
    out.push_back(convert<double>(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << path;
    if (e.line() > 0) msg << ":" << e.line();
    msg << ": " << e.message();
    throw ConfigError(msg.str());
  }
  const auto lines = index_lines(path);
  auto where = [&](const std::string& key) {
    const auto it = lines.find(key);
    return path + ":" + (it == lines.end() ? std::string("?") : std::to_string(it->second)) + ": ";
  };

  using Setter = std::function<void(const std::string&)>;
  auto bind = [](auto& field) -> Setter {
    return [&field](const std::string& text) {
      field = convert<std::decay_t<decltype(field)>>(text);
    };
  };
  auto bind_opt = [](std::optional<double>& field) -> Setter {
    return [&field](const std::string& text) { field = convert<double>(text); };
  };
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"run", {{"seed", bind(cfg.seed)}, {"tol", bind(cfg.tol)}, {"out", bind(cfg.out_dir)}}},
      {"chain",
       {{"n_beads", bind(cfg.n_beads)},
        {"t_plus", bind(cfg.t_plus)},
        {"t_end", bind_opt(cfg.t_end)},
        {"samples", bind(cfg.samples)}}},
      {"compare",
       {{"model", bind(cfg.model)},
        {"level", bind_opt(cfg.level)},
        {"lambda", bind(cfg.lambda)},
        {"direction1", bind(cfg.direction1)},
        {"direction2", bind(cfg.direction2)}}},
      {"curvature", {{"ratios", bind(cfg.ratios)}, {"mode", bind(cfg.mode)}}},
      {"verify", {{"suites", bind(cfg.suites)}}},
  };

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(where(section) + "key '" + section + "' must sit inside a section");
    }
    const auto sec = schema.find(section);
    if (sec == schema.end()) throw ConfigError(where(section) + "unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw ConfigError(where(full) + "unknown key '" + key + "' in [" + section + "]");
      }
      const std::string text = trim(value.data());
      try {
        setter->second(text);
      } catch (const std::exception&) {
        throw ConfigError(where(full) + "cannot parse '" + text + "' for " + full);
      }
    }
  }
}

void RunConfig::validate() const {
  if (!(tol > 0.0 && tol < 1e-2)) throw ConfigError("tol must lie in (0, 1e-2)");
  if (n_beads < 2) throw ConfigError("n_beads must be >= 2");
  if (n_beads > 4097) throw ConfigError("n_beads must be <= 4097");
  if (!(t_plus >= 1.0) || !std::isfinite(t_plus)) throw ConfigError("t_plus must be >= 1");
  if (t_end && !(*t_end > 0.0 && std::isfinite(*t_end))) throw ConfigError("t_end must be > 0");
  if (samples < 2) throw ConfigError("samples must be >= 2");
  const auto names = models::model_names();
  if (std::find(names.begin(), names.end(), model) == names.end()) {
    throw ConfigError("unknown model '" + model + "' (known: " + join(names) + ")");
  }
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("curvature ratios must be > 0");
  }
  if (mode < 0 || mode >= n_beads - 1) throw ConfigError("mode index out of range for n_beads");
  for (const auto& s : suites) {
    if (std::find(verify_suites().begin(), verify_suites().end(), s) == verify_suites().end()) {
      throw ConfigError("unknown suite '" + s + "' (known: " + join(verify_suites()) + ")");
    }
  }
  if (out_dir.empty()) throw ConfigError("output directory must be non-empty");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config_path ? nlohmann::json(*config_path) : nlohmann::json(nullptr);
  j["out"] = out_dir;
  j["seed"] = seed;
  j["tol"] = tol;
  j["n_beads"] = n_beads;
  j["t_plus"] = t_plus;
  j["t_end"] = t_end ? nlohmann::json(*t_end) : nlohmann::json(nullptr);
  j["samples"] = samples;
  j["model"] = model;
  j["level"] = level ? nlohmann::json(*level) : nlohmann::json(nullptr);
  j["lambda"] = lambda;
  j["direction1"] = direction1;
  j["direction2"] = direction2;
  j["ratios"] = ratios;
  j["mode"] = mode;
  j["suites"] = suites;
  if (!inject_fault.empty()) j["inject_fault"] = inject_fault;
  return j;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Gradient flows, straightening connections and relaxation asymmetry", "geoflow"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config, out_dir, model, inject, curvature_ratios;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol, t_plus, t_end, level, lambda;
  std::optional<int> n_beads, samples, mode;
  std::vector<std::string> suites;
  std::optional<std::string> dir1, dir2;

  app.add_option("--config", config, "INI config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--tol", tol, "integration tolerance");
  app.add_option("--n-beads", n_beads, "number of beads (modes + 1)");
  app.add_option("--t-plus", t_plus, "cooling start temperature ratio");
  app.add_option("--t-end", t_end, "horizon (default: until converged)");
  app.add_option("--samples", samples, "uniform samples added to the output grid");
  app.add_option("--model", model, "compare: named model");
  app.add_option("--level", level, "compare: level of the equidistant pair");
  app.add_option("--lambda", lambda, "compare: connection constant");
  app.add_option("--direction1", dir1, "compare: first seed direction, comma separated");
  app.add_option("--direction2", dir2, "compare: second seed direction, comma separated");
  app.add_option("--ratios", curvature_ratios, "curvature: a/a* grid, comma separated");
  app.add_option("--mode", mode, "curvature: mode index");
  app.add_option("--suite", suites, "verify: suite to run (repeatable)");
  app.add_option("--inject-fault", inject)->group("");

  std::string command;
  const std::map<std::string, std::string> blurbs = {
      {"chain", "warming vs cooling relaxation of a Gaussian bead chain"},
      {"compare", "asymmetry comparison for a named model"},
      {"verify", "run the built-in property checks"},
      {"curvature", "single-mode scalar curvature, closed form vs numeric"},
  };
  for (const auto& name : command_names()) {
    const auto it = blurbs.find(name);
    app.add_subcommand(name, it == blurbs.end() ? "" : it->second)->callback([&command, name] {
      command = name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  cfg.command = command;
  if (config) {
    cfg.config_path = *config;
    load_config_file(*config, cfg);
  }
  if (out_dir) cfg.out_dir = *out_dir;
  if (seed) cfg.seed = *seed;
  if (tol) cfg.tol = *tol;
  if (n_beads) cfg.n_beads = *n_beads;
  if (t_plus) cfg.t_plus = *t_plus;
  if (t_end) cfg.t_end = *t_end;
  if (samples) cfg.samples = *samples;
  if (model) cfg.model = *model;
  if (level) cfg.level = *level;
  if (lambda) cfg.lambda = *lambda;
  if (mode) cfg.mode = *mode;
  if (!suites.empty()) cfg.suites = suites;
  if (inject) cfg.inject_fault = *inject;
  try {
    if (dir1) cfg.direction1 = parse_real_list(*dir1);
    if (dir2) cfg.direction2 = parse_real_list(*dir2);
    if (curvature_ratios) cfg.ratios = parse_real_list(*curvature_ratios);
  } catch (const std::exception&) {
    throw ConfigError("malformed comma-separated list of numbers");
  }
  cfg.validate();
  return cfg;
}

}  // namespace geoflow::cli
