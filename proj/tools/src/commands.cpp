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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "geoflow/geoflow.hpp"
#include "verify.hpp"

namespace geoflow::cli {

namespace {

Vec to_vec(const std::vector<double>& xs) {
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

CompareOptions compare_options(const RunConfig& cfg) {
  CompareOptions opt;
  opt.tol = cfg.tol;
  opt.t_end = cfg.t_end;
  opt.samples = static_cast<std::size_t>(cfg.samples);
  return opt;
}

Table coincidence_table(const AsymmetryReport& r, const std::vector<std::string>& header) {
  Table table(header);
  for (const auto& c : r.coincidences) table.add_row({c.t, c.speed1, c.speed2, c.cubic1, c.cubic2, c.gap()});
  return table;
}

nlohmann::json report_summary(const AsymmetryReport& r) {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["level"] = r.level;
  j["t_end"] = r.t_end;
  j["converged"] = r.converged;
  j["min_delta"] = r.min_delta_f();
  j["max_delta"] = r.max_delta_f();
  j["coincidences"] = r.coincidences.size();
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

CommandResult cmd_chain(const RunConfig& cfg) {
  const chain::ChainExperiment e =
      chain::universal_asymmetry_experiment(cfg.n_beads, cfg.t_plus, compare_options(cfg));
  const AsymmetryReport& r = e.chain;
  const int n = e.spectrum.size();

  std::vector<std::string> header = {"t", "F_plus", "F_minus", "delta_F"};
  for (int k = 1; k <= n; ++k) header.push_back("a_plus_" + std::to_string(k));
  for (int k = 1; k <= n; ++k) header.push_back("a_minus_" + std::to_string(k));
  Table traj(header);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double t = r.times[i];
    std::vector<double> row = {t, r.f2[i], r.f1[i], r.delta_f[i]};
    const Vec up = r.curve2->position(t);
    const Vec down = r.curve1->position(t);
    row.insert(row.end(), up.data(), up.data() + n);
    row.insert(row.end(), down.data(), down.data() + n);
    traj.add_row(row);
  }

  Table modes({"mode", "lambda", "a_star", "min_delta_F", "coincidences", "min_gap", "verdict"});
  for (int k = 0; k < n; ++k) {
    const AsymmetryReport& m = e.modes[static_cast<std::size_t>(k)];
    double min_gap = INFINITY;
    for (const auto& c : m.coincidences) min_gap = std::min(min_gap, c.gap());
    modes.add_row({std::to_string(k + 1), format_number(e.spectrum.lambdas[static_cast<std::size_t>(k)]),
                   format_number(e.spectrum.a_star[static_cast<std::size_t>(k)]),
                   format_number(m.min_delta_f()), std::to_string(m.coincidences.size()),
                   format_number(min_gap), std::string(to_string(m.verdict))});
  }

  CommandResult out;
  out.bundle.tables.emplace("trajectory", std::move(traj));
  out.bundle.tables.emplace(
      "coincidences",
      coincidence_table(r, {"t", "speed_minus", "speed_plus", "cubic_minus", "cubic_plus", "gap"}));
  out.bundle.tables.emplace("modes", std::move(modes));
  const bool warming = e.warming_faster();
  out.bundle.verdict = warming ? "warming-faster" : "inconclusive";
  out.exit_code = warming ? kSuccess : kInconclusive;
  nlohmann::json summary = report_summary(r);
  summary["t_plus"] = e.t_plus;
  summary["t_minus"] = e.t_minus;
  summary["modes"] = n;
  out.bundle.metadata["summary"] = summary;
  return out;
}

CommandResult cmd_compare(const RunConfig& cfg) {
  const models::NamedModel model = models::named_model(cfg.model);
  const Vec d1 = cfg.direction1.empty() ? model.direction1 : to_vec(cfg.direction1);
  const Vec d2 = cfg.direction2.empty() ? model.direction2 : to_vec(cfg.direction2);
  const int dim = model.metric.dim();
  if (d1.size() != dim || d2.size() != dim) {
    throw ConfigError("model '" + cfg.model + "' needs directions of length " + std::to_string(dim));
  }
  const double level = cfg.level.value_or(model.level);
  const EquidistantPair pair = equidistant_seed(model.metric, model.potential, level, d1, d2);
  const AsymmetryReport r = compare(model.metric, model.potential, cfg.lambda, pair, compare_options(cfg));

  std::vector<std::string> header = {"t", "f1", "f2", "delta_f"};
  for (int i = 1; i <= dim; ++i) header.push_back("x1_" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) header.push_back("x2_" + std::to_string(i));
  Table traj(header);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double t = r.times[i];
    std::vector<double> row = {t, r.f1[i], r.f2[i], r.delta_f[i]};
    const Vec x1 = r.curve1->position(t);
    const Vec x2 = r.curve2->position(t);
    row.insert(row.end(), x1.data(), x1.data() + dim);
    row.insert(row.end(), x2.data(), x2.data() + dim);
    traj.add_row(row);
  }

  CommandResult out;
  out.bundle.tables.emplace("trajectory", std::move(traj));
  out.bundle.tables.emplace(
      "coincidences", coincidence_table(r, {"t", "speed1", "speed2", "cubic1", "cubic2", "gap"}));
  out.bundle.verdict = std::string(to_string(r.verdict));
  out.exit_code = r.verdict == Verdict::Inconclusive ? kInconclusive : kSuccess;
  nlohmann::json summary = report_summary(r);
  summary["model"] = cfg.model;
  summary["seed1"] = std::vector<double>(pair.x1.data(), pair.x1.data() + dim);
  summary["seed2"] = std::vector<double>(pair.x2.data(), pair.x2.data() + dim);
  out.bundle.metadata["summary"] = summary;
  return out;
}

CommandResult cmd_curvature(const RunConfig& cfg) {
  const chain::ModeSpectrum s = chain::spectrum(cfg.n_beads);
  const auto k = static_cast<std::size_t>(cfg.mode);
  const MetricField g = chain::mode_metric_with_mean();
  const StraighteningConnection conn(g, chain::mode_potential_with_mean(s.lambdas[k]));
  const AffineConnection c = conn.connection();

  constexpr double kBound = 1e-4;
  Table table({"a_ratio", "s_closed_form", "s_numeric", "rel_error", "singular"});
  double worst = 0.0;
  std::size_t singular = 0;
  for (double ratio : cfg.ratios) {
    const double a = ratio * s.a_star[k];
    double closed = NAN, numeric = NAN, err = NAN;
    bool flagged = false;
    try {
      closed = chain::scalar_curvature_mode(s, cfg.mode, a);
      Vec x(2);
      x << 0.0, a;
      numeric = scalar_curvature(c, g, x, RicciConvention::SecondIndex);
      err = std::abs(numeric - closed) / std::max(1.0, std::abs(closed));
      worst = std::max(worst, err);
    } catch (const DomainError&) {
      flagged = true;
      ++singular;
    }
    table.add_row({ratio, closed, numeric, err, flagged ? 1.0 : 0.0});
  }

  CommandResult out;
  out.bundle.tables.emplace("curvature", std::move(table));
  const bool ok = worst <= kBound;
  out.bundle.verdict = ok ? "closed-form-matches" : "closed-form-mismatch";
  out.exit_code = ok ? kSuccess : kNumericalFailure;
  out.bundle.metadata["summary"] = {{"mode", cfg.mode + 1},
                                    {"lambda", s.lambdas[k]},
                                    {"a_star", s.a_star[k]},
                                    {"max_rel_error", worst},
                                    {"bound", kBound},
                                    {"singular_rows", singular}};
  return out;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  const std::vector<CheckResult> checks = run_checks(cfg.suites, cfg.seed, cfg.tol, cfg.inject_fault);
  Table table({"suite", "check", "value", "relation", "threshold", "result"});
  std::size_t failed = 0;
  for (const auto& c : checks) {
    table.add_row({c.suite, c.name, format_number(c.value), c.lower_bound ? ">=" : "<",
                   format_number(c.threshold), c.pass ? "pass" : "fail"});
    if (!c.pass) ++failed;
  }
  CommandResult out;
  out.bundle.tables.emplace("checks", std::move(table));
  out.bundle.verdict = failed == 0 ? "all-pass" : "failed";
  out.exit_code = failed == 0 ? kSuccess : kNumericalFailure;
  out.bundle.metadata["summary"] = {{"checks", checks.size()}, {"failed", failed}};
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    auto parsed = parse_command_line(argc, argv, out);
    if (!parsed) return kSuccess;
    cfg = std::move(*parsed);
  } catch (const ConfigError& e) {
    err << "geoflow: config error: " << e.what() << "\n";
    return kConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  try {
    if (cfg.command == "chain") {
      result = cmd_chain(cfg);
    } else if (cfg.command == "compare") {
      result = cmd_compare(cfg);
    } else if (cfg.command == "verify") {
      result = cmd_verify(cfg);
    } else {
      result = cmd_curvature(cfg);
    }
  } catch (const ConfigError& e) {
    err << "geoflow: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "geoflow: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ResultBundle& bundle = result.bundle;
  bundle.metadata["tool"] = "geoflow";
  bundle.metadata["version"] = std::string(kVersion);
  bundle.metadata["command"] = cfg.command;
  bundle.metadata["config"] = cfg.to_json();
  bundle.metadata["wall_time_seconds"] = wall;
  bundle.metadata["threads"] = thread_count();
  bundle.metadata["exit_code"] = result.exit_code;
  try {
    write_bundle(bundle, cfg.out_dir);
  } catch (const ConfigError& e) {
    err << "geoflow: config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (cfg.command == "verify") {
    for (const auto& row : bundle.tables.at("checks").rows()) {
      out << row[5] << "  " << row[0] << "/" << row[1] << "  " << row[2] << " " << row[3] << " " << row[4]
          << "\n";
    }
  }
  out << bundle.verdict << "\n";
  return result.exit_code;
}

}  // namespace geoflow::cli
