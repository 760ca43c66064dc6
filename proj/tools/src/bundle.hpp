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

// Result bundles: CSV tables, a verdict line and a JSON metadata sidecar in
// one output directory, plus the reader used for round trips.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace geoflow::cli {

/// "%.12e".
std::string format_number(double x);

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  std::size_t column_index(const std::string& name) const;
  /// Parsed numeric column; throws std::invalid_argument on non-numbers.
  std::vector<double> column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;

  std::string to_csv() const;
  static Table from_csv(const std::string& text);

  bool operator==(const Table&) const = default;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct ResultBundle {
  nlohmann::json metadata;
  /// Keyed by file stem; written as <stem>.csv.
  std::map<std::string, Table> tables;
  /// Single line; empty when the command has no verdict.
  std::string verdict;

  bool operator==(const ResultBundle&) const = default;
};

/// Writes every table, verdict.txt (if any) and metadata.json.
/// Also records the written file names under metadata["files"].
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

ResultBundle read_bundle(const std::filesystem::path& dir);

}  // namespace geoflow::cli
