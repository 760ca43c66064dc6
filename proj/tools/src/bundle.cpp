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

#include "bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "config.hpp"

namespace geoflow::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("row width differs from header");
  rows_.push_back(std::move(cells));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

std::vector<double> Table::column(const std::string& name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    std::size_t used = 0;
    const double v = std::stod(row[j], &used);
    if (used != row[j].size()) throw std::invalid_argument("not a number: " + row[j]);
    out.push_back(v);
  }
  return out;
}

const std::string& Table::cell(std::size_t row, const std::string& name) const {
  return rows_.at(row).at(column_index(name));
}

std::string Table::to_csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
  return out;
}

Table Table::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      cells.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  Table table(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.add_row(split(line));
  }
  return table;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_bundle(const ResultBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [stem, table] : bundle.tables) {
    write_file(dir / (stem + ".csv"), table.to_csv());
    files.push_back(stem + ".csv");
  }
  if (!bundle.verdict.empty()) {
    write_file(dir / "verdict.txt", bundle.verdict + "\n");
    files.push_back("verdict.txt");
  }
  nlohmann::json metadata = bundle.metadata;
  metadata["files"] = files;
  write_file(dir / "metadata.json", metadata.dump(2) + "\n");
}

ResultBundle read_bundle(const fs::path& dir) {
  ResultBundle bundle;
  bundle.metadata = nlohmann::json::parse(read_file(dir / "metadata.json"));
  const fs::path verdict = dir / "verdict.txt";
  if (fs::exists(verdict)) {
    std::string text = read_file(verdict);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    bundle.verdict = text;
  }
  for (const auto& name : bundle.metadata.at("files")) {
    const fs::path file = dir / name.get<std::string>();
    if (file.extension() != ".csv") continue;
    bundle.tables.emplace(file.stem().string(), Table::from_csv(read_file(file)));
  }
  return bundle;
}

}  // namespace geoflow::cli
