/* Copyright 2026 The Tofusim Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "tofu/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tofu/config.hpp"

namespace tofu {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

RunManifest::RunManifest() { add("tool", kToolVersion); }

void RunManifest::add(const std::string& key, const std::string& value) {
  fields.emplace_back(key, value);
}

void RunManifest::add_number(const std::string& key, double value) {
  add(key, format_number(value));
}

std::string RunManifest::header_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : fields) out << "# " << k << ": " << v << "\n";
  return out.str();
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const RunManifest& manifest, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("csv: cannot write '" + path + "'");
  out << manifest.header_text();
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_number(row[c]);
    out << "\n";
  }
  if (!out) throw ConfigError("csv: write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.columns = cells;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells)
      row.push_back(parse_number(c, path + ":" + std::to_string(lineno)));
    if (row.size() != t.columns.size())
      throw ConfigError("csv: '" + path + "' line " + std::to_string(lineno) +
                        ": expected " + std::to_string(t.columns.size()) + " cells");
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ConfigError("csv: '" + path + "' has no header row");
  return t;
}

}  // namespace tofu
