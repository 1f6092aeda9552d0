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
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tofu {

inline constexpr const char* kToolVersion = "tofusim 1.0.0";

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Ordered key/value header emitted as '# key: value' comment lines at the
// top of every output file. Wall-clock time is deliberately not included so
// identical runs produce byte-identical files.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> fields;

  RunManifest();
  void add(const std::string& key, const std::string& value);
  void add_number(const std::string& key, double value);
  std::string header_text() const;
};

// Deterministic %.12g float formatting for all emitted numbers.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const RunManifest& manifest, const CsvTable& table);
CsvTable read_csv(const std::string& path);  // skips '#' comment lines

}  // namespace tofu
