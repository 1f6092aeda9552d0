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

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tofu {

// Errors caused by user input (config files, CLI arguments, data files).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors signalling a numerical failure (lost unitarity, failed solve, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal sectioned key/value format:
//   [section]
//   key = value            # comment
// Sections may repeat ([spin] once per spin). Values are free text; helpers
// below parse numbers and tuples.
struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws if missing
  std::string get_or(const std::string& key, const std::string& def) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double def) const;
  bool flag_or(const std::string& key, bool def) const;
  std::vector<std::string> words(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
};

struct ConfigDoc {
  std::vector<ConfigSection> sections;

  std::vector<const ConfigSection*> all(const std::string& name) const;
  const ConfigSection* find(const std::string& name) const;  // first or null
};

ConfigDoc parse_config(const std::string& text);
ConfigDoc parse_config_file(const std::string& path);

double parse_number(const std::string& text, const std::string& context);

}  // namespace tofu
