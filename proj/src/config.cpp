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
#include "tofu/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace tofu {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return true;
  return false;
}

std::string ConfigSection::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw ConfigError("config: section [" + name + "] is missing key '" + key + "'");
}

std::string ConfigSection::get_or(const std::string& key, const std::string& def) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return def;
}

double ConfigSection::number(const std::string& key) const {
  return parse_number(get(key), "[" + name + "] " + key);
}

double ConfigSection::number_or(const std::string& key, double def) const {
  if (!has(key)) return def;
  return number(key);
}

bool ConfigSection::flag_or(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string v = lower(trim(get(key)));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("config: [" + name + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> ConfigSection::words(const std::string& key) const {
  std::istringstream in(get(key));
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<double> ConfigSection::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : words(key))
    out.push_back(parse_number(w, "[" + name + "] " + key));
  return out;
}

std::vector<const ConfigSection*> ConfigDoc::all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

double parse_number(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: " + context + ": cannot parse number '" + t + "'");
  }
  if (pos != t.size())
    throw ConfigError("config: " + context + ": trailing characters in number '" + t + "'");
  return v;
}

ConfigDoc parse_config(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: line " + std::to_string(lineno) + ": unterminated section header");
      ConfigSection s;
      s.name = lower(trim(line.substr(1, line.size() - 2)));
      s.line = lineno;
      doc.sections.push_back(std::move(s));
      current = &doc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected 'key = value'");
    if (current == nullptr)
      throw ConfigError("config: line " + std::to_string(lineno) + ": key/value outside any [section]");
    current->entries.emplace_back(lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
  }
  return doc;
}

ConfigDoc parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tofu
