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
#include "tofu/powder.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tofu/config.hpp"
#include "tofu/constants.hpp"

namespace tofu {

using constants::pi;
using constants::two_pi;

void OrientationSet::validate() const {
  if (entries.empty()) throw ConfigError("powder: empty orientation set");
  double sum = 0.0;
  for (const auto& e : entries) {
    if (!(e.weight > 0.0)) throw ConfigError("powder: non-positive crystallite weight");
    sum += e.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError("powder: weights sum to " + std::to_string(sum) + ", expected 1");
}

PowderScheme parse_scheme(const std::string& name) {
  if (name == "golden-spiral" || name == "golden") return PowderScheme::golden_spiral;
  if (name == "zcw-like" || name == "zcw") return PowderScheme::zcw_like;
  if (name == "grid") return PowderScheme::grid;
  if (name == "file") return PowderScheme::file;
  throw ConfigError("powder: unknown scheme '" + name + "'");
}

namespace {

std::vector<double> gamma_angles(int n_gamma) {
  std::vector<double> g(static_cast<std::size_t>(n_gamma));
  for (int j = 0; j < n_gamma; ++j) g[std::size_t(j)] = two_pi * j / n_gamma;
  return g;
}

void append_with_gammas(OrientationSet& set, double alpha, double beta, double weight,
                        const std::vector<double>& gammas) {
  for (double g : gammas)
    set.entries.push_back({{alpha, beta, g}, weight / double(gammas.size())});
}

OrientationSet golden_spiral(int n_ab, int n_gamma) {
  OrientationSet set;
  const auto gammas = gamma_angles(n_gamma);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n_ab; ++i) {
    const double cb = 1.0 - 2.0 * (i + 0.5) / n_ab;
    const double beta = std::acos(cb);
    const double alpha = std::fmod(two_pi * i / golden, two_pi);
    append_with_gammas(set, alpha, beta, 1.0 / n_ab, gammas);
  }
  return set;
}

OrientationSet zcw_like(int n_ab, int n_gamma) {
  OrientationSet set;
  const auto gammas = gamma_angles(n_gamma);
  // Fibonacci-ratio lattice on (alpha, cos beta)
  const double ratio = 2.0 / (3.0 + std::sqrt(5.0));  // 1/phi^2
  for (int i = 0; i < n_ab; ++i) {
    const double x = (i + 0.5) / n_ab;
    const double y = std::fmod(i * ratio, 1.0);
    const double beta = std::acos(1.0 - 2.0 * x);
    append_with_gammas(set, two_pi * y, beta, 1.0 / n_ab, gammas);
  }
  return set;
}

OrientationSet beta_grid(int n_ab, int n_gamma) {
  OrientationSet set;
  const auto gammas = gamma_angles(n_gamma);
  if (n_ab == 1) {
    append_with_gammas(set, 0.0, 0.0, 1.0, gammas);
    return set;
  }
  // sin(beta)-weighted trapezoid over beta in [0, pi], alpha = 0
  std::vector<double> w(static_cast<std::size_t>(n_ab));
  double sum = 0.0;
  for (int i = 0; i < n_ab; ++i) {
    const double beta = pi * i / (n_ab - 1);
    const double trap = (i == 0 || i == n_ab - 1) ? 0.5 : 1.0;
    w[std::size_t(i)] = std::sin(beta) * trap;
    sum += w[std::size_t(i)];
  }
  for (int i = 0; i < n_ab; ++i) {
    if (w[std::size_t(i)] <= 0.0) continue;  // poles carry zero sin weight
    append_with_gammas(set, 0.0, pi * i / (n_ab - 1), w[std::size_t(i)] / sum, gammas);
  }
  return set;
}

}  // namespace

OrientationSet generate_orientations(PowderScheme scheme, int n_ab, int n_gamma,
                                     const std::string& file_path) {
  if (n_ab < 1 || n_gamma < 1) throw ConfigError("powder: counts must be >= 1");
  OrientationSet set;
  switch (scheme) {
    case PowderScheme::golden_spiral:
      set = golden_spiral(n_ab, n_gamma);
      set.scheme = "golden-spiral";
      break;
    case PowderScheme::zcw_like:
      set = zcw_like(n_ab, n_gamma);
      set.scheme = "zcw-like";
      break;
    case PowderScheme::grid:
      set = beta_grid(n_ab, n_gamma);
      set.scheme = "grid";
      break;
    case PowderScheme::file:
      set = load_orientations(file_path, n_gamma);
      return set;
  }
  set.n_ab = n_ab;
  set.n_gamma = n_gamma;
  set.validate();
  return set;
}

OrientationSet single_orientation(const EulerAngles& e) {
  OrientationSet set;
  set.entries.push_back({e, 1.0});
  set.scheme = "single";
  set.n_ab = 1;
  set.n_gamma = 1;
  return set;
}

OrientationSet load_orientations(const std::string& path, int n_gamma) {
  std::ifstream in(path);
  if (!in) throw ConfigError("powder: cannot open orientation file '" + path + "'");
  OrientationSet set;
  set.scheme = "file";
  const auto gammas = gamma_angles(n_gamma);
  std::string line;
  int lineno = 0;
  double wsum = 0.0;
  std::vector<std::array<double, 4>> rows;
  bool any_gamma = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    double a, b, w;
    if (!(ls >> a >> b >> w)) {
      std::istringstream probe(line);
      std::string rest;
      if (probe >> rest)
        throw ConfigError("powder: '" + path + "' line " + std::to_string(lineno) +
                          ": expected 'alpha_deg beta_deg weight [gamma_deg]'");
      continue;  // blank line
    }
    double g = std::nan("");
    if (ls >> g) any_gamma = true;
    rows.push_back({a, b, w, g});
    wsum += w;
  }
  if (rows.empty()) throw ConfigError("powder: orientation file '" + path + "' has no entries");
  if (!(wsum > 0.0)) throw ConfigError("powder: orientation file weights must be positive");
  for (const auto& r : rows) {
    const double a = constants::deg_to_rad(r[0]);
    const double b = constants::deg_to_rad(r[1]);
    const double w = r[2] / wsum;
    if (any_gamma) {
      if (std::isnan(r[3]))
        throw ConfigError("powder: orientation file mixes rows with and without gamma");
      set.entries.push_back({{a, b, constants::deg_to_rad(r[3])}, w});
    } else {
      for (double g : gammas) set.entries.push_back({{a, b, g}, w / double(n_gamma)});
    }
  }
  set.n_ab = int(rows.size());
  set.n_gamma = any_gamma ? 1 : n_gamma;
  set.validate();
  return set;
}

double pairwise_sum(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::vector<double> acc = v;
  std::size_t n = acc.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < n / 2; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
    if (n % 2 == 1) acc[n / 2] = acc[n - 1];
    n = half;
  }
  return acc[0];
}

double powder_average(const std::vector<double>& values, const OrientationSet& set) {
  if (values.size() != set.entries.size())
    throw NumericalError("powder_average: " + std::to_string(values.size()) + " values for " +
                         std::to_string(set.entries.size()) + " orientations");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = values[i] * set.entries[i].weight;
  return pairwise_sum(terms);
}

}  // namespace tofu
