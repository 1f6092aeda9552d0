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

#include <string>
#include <vector>

#include "tofu/geometry.hpp"

namespace tofu {

struct Orientation {
  EulerAngles angles;  // crystal -> rotor frame
  double weight = 0.0;
};

struct OrientationSet {
  std::vector<Orientation> entries;
  std::string scheme;
  int n_ab = 0;
  int n_gamma = 0;

  std::size_t size() const { return entries.size(); }
  void validate() const;  // weights positive, normalized
};

enum class PowderScheme { golden_spiral, zcw_like, grid, file };

PowderScheme parse_scheme(const std::string& name);

// Deterministic orientation sets. n_ab counts (alpha, beta) points, n_gamma
// the uniform gamma angles appended to each.
OrientationSet generate_orientations(PowderScheme scheme, int n_ab, int n_gamma,
                                     const std::string& file_path = {});

// Single crystallite with unit weight.
OrientationSet single_orientation(const EulerAngles& e);

// Lines of "alpha_deg beta_deg weight [gamma_deg]"; when the gamma column is
// absent, n_gamma uniform angles are appended.
OrientationSet load_orientations(const std::string& path, int n_gamma);

double powder_average(const std::vector<double>& values, const OrientationSet& set);

// Fixed-order pairwise summation; deterministic independent of threading.
double pairwise_sum(const std::vector<double>& v);

}  // namespace tofu
