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

#include <cmath>
#include <optional>
#include <string_view>

namespace tofu::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// mu0/4pi is exact by the pre-2019 SI definition and good to ~1e-10 after it.
inline constexpr double mu0_over_4pi = 1.0e-7;        // T^2 m^3 / J
inline constexpr double hbar = 1.054571817e-34;       // J s (CODATA 2018)

// arccos(1/sqrt(3)), kept at full double precision.
inline const double magic_angle = std::acos(1.0 / std::sqrt(3.0));

// Gyromagnetic ratios, rad s^-1 T^-1.
inline constexpr double gamma_1h = 2.6752218744e8;
inline constexpr double gamma_13c = 6.728284e7;
inline constexpr double gamma_15n = -2.7126180e7;
inline constexpr double gamma_31p = 1.08394e8;
inline constexpr double gamma_19f = 2.518148e8;

std::optional<double> gamma_of_nucleus(std::string_view name);

inline double hz_to_rad(double hz) { return two_pi * hz; }
inline double rad_to_hz(double rad) { return rad / two_pi; }
inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }
inline double angstrom_to_m(double a) { return a * 1e-10; }

}  // namespace tofu::constants
