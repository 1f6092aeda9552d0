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

#include <array>
#include <complex>

namespace tofu {

// Active ZYZ rotations everywhere: R(a,b,g) = Rz(a) Ry(b) Rz(g).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

struct Mat3 {
  std::array<double, 9> a{};  // row-major
  double& operator()(int i, int j) { return a[std::size_t(3 * i + j)]; }
  double operator()(int i, int j) const { return a[std::size_t(3 * i + j)]; }
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator*(const Mat3& o) const;
  Mat3 transpose() const;
};

Mat3 rot_z(double angle);
Mat3 rot_y(double angle);
Mat3 rotation(const EulerAngles& e);

// Rank-2 spherical tensor machinery. Component vectors are indexed
// [m + 2] for m = -2..2. For a real symmetric traceless Cartesian tensor T,
// the components rho are normalized such that
//   (R T R^T)_zz = sum_m rho'_m C_2m(z) = rho'_0,
// i.e. rho_0 reproduces the zz element directly.
using Rank2 = std::array<std::complex<double>, 5>;

// Reduced Wigner matrix d^2_{m'm}(beta), indexed [m'+2][m+2].
std::array<std::array<double, 5>, 5> wigner_d2(double beta);

// Full D^2_{m'm}(a,b,g) = exp(-i m' a) d^2_{m'm}(b) exp(-i m g).
std::array<std::array<std::complex<double>, 5>, 5> wigner_big_d2(const EulerAngles& e);

// Components of the actively rotated tensor: rho'_{m'} = sum_m D_{m'm} rho_m.
Rank2 rotate_rank2(const Rank2& rho, const EulerAngles& e);

// PAS components for the supported interactions.
Rank2 rank2_axial(double scale);                      // dipolar: rho_0 = b
Rank2 rank2_shift(double aniso, double asymmetry);    // CSA

}  // namespace tofu
