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
#include "tofu/geometry.hpp"

#include <cmath>

namespace tofu {

Vec3 Mat3::operator*(const Vec3& v) const {
  return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
          a[3] * v.x + a[4] * v.y + a[5] * v.z,
          a[6] * v.x + a[7] * v.y + a[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r.a = {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
  return r;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r.a = {c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c};
  return r;
}

Mat3 rotation(const EulerAngles& e) {
  return rot_z(e.alpha) * rot_y(e.beta) * rot_z(e.gamma);
}

std::array<std::array<double, 5>, 5> wigner_d2(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  const double p = 0.5 * (1.0 + c);
  const double r = 0.5 * (1.0 - c);
  const double q = std::sqrt(6.0) / 4.0;
  const double sc = std::sqrt(1.5) * s * c;

  std::array<std::array<double, 5>, 5> d{};
  auto at = [&d](int mp, int m) -> double& {
    return d[std::size_t(mp + 2)][std::size_t(m + 2)];
  };
  at(2, 2) = p * p;
  at(2, 1) = -p * s;
  at(2, 0) = q * s * s;
  at(2, -1) = -r * s;
  at(2, -2) = r * r;
  at(1, 2) = p * s;
  at(1, 1) = p * (2.0 * c - 1.0);
  at(1, 0) = -sc;
  at(1, -1) = r * (2.0 * c + 1.0);
  at(1, -2) = -r * s;
  at(0, 2) = q * s * s;
  at(0, 1) = sc;
  at(0, 0) = 0.5 * (3.0 * c * c - 1.0);
  at(0, -1) = -sc;
  at(0, -2) = q * s * s;
  at(-1, 2) = r * s;
  at(-1, 1) = r * (2.0 * c + 1.0);
  at(-1, 0) = sc;
  at(-1, -1) = p * (2.0 * c - 1.0);
  at(-1, -2) = -p * s;
  at(-2, 2) = r * r;
  at(-2, 1) = r * s;
  at(-2, 0) = q * s * s;
  at(-2, -1) = p * s;
  at(-2, -2) = p * p;
  return d;
}

std::array<std::array<std::complex<double>, 5>, 5> wigner_big_d2(const EulerAngles& e) {
  const auto d = wigner_d2(e.beta);
  std::array<std::array<std::complex<double>, 5>, 5> big{};
  for (int mp = -2; mp <= 2; ++mp)
    for (int m = -2; m <= 2; ++m)
      big[std::size_t(mp + 2)][std::size_t(m + 2)] =
          std::polar(1.0, -mp * e.alpha) * d[std::size_t(mp + 2)][std::size_t(m + 2)] *
          std::polar(1.0, -m * e.gamma);
  return big;
}

Rank2 rotate_rank2(const Rank2& rho, const EulerAngles& e) {
  const auto big = wigner_big_d2(e);
  Rank2 out{};
  for (int mp = 0; mp < 5; ++mp) {
    std::complex<double> s = 0.0;
    for (int m = 0; m < 5; ++m) s += big[std::size_t(mp)][std::size_t(m)] * rho[std::size_t(m)];
    out[std::size_t(mp)] = s;
  }
  return out;
}

Rank2 rank2_axial(double scale) {
  Rank2 r{};
  r[2] = scale;
  return r;
}

Rank2 rank2_shift(double aniso, double asymmetry) {
  Rank2 r{};
  r[2] = aniso;
  r[0] = r[4] = -aniso * asymmetry / std::sqrt(6.0);
  return r;
}

}  // namespace tofu
