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
#include <string>
#include <vector>

#include "tofu/config.hpp"
#include "tofu/geometry.hpp"

namespace tofu {

inline constexpr int kMaxSpins = 6;  // Hilbert space <= 64

// All internal frequencies are angular (rad/s); config files speak Hz,
// degrees and Angstrom.
struct Spin {
  std::string label;
  double gyromagnetic_ratio = 0.0;  // rad s^-1 T^-1
  double iso_shift = 0.0;           // rad/s, offset from the rf carrier
  double csa_aniso = 0.0;           // rad/s
  double csa_asymmetry = 0.0;       // in [0, 1]
  EulerAngles csa_euler;            // PAS -> crystal frame
};

struct DipolarCoupling {
  int spin_a = -1;
  int spin_b = -1;
  double b_is = 0.0;     // rad/s
  EulerAngles pc_euler;  // PAS (z along internuclear vector) -> crystal frame
};

struct ScalarCoupling {
  int spin_a = -1;
  int spin_b = -1;
  double j = 0.0;  // Hz
};

struct SpinSystem {
  std::vector<Spin> spins;
  std::vector<DipolarCoupling> dipolar;
  std::vector<ScalarCoupling> scalar;
  int s_spin = 0;  // the dephasing S spin

  int size() const { return int(spins.size()); }
  int find_spin(const std::string& label) const;  // -1 if absent

  // Spins sharing the s_spin's gyromagnetic ratio form the observe channel;
  // any other spin is a passive heteronucleus (rf never touches it, couplings
  // to it are Ising-only).
  bool homonuclear(int k) const;
  std::vector<int> observed_spins() const;  // homonuclear minus s_spin

  void validate() const;  // throws ConfigError
};

// Fourier coefficients of one interaction frequency under MAS:
//   w(t) = sum_{m=-2}^{2} w_m exp(i m w_r t)
struct FourierCoeffs {
  std::array<std::complex<double>, 5> m{};  // index m+2

  std::complex<double> coeff(int mm) const { return m[std::size_t(mm + 2)]; }
  std::complex<double>& coeff(int mm) { return m[std::size_t(mm + 2)]; }
  std::complex<double> eval(double t, double omega_r) const;
  // w_{+m} + w_{-m}; real for physical (conjugate-symmetric) coefficients.
  double cos_combo(int mm) const;
};

struct SystemCoeffs {
  std::vector<FourierCoeffs> shift;    // one per spin (iso + CSA)
  std::vector<FourierCoeffs> dipolar;  // one per dipolar coupling
};

// b_IS = -(mu0/4pi) * gamma_a * gamma_b * hbar / r^3, in rad/s.
double dipole_coupling_constant(double r_m, double gamma_a, double gamma_b);

// c1 = b sin(2 beta) / (2 sqrt(2)),  c2 = -b sin^2(beta) / 4.
std::pair<double, double> dipolar_fourier_factors(double b_is, double beta);

// Coefficients for every interaction of the system at one crystallite
// orientation (crystal -> rotor frame Euler angles).
SystemCoeffs fourier_coefficients(const SpinSystem& system, const EulerAngles& crystallite,
                                  double omega_r);

SpinSystem build_spin_system(const std::string& config_text);
SpinSystem build_spin_system(const ConfigDoc& doc);

}  // namespace tofu
