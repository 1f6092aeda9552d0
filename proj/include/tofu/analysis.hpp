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

#include "tofu/cmat.hpp"
#include "tofu/powder.hpp"
#include "tofu/rfgen.hpp"
#include "tofu/spinsys.hpp"

namespace tofu::analysis {

enum class Condition { quarter, half };  // C = w_r/4 or w_r/2

// Recoupled Ising frequency (coefficient of 2 Iz Sz) for a pair with
// coupling b at orientation (beta, gamma) in the rotor frame.
double ising_frequency(double b, double beta, double gamma, Condition cond);

// S_r(T) = exp(-lambda T) prod_j cos(pi J_j T)
double reference_signal(double t, const std::vector<double>& j_list_hz, double lambda);

// S_m(T) = S_r(T) <cos(w^DD T)> averaged over the orientation set.
double main_signal(double t, const std::vector<double>& j_list_hz, double lambda, double b,
                   const OrientationSet& powder, Condition cond = Condition::quarter);

// Dense deterministic quadrature for analytic curves: Gauss-Legendre in
// cos(beta) (256 points) times a uniform gamma circle (128 points).
const OrientationSet& chart_quadrature();

struct EtaSeries {
  std::vector<double> t;
  std::vector<double> eta;
  std::vector<bool> valid;  // false where |S_r| fell below the floor
};

// eta = (S_r - S_m) / S_r pointwise; points with |S_r| < floor are flagged
// invalid instead of divided.
EtaSeries eta(const std::vector<double>& t, const std::vector<double>& s_r,
              const std::vector<double>& s_m, double floor = 1e-3);

struct FresnelChart {
  std::vector<double> distances;          // Angstrom
  std::vector<double> t;                  // seconds
  std::vector<std::vector<double>> eta;   // [distance][time]
  double gamma_a = 0.0, gamma_b = 0.0;    // rad s^-1 T^-1
  Condition condition = Condition::quarter;
};

FresnelChart fresnel_chart(const std::vector<double>& distances_angstrom,
                           const std::vector<double>& t_grid, double gamma_a, double gamma_b,
                           Condition cond = Condition::quarter);

// First-order averaged Hamiltonian for the chosen recoupling condition,
// built from the crystallite's Fourier coefficients. Scalar couplings enter
// unscaled (I.S commutes with every rf frame).
struct EffectiveHamiltonianReport {
  Condition condition = Condition::quarter;
  CMat matrix;                        // rad/s
  std::vector<double> shift_coeff;    // per spin, coefficient of Iz
  std::vector<double> ising_coeff;    // per dipolar coupling, coefficient of 2IzSz
  std::vector<double> planar_coeff;   // per dipolar coupling, coefficient of (IxSx + IySy)
};

EffectiveHamiltonianReport effective_hamiltonian(const SpinSystem& system,
                                                 const EulerAngles& crystallite, Condition cond);

// Margins of the transverse-truncation conditions per spin:
//   |B +- 2C| / |w0|, |B +- (2C + wr)| / |w1|, |B +- 2(C + wr)| / |w2|
// with |w1|, |w2| maximized over a deterministic orientation sample.
struct TruncationDiagnostics {
  enum class Level { pass, warn, fail };
  struct PerSpin {
    std::string label;
    std::array<double, 3> margin;  // m = 0, 1, 2 conditions
    Level level = Level::pass;
  };
  std::vector<PerSpin> spins;
  double warn_below = 5.0;
  double fail_below = 2.0;
  Level worst = Level::pass;
};

TruncationDiagnostics truncation_check(const SpinSystem& system, const TofuParams& tofu,
                                       double warn_below = 5.0, double fail_below = 2.0);

struct DistanceFit {
  double r_angstrom = 0.0;
  double residual = 0.0;     // rms over valid points
  double uncertainty = 0.0;  // half-width where residual <= 2x minimum
  bool at_bound = false;
  std::string note;
};

struct FitOptions {
  double r_min = 1.0, r_max = 6.0, r_step = 0.01;  // Angstrom
  Condition condition = Condition::quarter;
};

DistanceFit fit_distance(const EtaSeries& data, double gamma_a, double gamma_b,
                         const FitOptions& opts = {});

}  // namespace tofu::analysis
