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
#include "tofu/spinsys.hpp"

#include <cmath>
#include <set>
#include <tuple>

#include "tofu/constants.hpp"

namespace tofu {

namespace {
constexpr double kGammaMatchTol = 1e-6;  // relative
}

int SpinSystem::find_spin(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (spins[std::size_t(i)].label == label) return i;
  return -1;
}

bool SpinSystem::homonuclear(int k) const {
  const double gs = spins[std::size_t(s_spin)].gyromagnetic_ratio;
  const double gk = spins[std::size_t(k)].gyromagnetic_ratio;
  return std::abs(gk - gs) <= kGammaMatchTol * std::abs(gs);
}

std::vector<int> SpinSystem::observed_spins() const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k)
    if (k != s_spin && homonuclear(k)) out.push_back(k);
  return out;
}

void SpinSystem::validate() const {
  if (spins.empty()) throw ConfigError("spin system: no spins defined");
  if (size() > kMaxSpins)
    throw ConfigError("spin system: " + std::to_string(size()) + " spins exceed the supported maximum of " +
                      std::to_string(kMaxSpins));
  std::set<std::string> labels;
  for (const auto& s : spins) {
    if (s.label.empty()) throw ConfigError("spin system: spin with empty label");
    if (!labels.insert(s.label).second)
      throw ConfigError("spin system: duplicate spin label '" + s.label + "'");
    if (s.gyromagnetic_ratio == 0.0)
      throw ConfigError("spin system: spin '" + s.label + "' has zero gyromagnetic ratio");
    if (s.csa_asymmetry < 0.0 || s.csa_asymmetry > 1.0)
      throw ConfigError("spin system: spin '" + s.label + "' csa asymmetry " +
                        std::to_string(s.csa_asymmetry) + " outside [0, 1]");
  }
  if (s_spin < 0 || s_spin >= size()) throw ConfigError("spin system: s_spin index out of range");
  std::set<std::pair<int, int>> seen_d, seen_j;
  auto norm_pair = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
  for (const auto& d : dipolar) {
    if (d.spin_a < 0 || d.spin_a >= size() || d.spin_b < 0 || d.spin_b >= size())
      throw ConfigError("spin system: dipolar coupling references an undefined spin");
    if (d.spin_a == d.spin_b) throw ConfigError("spin system: dipolar coupling of a spin with itself");
    if (!seen_d.insert(norm_pair(d.spin_a, d.spin_b)).second)
      throw ConfigError("spin system: duplicate dipolar coupling between '" +
                        spins[std::size_t(d.spin_a)].label + "' and '" + spins[std::size_t(d.spin_b)].label + "'");
    const double ga = spins[std::size_t(d.spin_a)].gyromagnetic_ratio;
    const double gb = spins[std::size_t(d.spin_b)].gyromagnetic_ratio;
    if (ga * gb > 0.0 && d.b_is > 0.0)
      throw ConfigError("spin system: dipolar coupling between '" + spins[std::size_t(d.spin_a)].label +
                        "' and '" + spins[std::size_t(d.spin_b)].label +
                        "' must be <= 0 for like-sign gyromagnetic ratios");
  }
  for (const auto& j : scalar) {
    if (j.spin_a < 0 || j.spin_a >= size() || j.spin_b < 0 || j.spin_b >= size())
      throw ConfigError("spin system: scalar coupling references an undefined spin");
    if (j.spin_a == j.spin_b) throw ConfigError("spin system: scalar coupling of a spin with itself");
    if (!seen_j.insert(norm_pair(j.spin_a, j.spin_b)).second)
      throw ConfigError("spin system: duplicate scalar coupling");
  }
}

std::complex<double> FourierCoeffs::eval(double t, double omega_r) const {
  std::complex<double> s = 0.0;
  for (int mm = -2; mm <= 2; ++mm) s += coeff(mm) * std::polar(1.0, mm * omega_r * t);
  return s;
}

double FourierCoeffs::cos_combo(int mm) const {
  return (coeff(mm) + coeff(-mm)).real();
}

double dipole_coupling_constant(double r_m, double gamma_a, double gamma_b) {
  if (!(r_m > 0.0)) throw std::domain_error("dipole_coupling_constant: distance must be positive");
  return -constants::mu0_over_4pi * gamma_a * gamma_b * constants::hbar / (r_m * r_m * r_m);
}

std::pair<double, double> dipolar_fourier_factors(double b_is, double beta) {
  const double c1 = b_is * std::sin(2.0 * beta) / (2.0 * std::sqrt(2.0));
  const double s = std::sin(beta);
  const double c2 = -0.25 * b_is * s * s;
  return {c1, c2};
}

namespace {

// Lab-frame secular projection of a rotor-frame rank-2 tensor:
//   w(t) = sum_m w_m exp(i m w_r t),  w_m = d^2_{-m,0}(theta_m) rho^R_{-m}.
// The rotor -> lab transformation is Ry(-theta_m) Rz(w_r t); its sign
// conventions are pinned by the c1 factor-consistency test.
FourierCoeffs lab_secular(const Rank2& rotor) {
  const auto d = wigner_d2(constants::magic_angle);
  FourierCoeffs out;
  for (int mm = -2; mm <= 2; ++mm)
    out.coeff(mm) = d[std::size_t(-mm + 2)][2] * rotor[std::size_t(-mm + 2)];
  return out;
}

// Crystal -> rotor: active Rz(gamma) Ry(beta) Rz(alpha), so that the
// crystallite gamma angle composes directly with the rotor rotation about
// the spinning axis (gamma is the rotor-phase angle of powder averaging).
FourierCoeffs interaction_coeffs(const Rank2& pas, const EulerAngles& pc, const EulerAngles& cr) {
  const EulerAngles cr_active{cr.gamma, cr.beta, cr.alpha};
  return lab_secular(rotate_rank2(rotate_rank2(pas, pc), cr_active));
}

}  // namespace

SystemCoeffs fourier_coefficients(const SpinSystem& system, const EulerAngles& crystallite,
                                  double omega_r) {
  (void)omega_r;  // coefficients are independent of the spinning rate
  SystemCoeffs out;
  out.shift.reserve(system.spins.size());
  for (const auto& s : system.spins) {
    FourierCoeffs fc;
    if (s.csa_aniso != 0.0)
      fc = interaction_coeffs(rank2_shift(s.csa_aniso, s.csa_asymmetry), s.csa_euler, crystallite);
    fc.coeff(0) += s.iso_shift;
    out.shift.push_back(fc);
  }
  out.dipolar.reserve(system.dipolar.size());
  for (const auto& d : system.dipolar)
    out.dipolar.push_back(interaction_coeffs(rank2_axial(d.b_is), d.pc_euler, crystallite));
  return out;
}

namespace {

EulerAngles euler_from_words(const ConfigSection& sec, const std::string& key) {
  if (!sec.has(key)) return {};
  const auto v = sec.numbers(key);
  if (v.size() != 3)
    throw ConfigError("config: [" + sec.name + "] " + key + ": expected three angles in degrees");
  return {constants::deg_to_rad(v[0]), constants::deg_to_rad(v[1]), constants::deg_to_rad(v[2])};
}

std::pair<int, int> coupling_pair(const SpinSystem& sys, const ConfigSection& sec) {
  const auto w = sec.words("spins");
  if (w.size() != 2)
    throw ConfigError("config: [" + sec.name + "] spins: expected two spin labels");
  const int a = sys.find_spin(w[0]);
  const int b = sys.find_spin(w[1]);
  if (a < 0) throw ConfigError("config: [" + sec.name + "] references unknown spin '" + w[0] + "'");
  if (b < 0) throw ConfigError("config: [" + sec.name + "] references unknown spin '" + w[1] + "'");
  return {a, b};
}

}  // namespace

SpinSystem build_spin_system(const ConfigDoc& doc) {
  SpinSystem sys;
  for (const auto* sec : doc.all("spin")) {
    Spin s;
    s.label = sec->get("label");
    if (sec->has("gamma")) {
      s.gyromagnetic_ratio = sec->number("gamma");
    } else {
      const std::string nuc = sec->get_or("nucleus", "13C");
      const auto g = constants::gamma_of_nucleus(nuc);
      if (!g) throw ConfigError("config: [spin] unknown nucleus '" + nuc + "' (use gamma = <rad/s/T>)");
      s.gyromagnetic_ratio = *g;
    }
    s.iso_shift = constants::hz_to_rad(sec->number_or("iso_shift_hz", 0.0));
    s.csa_aniso = constants::hz_to_rad(sec->number_or("csa_aniso_hz", 0.0));
    s.csa_asymmetry = sec->number_or("csa_asymmetry", 0.0);
    s.csa_euler = euler_from_words(*sec, "csa_euler_deg");
    sys.spins.push_back(std::move(s));
  }
  if (sys.spins.empty()) throw ConfigError("config: no [spin] sections found");

  for (const auto* sec : doc.all("dipole")) {
    DipolarCoupling d;
    std::tie(d.spin_a, d.spin_b) = coupling_pair(sys, *sec);
    const bool has_b = sec->has("b_hz");
    const bool has_r = sec->has("distance_angstrom");
    if (has_b == has_r)
      throw ConfigError("config: [dipole] needs exactly one of b_hz or distance_angstrom");
    if (has_b) {
      d.b_is = constants::hz_to_rad(sec->number("b_hz"));
    } else {
      const double r = sec->number("distance_angstrom");
      if (!(r > 0.0)) throw ConfigError("config: [dipole] distance_angstrom must be positive");
      d.b_is = dipole_coupling_constant(constants::angstrom_to_m(r),
                                        sys.spins[std::size_t(d.spin_a)].gyromagnetic_ratio,
                                        sys.spins[std::size_t(d.spin_b)].gyromagnetic_ratio);
    }
    d.pc_euler = euler_from_words(*sec, "euler_deg");
    sys.dipolar.push_back(d);
  }

  for (const auto* sec : doc.all("jcoupling")) {
    ScalarCoupling j;
    std::tie(j.spin_a, j.spin_b) = coupling_pair(sys, *sec);
    j.j = sec->number("j_hz");
    sys.scalar.push_back(j);
  }

  const auto* sysec = doc.find("system");
  if (sysec == nullptr || !sysec->has("s_spin"))
    throw ConfigError("config: missing [system] s_spin = <label>");
  sys.s_spin = sys.find_spin(sysec->get("s_spin"));
  if (sys.s_spin < 0)
    throw ConfigError("config: [system] s_spin references unknown spin '" + sysec->get("s_spin") + "'");

  sys.validate();
  return sys;
}

SpinSystem build_spin_system(const std::string& config_text) {
  return build_spin_system(parse_config(config_text));
}

}  // namespace tofu
