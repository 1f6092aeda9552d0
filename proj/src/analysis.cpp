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
#include "tofu/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tofu/constants.hpp"
#include "tofu/propagator.hpp"

namespace tofu::analysis {

using constants::pi;
using constants::two_pi;

double ising_frequency(double b, double beta, double gamma, Condition cond) {
  const auto [c1, c2] = dipolar_fourier_factors(b, beta);
  if (cond == Condition::quarter) return (3.0 / 16.0) * c1 * std::cos(gamma);
  return 0.75 * (c1 * std::cos(gamma) + 0.25 * c2 * std::cos(2.0 * gamma));
}

double reference_signal(double t, const std::vector<double>& j_list_hz, double lambda) {
  double s = std::exp(-lambda * t);
  for (double j : j_list_hz) s *= std::cos(pi * j * t);
  return s;
}

double main_signal(double t, const std::vector<double>& j_list_hz, double lambda, double b,
                   const OrientationSet& powder, Condition cond) {
  std::vector<double> vals(powder.size());
  for (std::size_t i = 0; i < powder.size(); ++i) {
    const auto& e = powder.entries[i];
    vals[i] = std::cos(ising_frequency(b, e.angles.beta, e.angles.gamma, cond) * t);
  }
  return reference_signal(t, j_list_hz, lambda) * powder_average(vals, powder);
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(std::size_t(n));
  w.resize(std::size_t(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[std::size_t(i)] = -z;
    x[std::size_t(n - 1 - i)] = z;
    w[std::size_t(i)] = w[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace

const OrientationSet& chart_quadrature() {
  static const OrientationSet set = [] {
    OrientationSet s;
    s.scheme = "gauss-legendre-256x128";
    s.n_ab = 256;
    s.n_gamma = 128;
    std::vector<double> x, w;
    gauss_legendre(256, x, w);
    for (int i = 0; i < 256; ++i) {
      const double beta = std::acos(x[std::size_t(i)]);
      for (int g = 0; g < 128; ++g)
        s.entries.push_back(
            {{0.0, beta, two_pi * g / 128.0}, w[std::size_t(i)] / 2.0 / 128.0});
    }
    return s;
  }();
  return set;
}

EtaSeries eta(const std::vector<double>& t, const std::vector<double>& s_r,
              const std::vector<double>& s_m, double floor) {
  if (t.size() != s_r.size() || t.size() != s_m.size())
    throw NumericalError("eta: series lengths differ");
  EtaSeries out;
  out.t = t;
  out.eta.resize(t.size(), 0.0);
  out.valid.resize(t.size(), true);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(s_r[i]) < floor) {
      out.valid[i] = false;
      continue;
    }
    out.eta[i] = (s_r[i] - s_m[i]) / s_r[i];
  }
  return out;
}

FresnelChart fresnel_chart(const std::vector<double>& distances_angstrom,
                           const std::vector<double>& t_grid, double gamma_a, double gamma_b,
                           Condition cond) {
  FresnelChart chart;
  chart.distances = distances_angstrom;
  chart.t = t_grid;
  chart.gamma_a = gamma_a;
  chart.gamma_b = gamma_b;
  chart.condition = cond;
  const auto& quad = chart_quadrature();
  for (double r : distances_angstrom) {
    if (!(r > 0.0)) throw ConfigError("fresnel chart: distances must be positive");
    const double b = dipole_coupling_constant(constants::angstrom_to_m(r), gamma_a, gamma_b);
    std::vector<double> curve;
    curve.reserve(t_grid.size());
    for (double t : t_grid)
      curve.push_back(1.0 - main_signal(t, {}, 0.0, b, quad, cond));
    chart.eta.push_back(std::move(curve));
  }
  return chart;
}

EffectiveHamiltonianReport effective_hamiltonian(const SpinSystem& system,
                                                 const EulerAngles& crystallite, Condition cond) {
  system.validate();
  const SystemCoeffs coeffs = fourier_coefficients(system, crystallite, 0.0);
  const OperatorSet ops = spin_operators(system.size());
  EffectiveHamiltonianReport rep;
  rep.condition = cond;
  rep.matrix = CMat(ops.dim);

  for (int k = 0; k < system.size(); ++k) {
    const auto& fc = coeffs.shift[std::size_t(k)];
    double c = 0.5 * fc.coeff(0).real();
    if (cond == Condition::half) c += 0.25 * fc.cos_combo(1);
    rep.shift_coeff.push_back(c);
    if (c != 0.0) rep.matrix.add_scaled(c, ops.iz[std::size_t(k)]);
  }

  for (std::size_t d = 0; d < system.dipolar.size(); ++d) {
    const auto& cp = system.dipolar[d];
    const auto& fc = coeffs.dipolar[d];
    const bool homo = std::abs(system.spins[std::size_t(cp.spin_a)].gyromagnetic_ratio -
                               system.spins[std::size_t(cp.spin_b)].gyromagnetic_ratio) <=
                      1e-6 * std::abs(system.spins[std::size_t(cp.spin_a)].gyromagnetic_ratio);
    double kappa = 0.0;
    if (homo) {
      // w1 + w-1 = 2 c1 cos(gamma); w2 + w-2 feeds the half condition
      if (cond == Condition::quarter)
        kappa = (3.0 / 16.0) * 0.5 * fc.cos_combo(1);
      else
        kappa = 0.75 * (0.5 * fc.cos_combo(1) + 0.25 * 0.5 * fc.cos_combo(2));
    } else {
      // heteronuclear 2 IzXz: recoupled only when cos^2(Ct) demodulates m = +-1
      kappa = cond == Condition::quarter ? 0.0 : 0.25 * fc.cos_combo(1);
    }
    rep.ising_coeff.push_back(kappa);
    rep.planar_coeff.push_back(homo ? -kappa : 0.0);
    if (kappa != 0.0) {
      const auto a = std::size_t(cp.spin_a);
      const auto b = std::size_t(cp.spin_b);
      CMat zz = ops.iz[a] * ops.iz[b];
      rep.matrix.add_scaled(2.0 * kappa, zz);
      if (homo) {
        CMat xx = ops.ix[a] * ops.ix[b];
        rep.matrix.add_scaled(-kappa, xx);
        CMat yy = ops.iy[a] * ops.iy[b];
        rep.matrix.add_scaled(-kappa, yy);
      }
    }
  }

  for (const auto& j : system.scalar) {
    const auto a = std::size_t(j.spin_a);
    const auto b = std::size_t(j.spin_b);
    const bool homo = std::abs(system.spins[a].gyromagnetic_ratio -
                               system.spins[b].gyromagnetic_ratio) <=
                      1e-6 * std::abs(system.spins[a].gyromagnetic_ratio);
    const double w = two_pi * j.j;
    CMat zz = ops.iz[a] * ops.iz[b];
    rep.matrix.add_scaled(w, zz);
    if (homo) {
      CMat xx = ops.ix[a] * ops.ix[b];
      rep.matrix.add_scaled(w, xx);
      CMat yy = ops.iy[a] * ops.iy[b];
      rep.matrix.add_scaled(w, yy);
    }
  }
  return rep;
}

TruncationDiagnostics truncation_check(const SpinSystem& system, const TofuParams& tofu,
                                       double warn_below, double fail_below) {
  system.validate();
  TruncationDiagnostics diag;
  diag.warn_below = warn_below;
  diag.fail_below = fail_below;

  // Deterministic orientation sample for the anisotropic coefficients; the
  // moduli |w1|, |w2| are independent of the crystallite gamma angle.
  const OrientationSet sample = generate_orientations(PowderScheme::golden_spiral, 64, 1);
  std::vector<double> w1max(std::size_t(system.size()), 0.0);
  std::vector<double> w2max(std::size_t(system.size()), 0.0);
  for (const auto& o : sample.entries) {
    const SystemCoeffs c = fourier_coefficients(system, o.angles, tofu.omega_r);
    for (int k = 0; k < system.size(); ++k) {
      w1max[std::size_t(k)] =
          std::max(w1max[std::size_t(k)], std::abs(c.shift[std::size_t(k)].coeff(1)));
      w2max[std::size_t(k)] =
          std::max(w2max[std::size_t(k)], std::abs(c.shift[std::size_t(k)].coeff(2)));
    }
  }

  const double b = tofu.b_field, c = tofu.c_field, wr = tofu.omega_r;
  auto ratio = [](double num, double den) {
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
  };
  auto min_branch = [&](double shiftscale, double den) {
    return std::min(ratio(std::abs(b - shiftscale), den), ratio(std::abs(b + shiftscale), den));
  };

  diag.worst = TruncationDiagnostics::Level::pass;
  for (int k = 0; k < system.size(); ++k) {
    TruncationDiagnostics::PerSpin ps;
    ps.label = system.spins[std::size_t(k)].label;
    ps.margin[0] = min_branch(2.0 * c, std::abs(system.spins[std::size_t(k)].iso_shift));
    ps.margin[1] = min_branch(2.0 * c + wr, w1max[std::size_t(k)]);
    ps.margin[2] = min_branch(2.0 * (c + wr), w2max[std::size_t(k)]);
    const double m = *std::min_element(ps.margin.begin(), ps.margin.end());
    ps.level = m < fail_below   ? TruncationDiagnostics::Level::fail
               : m < warn_below ? TruncationDiagnostics::Level::warn
                                : TruncationDiagnostics::Level::pass;
    if (int(ps.level) > int(diag.worst)) diag.worst = ps.level;
    diag.spins.push_back(std::move(ps));
  }
  return diag;
}

DistanceFit fit_distance(const EtaSeries& data, double gamma_a, double gamma_b,
                         const FitOptions& opts) {
  std::vector<std::size_t> pts;
  for (std::size_t i = 0; i < data.t.size(); ++i)
    if (data.valid[i]) pts.push_back(i);
  if (pts.size() < 3)
    throw ConfigError("fit_distance: need at least 3 valid eta points, have " +
                      std::to_string(pts.size()));

  const auto& quad = chart_quadrature();
  auto sum_sq = [&](double r) {
    const double b = dipole_coupling_constant(constants::angstrom_to_m(r), gamma_a, gamma_b);
    double s = 0.0;
    for (std::size_t i : pts) {
      const double model = 1.0 - main_signal(data.t[i], {}, 0.0, b, quad, opts.condition);
      const double d = data.eta[i] - model;
      s += d * d;
    }
    return s;
  };

  const int n_grid = int(std::floor((opts.r_max - opts.r_min) / opts.r_step + 0.5)) + 1;
  std::vector<double> res(static_cast<std::size_t>(n_grid));
  int best = 0;
  for (int i = 0; i < n_grid; ++i) {
    res[std::size_t(i)] = sum_sq(opts.r_min + i * opts.r_step);
    if (res[std::size_t(i)] < res[std::size_t(best)]) best = i;
  }

  DistanceFit fit;
  double r_best = opts.r_min + best * opts.r_step;
  if (best == 0 || best == n_grid - 1) {
    fit.at_bound = true;
    fit.note = best == n_grid - 1 ? "no detectable coupling (fit at upper distance bound)"
                                  : "fit at lower distance bound";
  } else {
    // parabolic refinement on the winning triplet
    const double ym = res[std::size_t(best - 1)], y0 = res[std::size_t(best)],
                 yp = res[std::size_t(best + 1)];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom > 0.0) r_best += 0.5 * opts.r_step * (ym - yp) / denom;
  }
  fit.r_angstrom = r_best;
  const double min_res = sum_sq(r_best);
  fit.residual = std::sqrt(min_res / double(pts.size()));

  // uncertainty: extent of the region with residual <= 2x minimum
  const double lim = 2.0 * std::max(min_res, 1e-30);
  double lo = r_best, hi = r_best;
  for (int i = best; i >= 0; --i) {
    if (res[std::size_t(i)] > lim) break;
    lo = opts.r_min + i * opts.r_step;
  }
  for (int i = best; i < n_grid; ++i) {
    if (res[std::size_t(i)] > lim) break;
    hi = opts.r_min + i * opts.r_step;
  }
  fit.uncertainty = std::max(0.5 * (hi - lo), 0.5 * opts.r_step);
  return fit;
}

}  // namespace tofu::analysis
