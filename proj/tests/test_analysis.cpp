#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "tofu/analysis.hpp"
#include "tofu/constants.hpp"
#include "tofu/propagator.hpp"

using namespace tofu;
using namespace tofu::analysis;
namespace constants = tofu::constants;
using constants::pi;
using constants::two_pi;

namespace {

const double kB = -two_pi * 2251.0;  // 1.5 A pair
const double kT240 = 240.0 / 20e3;   // 240 rotor periods at 20 kHz

// independent dense quadrature (trapezoid in cos beta, 2048 gamma angles)
double oracle_main_cos(double b, double t, Condition cond = Condition::quarter) {
  const int nb = 2001, ng = 2048;
  double acc = 0.0, wsum = 0.0;
  for (int i = 0; i < nb; ++i) {
    const double cb = -1.0 + 2.0 * i / (nb - 1);
    const double beta = std::acos(cb);
    const double w = (i == 0 || i == nb - 1) ? 0.5 : 1.0;
    double gacc = 0.0;
    for (int j = 0; j < ng; ++j) {
      const double g = (j + 0.5) * two_pi / ng;
      gacc += std::cos(ising_frequency(b, beta, g, cond) * t);
    }
    acc += w * gacc / ng;
    wsum += w;
  }
  return acc / wsum;
}

SpinSystem pair_at(double beta_deg, double shift_i_hz = 0.0, double b = kB) {
  SpinSystem sys;
  sys.spins.push_back({"S", constants::gamma_13c, 0.0, 0.0, 0.0, {}});
  sys.spins.push_back({"I", constants::gamma_13c, two_pi * shift_i_hz, 0.0, 0.0, {}});
  sys.dipolar.push_back({0, 1, b, {0.0, constants::deg_to_rad(beta_deg), 0.0}});
  sys.s_spin = 0;
  return sys;
}

}  // namespace

TEST_CASE("reference signal closed form") {
  CHECK(reference_signal(0.0, {35.0, 55.0}, 12.0) == doctest::Approx(1.0));
  CHECK(reference_signal(10e-3, {50.0}, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(reference_signal(50e-3, {}, 20.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("main signal closed form") {
  const auto& quad = chart_quadrature();
  for (double t : {0.0, 2e-3, 7e-3})
    CHECK(main_signal(t, {35.0}, 15.0, 0.0, quad) ==
          doctest::Approx(reference_signal(t, {35.0}, 15.0)).epsilon(1e-12));
  // frozen regression value, computed once with the dense independent rule
  CHECK(main_signal(kT240, {}, 0.0, kB, quad) == doctest::Approx(-0.016804).epsilon(1e-3));
  CHECK(std::abs(main_signal(kT240, {}, 0.0, kB, quad) - oracle_main_cos(kB, kT240)) < 2e-5);
  // dephasing limit: the powder cosine decays toward zero
  CHECK(std::abs(main_signal(0.2, {}, 0.0, kB, quad)) < 0.02);
}

TEST_CASE("eta identity and cancellation") {
  const std::vector<double> t{0.0, 1e-3, 3e-3, 6e-3, 9e-3, 12e-3};
  const auto& quad = chart_quadrature();
  const std::vector<double> j{35.0};
  for (double lambda : {0.0, 30.0}) {
    std::vector<double> sr, sm;
    for (double ti : t) {
      sr.push_back(reference_signal(ti, j, lambda));
      sm.push_back(main_signal(ti, j, lambda, kB, quad));
    }
    const auto e = eta(t, sr, sm);
    for (std::size_t i = 0; i < t.size(); ++i) {
      REQUIRE(e.valid[i]);
      // closed-form identity: eta = 1 - <cos(w T)> independent of lambda, J
      CHECK(e.eta[i] ==
            doctest::Approx(1.0 - main_signal(t[i], {}, 0.0, kB, quad)).epsilon(1e-12));
    }
  }
  const auto e0 = eta({1.0}, {0.5}, {0.5});
  CHECK(e0.eta[0] == 0.0);
  const auto e1 = eta({1.0}, {0.5}, {0.0});
  CHECK(e1.eta[0] == 1.0);
  // points below the floor are flagged, not divided
  const auto ef = eta({1.0, 2.0}, {1e-6, 0.8}, {0.0, 0.4});
  CHECK_FALSE(ef.valid[0]);
  CHECK(ef.valid[1]);
  CHECK_THROWS_AS(eta({1.0}, {1.0, 2.0}, {1.0}), NumericalError);
}

TEST_CASE("fresnel chart") {
  std::vector<double> tgrid;
  for (int n = 0; n <= 15; ++n) tgrid.push_back(n * 16.0 / 20e3);
  const auto chart =
      fresnel_chart({1.5, 2.5, 2.9}, tgrid, constants::gamma_13c, constants::gamma_13c);
  REQUIRE(chart.eta.size() == 3);
  for (std::size_t d = 0; d < 3; ++d) CHECK(chart.eta[d][0] == doctest::Approx(0.0));
  // ordering before the first lobe: shorter distance dephases faster
  for (std::size_t i = 1; i <= 4; ++i) {
    CHECK(chart.eta[0][i] > chart.eta[1][i]);
    CHECK(chart.eta[1][i] > chart.eta[2][i]);
  }
  // distance -> infinity gives a flat zero curve
  const auto far = fresnel_chart({500.0}, tgrid, constants::gamma_13c, constants::gamma_13c);
  for (double v : far.eta[0]) CHECK(std::abs(v) < 1e-6);
  // long-time limit approaches full dephasing
  const auto lim = fresnel_chart({1.5}, {0.3}, constants::gamma_13c, constants::gamma_13c);
  CHECK(lim.eta[0][0] == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(fresnel_chart({-1.0}, tgrid, 1.0, 1.0), ConfigError);
}

TEST_CASE("effective hamiltonian coefficients") {
  {
    // lone spin, quarter condition: H = w_iso/2 Iz
    SpinSystem sys;
    sys.spins.push_back({"A", constants::gamma_13c, two_pi * 3000.0, 0.0, 0.0, {}});
    sys.s_spin = 0;
    const auto rep = effective_hamiltonian(sys, {}, Condition::quarter);
    CHECK(rep.shift_coeff[0] == doctest::Approx(two_pi * 1500.0).epsilon(1e-12));
    const OperatorSet ops = spin_operators(1);
    CMat expect = ops.iz[0];
    expect *= two_pi * 1500.0;
    CHECK(max_abs_diff(rep.matrix, expect) < 1e-9);
  }
  {
    // pair at beta = 45 deg, gamma = 0: Ising coefficient (3/16) c1
    const SpinSystem sys = pair_at(45.0);
    const auto rep = effective_hamiltonian(sys, {}, Condition::quarter);
    const auto factors = dipolar_fourier_factors(kB, pi / 4.0);
    CHECK(rep.ising_coeff[0] == doctest::Approx((3.0 / 16.0) * factors.first).epsilon(1e-9));
    CHECK(rep.planar_coeff[0] == doctest::Approx(-(3.0 / 16.0) * factors.first).epsilon(1e-9));
    // half condition: the c1 part is four times larger
    const auto reph = effective_hamiltonian(sys, {}, Condition::half);
    CHECK(reph.ising_coeff[0] == doctest::Approx(4.0 * rep.ising_coeff[0]).epsilon(1e-9));
  }
  {
    // beta = 90 deg exposes the c2 path of the half condition: c1 vanishes
    // and the coefficient magnitude is (3/16)|c2| = 3|b|/64
    const SpinSystem sys = pair_at(90.0);
    const auto repq = effective_hamiltonian(sys, {}, Condition::quarter);
    CHECK(std::abs(repq.ising_coeff[0]) < 1e-9);
    const auto reph = effective_hamiltonian(sys, {}, Condition::half);
    const auto factors = dipolar_fourier_factors(kB, pi / 2.0);
    CHECK(std::abs(factors.first) < 1e-9);
    CHECK(std::abs(reph.ising_coeff[0]) ==
          doctest::Approx((3.0 / 16.0) * std::abs(factors.second)).epsilon(1e-9));
  }
  {
    // heteronuclear coupling: absent under quarter, recoupled under half
    SpinSystem sys;
    sys.spins.push_back({"C", constants::gamma_13c, 0.0, 0.0, 0.0, {}});
    sys.spins.push_back({"H", constants::gamma_1h, 0.0, 0.0, 0.0, {}});
    sys.dipolar.push_back({0, 1, -two_pi * 1000.0, {0.0, pi / 4.0, 0.0}});
    sys.s_spin = 0;
    const auto repq = effective_hamiltonian(sys, {}, Condition::quarter);
    CHECK(repq.ising_coeff[0] == 0.0);
    CHECK(repq.planar_coeff[0] == 0.0);
    const auto reph = effective_hamiltonian(sys, {}, Condition::half);
    const auto coeffs = fourier_coefficients(sys, {}, two_pi * 20e3);
    CHECK(reph.ising_coeff[0] ==
          doctest::Approx(0.25 * coeffs.dipolar[0].cos_combo(1)).epsilon(1e-12));
    CHECK(reph.ising_coeff[0] != 0.0);
  }
}

TEST_CASE("quadrature average of the recoupling-frame Hamiltonian matches the report") {
  // time-average the closed-form interaction-frame Hamiltonian with the
  // Fz-secular filter over one element; it must land on the per-term
  // construction for both recoupling conditions
  const double wr = two_pi * 20e3;
  SpinSystem sys = pair_at(45.0, -3000.0);
  sys.spins[0].iso_shift = two_pi * 1000.0;
  const EulerAngles cryst{0.7, 1.1, 0.4};
  const auto coeffs = fourier_coefficients(sys, cryst, wr);
  const OperatorSet ops = spin_operators(2);

  for (auto cc : {std::pair{Condition::quarter, wr / 4.0}, std::pair{Condition::half, wr / 2.0}}) {
    const double element = two_pi / cc.second;
    const int n = 8192;
    CMat avg(ops.dim);
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) * element / n;
      const CMat h = oracle::recoupling_frame_h_formula(
          coeffs.shift[0].eval(t, wr).real(), coeffs.shift[1].eval(t, wr).real(),
          coeffs.dipolar[0].eval(t, wr).real(), cc.second * t, ops);
      avg.add_scaled(1.0 / n, oracle::fz_secular_projection(h, ops));
    }
    const auto rep = effective_hamiltonian(sys, cryst, cc.first);
    const double scale = std::max(avg.max_abs(), rep.matrix.max_abs());
    CHECK(max_abs_diff(avg, rep.matrix) / scale < 1e-6);
  }
}

TEST_CASE("truncation diagnostics") {
  const double wr = two_pi * 20e3;
  const TofuParams p{3.0 * wr, wr / 4.0, wr, 200};
  {
    SpinSystem sys = pair_at(45.0, -12000.0);
    const auto d = truncation_check(sys, p);
    // |B - 2C| / |w0| = 50 kHz / 12 kHz
    CHECK(d.spins[1].margin[0] == doctest::Approx(50.0 / 12.0).epsilon(1e-9));
    CHECK(d.spins[1].level == TruncationDiagnostics::Level::warn);
    CHECK(d.worst == TruncationDiagnostics::Level::warn);
  }
  {
    const SpinSystem sys = pair_at(45.0);
    const auto d = truncation_check(sys, p);
    for (const auto& s : d.spins) {
      CHECK(std::isinf(s.margin[0]));
      CHECK(s.level == TruncationDiagnostics::Level::pass);
    }
  }
  {
    // B = 2C exactly: degenerate branch fails
    SpinSystem sys = pair_at(45.0, -5000.0);
    TofuParams bad{wr, wr / 2.0, wr, 200};
    const auto d = truncation_check(sys, bad);
    CHECK(d.spins[1].margin[0] == 0.0);
    CHECK(d.spins[1].level == TruncationDiagnostics::Level::fail);
  }
}

TEST_CASE("distance fitting") {
  std::vector<double> tgrid;
  for (int n = 1; n <= 15; ++n) tgrid.push_back(n * 16.0 / 20e3);
  {
    // self-consistency: analytic eta at 2.5 A fits back to 2.50
    const auto chart = fresnel_chart({2.5}, tgrid, constants::gamma_13c, constants::gamma_13c);
    EtaSeries data;
    data.t = tgrid;
    data.eta = chart.eta[0];
    data.valid.assign(tgrid.size(), true);
    const auto fit = fit_distance(data, constants::gamma_13c, constants::gamma_13c);
    CHECK_FALSE(fit.at_bound);
    CHECK(std::abs(fit.r_angstrom - 2.5) < 0.011);
    CHECK(fit.residual < 1e-6);
  }
  {
    // all-zero eta runs to the upper grid bound and is flagged
    EtaSeries data;
    data.t = tgrid;
    data.eta.assign(tgrid.size(), 0.0);
    data.valid.assign(tgrid.size(), true);
    const auto fit = fit_distance(data, constants::gamma_13c, constants::gamma_13c);
    CHECK(fit.at_bound);
    CHECK(fit.r_angstrom == doctest::Approx(6.0));
    CHECK(fit.note.find("no detectable coupling") != std::string::npos);
  }
  {
    EtaSeries data;
    data.t = {1e-3, 2e-3, 3e-3};
    data.eta = {0.1, 0.2, 0.3};
    data.valid = {true, false, false};
    CHECK_THROWS_AS(fit_distance(data, 1.0, 1.0), ConfigError);
  }
}
