#include "doctest.h"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "tofu/analysis.hpp"
#include "tofu/constants.hpp"
#include "tofu/propagator.hpp"
#include "tofu/sequence.hpp"

using namespace tofu;
namespace constants = tofu::constants;
using constants::pi;
using constants::two_pi;

namespace {

SpinSystem bare_pair(double b_hz, double beta_deg, double shift_i_hz = 0.0,
                     double shift_s_hz = 0.0) {
  SpinSystem sys;
  sys.spins.push_back({"S", constants::gamma_13c, two_pi * shift_s_hz, 0.0, 0.0, {}});
  sys.spins.push_back({"I", constants::gamma_13c, two_pi * shift_i_hz, 0.0, 0.0, {}});
  if (b_hz != 0.0)
    sys.dipolar.push_back({0, 1, two_pi * b_hz, {0.0, constants::deg_to_rad(beta_deg), 0.0}});
  sys.s_spin = 0;
  return sys;
}

}  // namespace

TEST_CASE("spin operators") {
  {
    const OperatorSet s = spin_operators(1);
    CHECK(s.iz[0](0, 0) == cplx(0.5, 0.0));
    CHECK(s.iz[0](1, 1) == cplx(-0.5, 0.0));
  }
  {
    const OperatorSet s = spin_operators(2);
    const CMat p = s.iz[0] * s.iz[1];
    CHECK(std::abs(p.trace()) < 1e-14);
    const CMat q = s.iz[0] * s.iz[0];
    CHECK(q.trace().real() == doctest::Approx(1.0));
  }
  {
    const OperatorSet s = spin_operators(3);
    // su(2) algebra for the collective operators
    CMat comm = s.fx * s.fy;
    CMat yx = s.fy * s.fx;
    comm -= yx;
    CMat expect = s.fz;
    expect *= cplx(0.0, 1.0);
    CHECK(max_abs_diff(comm, expect) < 1e-13);
    // per-spin commutation and cross-spin commutativity
    for (int k = 0; k < 3; ++k) {
      CMat c = s.ix[std::size_t(k)] * s.iy[std::size_t(k)];
      CMat d = s.iy[std::size_t(k)] * s.ix[std::size_t(k)];
      c -= d;
      CMat e = s.iz[std::size_t(k)];
      e *= cplx(0.0, 1.0);
      CHECK(max_abs_diff(c, e) < 1e-14);
    }
    CMat cross = s.ix[0] * s.iy[1];
    CMat cross2 = s.iy[1] * s.ix[0];
    cross -= cross2;
    CHECK(cross.max_abs() < 1e-14);
  }
  CHECK_THROWS_AS(spin_operators(0), std::domain_error);
  CHECK_THROWS_AS(spin_operators(7), std::domain_error);
}

TEST_CASE("hamiltonian_at") {
  const double wr = two_pi * 20e3;
  {
    SpinSystem sys = bare_pair(0.0, 0.0);
    const CMat h = hamiltonian_at(0.3e-4, sys, {}, wr, nullptr);
    CHECK(h.max_abs() < 1e-12);
  }
  {
    SpinSystem sys = bare_pair(0.0, 0.0, 3000.0, -7000.0);
    const CMat h = hamiltonian_at(0.0, sys, {}, wr, nullptr);
    std::vector<double> w;
    CMat v;
    eig_herm(h, w, v);
    const double w1 = two_pi * 3000.0, w2 = -two_pi * 7000.0;
    std::vector<double> expect = {0.5 * (w1 + w2), 0.5 * (w1 - w2), 0.5 * (-w1 + w2),
                                  0.5 * (-w1 - w2)};
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i)
      CHECK(w[std::size_t(i)] == doctest::Approx(expect[std::size_t(i)]).epsilon(1e-12));
  }
  {
    // dipolar operator matches an independent Kronecker construction
    SpinSystem sys = bare_pair(-2100.0, 35.0);
    const EulerAngles cryst{0.4, 1.0, 2.2};
    const CMat h = hamiltonian_at(1.7e-5, sys, cryst, wr, nullptr);
    const double w_is = oracle::dipolar_frequency(sys.dipolar[0], sys, cryst, wr, 1.7e-5);
    Eigen::Matrix2cd sx, sy, sz, id;
    const cplx im(0.0, 1.0);
    sx << 0.0, 0.5, 0.5, 0.0;
    sy << 0.0, -0.5 * im, 0.5 * im, 0.0;
    sz << 0.5, 0.0, 0.0, -0.5;
    id.setIdentity();
    Eigen::Matrix4cd ref = Eigen::kroneckerProduct(sz, sz).eval() * 3.0;
    ref -= Eigen::kroneckerProduct(sx, sx).eval();
    ref -= Eigen::kroneckerProduct(sy, sy).eval();
    ref -= Eigen::kroneckerProduct(sz, sz).eval();
    ref *= w_is;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(h(i, j) - ref(i, j)) < 1e-9 * std::abs(w_is) + 1e-12);
  }
}

TEST_CASE("propagate basics") {
  const double wr = two_pi * 20e3;
  SpinSystem sys = bare_pair(-2251.0, 45.0);
  const OperatorSet ops = spin_operators(2);
  {
    DensityState rho{ops.fz};
    const auto res = propagate(rho, {}, sys, {}, wr);
    CHECK(max_abs_diff(res.state.rho, ops.fz) < 1e-14);
  }
  {
    // ideal pi_x flips Fz
    DensityState rho{ops.fz};
    EventTimeline tl;
    tl.segments.push_back(IdealPulseSegment{pi, 0.0, {0, 1}});
    const auto res = propagate(rho, tl, sys, {}, wr);
    CMat minus = ops.fz;
    minus *= -1.0;
    CHECK(max_abs_diff(res.state.rho, minus) < 1e-12);
  }
  {
    // MAS rotor echo: dipolar evolution refocuses after one rotor period
    DensityState rho{ops.fx};
    EventTimeline tl;
    tl.segments.push_back(DelaySegment{two_pi / wr});
    PropOptions opts;
    opts.collect_propagator = true;
    const auto res = propagate(rho, tl, sys, {0.7, 1.1, 0.3}, wr, opts);
    CHECK(detect(res.state, ops.fx) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(unitarity_defect(*res.propagator) < 1e-10);
    CHECK(hermiticity_defect(res.state.rho) < 1e-12);
  }
  {
    CHECK_THROWS_AS(
        [&] {
          EventTimeline tl;
          tl.segments.push_back(DelaySegment{-1e-6});
          DensityState rho{ops.fz};
          propagate(rho, tl, sys, {}, wr);
        }(),
        NumericalError);
  }
}

TEST_CASE("detect normalization") {
  const OperatorSet ops = spin_operators(2);
  DensityState rho{ops.ix[1]};
  CHECK(detect(rho, ops.ix[1]) == doctest::Approx(1.0));
  CHECK(detect(rho, ops.iy[1]) == doctest::Approx(0.0));
  // (pi/2)_y takes Iz to Ix
  SpinSystem sys = bare_pair(0.0, 0.0);
  DensityState z{ops.iz[1]};
  EventTimeline tl;
  tl.segments.push_back(IdealPulseSegment{pi / 2.0, pi / 2.0, {1}});
  const auto res = propagate(z, tl, sys, {}, two_pi * 20e3);
  CHECK(detect(res.state, ops.ix[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step-size convergence of a TOFU element") {
  const double wr = two_pi * 20e3;
  SpinSystem sys = bare_pair(-2251.0, 45.0, -8000.0, 0.0);
  TofuParams p;
  p.omega_r = wr;
  p.b_field = 3.0 * wr;
  p.c_field = wr / 4.0;
  auto wf = std::make_shared<const RfWaveform>(tofu_waveform(p));
  EventTimeline tl;
  tl.segments.push_back(WaveformSegment{wf, 4});
  const OperatorSet ops = spin_operators(2);
  DensityState rho{ops.ix[1]};

  PropOptions a;
  a.substeps_per_rotor = 400;
  PropOptions b;
  b.substeps_per_rotor = 800;
  const EulerAngles cryst{0.0, constants::deg_to_rad(45.0), 0.0};
  const auto ra = propagate(rho, tl, sys, cryst, wr, a);
  const auto rb = propagate(rho, tl, sys, cryst, wr, b);
  CHECK(std::abs(detect(ra.state, ops.ix[1]) - detect(rb.state, ops.ix[1])) < 1e-5);
  CHECK(std::abs(detect(ra.state, ops.iy[1]) - detect(rb.state, ops.iy[1])) < 1e-5);
}

namespace {

// Max deviation between exact recoupling evolution and the first-order
// averaged Hamiltonian, powder averaged with magnitude detection (the
// magnitude is insensitive to the second-order Iz corrections that dominate
// single-crystal phases).
double aht_powder_error(double b_over_wr, int steps, int substeps, int n_elements) {
  const double wr = two_pi * 20e3;
  SpinSystem sys = bare_pair(-2251.0, 0.0, -500.0, 0.0);
  TofuParams p;
  p.omega_r = wr;
  p.b_field = b_over_wr * wr;
  p.c_field = wr / 4.0;
  p.steps_per_element = steps;
  const RfWaveform wf = tofu_waveform(p);
  const auto powder = generate_orientations(PowderScheme::golden_spiral, 33, 5);
  const OperatorSet ops = spin_operators(2);
  CMat rho0 = ops.ix[0];
  rho0 += ops.ix[1];
  SeriesOptions opts;
  opts.detect = DetectMode::absolute;
  opts.prop.substeps_per_rotor = substeps;
  std::vector<double> sim(std::size_t(n_elements) + 1, 0.0);
  std::vector<double> ana(std::size_t(n_elements) + 1, 0.0);
  for (const auto& o : powder.entries) {
    const auto curve = run_recoupling_curve(sys, o.angles, wr, wf, n_elements, opts);
    const auto rep = analysis::effective_hamiltonian(sys, o.angles, analysis::Condition::quarter);
    for (int k = 0; k <= n_elements; ++k) {
      sim[std::size_t(k)] += o.weight * curve.signals[std::size_t(k)][1];
      const CMat u = expm_i_herm(rep.matrix, curve.t_seconds[std::size_t(k)]);
      const CMat t1 = u * rho0;
      DensityState st{mul_adjb(t1, u)};
      ana[std::size_t(k)] +=
          o.weight * std::hypot(detect(st, ops.ix[1]), detect(st, ops.iy[1]));
    }
  }
  double max_err = 0.0;
  for (int k = 0; k <= n_elements; ++k)
    max_err = std::max(max_err, std::abs(sim[std::size_t(k)] - ana[std::size_t(k)]));
  return max_err;
}

}  // namespace

TEST_CASE("first-order average Hamiltonian reproduces exact TOFU evolution at B = 6 w_r") {
  // B = 3 w_r sits exactly on the B = 4C + 2 w_r commensuration, where a
  // resonant second-order cross term survives; the acceptance suite probes
  // that regime. Here the clean B = 6 w_r condition is held to its bound.
  CHECK(aht_powder_error(6.0, 400, 800, 30) < 0.005);
}
