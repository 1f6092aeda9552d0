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
#include "tofu/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "tofu/constants.hpp"

namespace tofu {

using constants::two_pi;

namespace {

CMat masked_sum(const std::vector<CMat>& per_spin, const std::vector<int>& mask, int dim) {
  CMat out(dim);
  for (int k : mask) out += per_spin[std::size_t(k)];
  return out;
}

}  // namespace

CMat OperatorSet::collective_x(const std::vector<int>& mask) const {
  return masked_sum(ix, mask, dim);
}
CMat OperatorSet::collective_y(const std::vector<int>& mask) const {
  return masked_sum(iy, mask, dim);
}
CMat OperatorSet::collective_z(const std::vector<int>& mask) const {
  return masked_sum(iz, mask, dim);
}

OperatorSet spin_operators(int n) {
  if (n < 1 || n > kMaxSpins)
    throw std::domain_error("spin_operators: spin count must be between 1 and " +
                            std::to_string(kMaxSpins));
  OperatorSet s;
  s.n_spins = n;
  s.dim = 1 << n;
  s.ix.assign(std::size_t(n), CMat(s.dim));
  s.iy.assign(std::size_t(n), CMat(s.dim));
  s.iz.assign(std::size_t(n), CMat(s.dim));
  // Basis state |b>: bit (n-1-k) of b gives spin k, 0 = up (+1/2).
  for (int k = 0; k < n; ++k) {
    const int bit = n - 1 - k;
    for (int b = 0; b < s.dim; ++b) {
      const bool down = (b >> bit) & 1;
      s.iz[std::size_t(k)](b, b) = down ? -0.5 : 0.5;
      const int flipped = b ^ (1 << bit);
      s.ix[std::size_t(k)](flipped, b) = 0.5;
      // <flipped| Iy |b>: -i/2 raising, +i/2 lowering
      s.iy[std::size_t(k)](flipped, b) = down ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
    }
  }
  s.fx = CMat(s.dim);
  s.fy = CMat(s.dim);
  s.fz = CMat(s.dim);
  for (int k = 0; k < n; ++k) {
    s.fx += s.ix[std::size_t(k)];
    s.fy += s.iy[std::size_t(k)];
    s.fz += s.iz[std::size_t(k)];
  }
  return s;
}

double EventTimeline::total_duration() const {
  double t = 0.0;
  for (const auto& seg : segments) {
    if (const auto* w = std::get_if<WaveformSegment>(&seg))
      t += w->waveform->duration() * w->repeats;
    else if (const auto* d = std::get_if<DelaySegment>(&seg))
      t += d->duration;
    else if (const auto* p = std::get_if<ShapedPulseSegment>(&seg))
      t += p->waveform->duration();
  }
  return t;
}

CompiledSystem compile_system(const SpinSystem& system, const EulerAngles& crystallite,
                              double omega_r) {
  system.validate();
  CompiledSystem cs;
  cs.system = system;
  cs.crystallite = crystallite;
  cs.omega_r = omega_r;
  cs.coeffs = fourier_coefficients(system, crystallite, omega_r);
  cs.ops = spin_operators(system.size());
  const int dim = cs.ops.dim;

  cs.h_static = CMat(dim);
  for (const auto& j : system.scalar) {
    const auto a = std::size_t(j.spin_a);
    const auto b = std::size_t(j.spin_b);
    const bool homo =
        std::abs(system.spins[a].gyromagnetic_ratio - system.spins[b].gyromagnetic_ratio) <=
        1e-6 * std::abs(system.spins[a].gyromagnetic_ratio);
    const double w = two_pi * j.j;  // rad/s
    if (homo) {
      // full 2 pi J I.S
      CMat is = cs.ops.ix[a] * cs.ops.ix[b];
      is += cs.ops.iy[a] * cs.ops.iy[b];
      is += cs.ops.iz[a] * cs.ops.iz[b];
      cs.h_static.add_scaled(w, is);
    } else {
      // heteronuclear: pi J 2 Iz Sz
      CMat zz = cs.ops.iz[a] * cs.ops.iz[b];
      cs.h_static.add_scaled(2.0 * 0.5 * w, zz);  // pi J * 2 IzSz
    }
  }

  cs.dipolar_op.reserve(system.dipolar.size());
  for (const auto& d : system.dipolar) {
    const auto a = std::size_t(d.spin_a);
    const auto b = std::size_t(d.spin_b);
    const bool homo =
        std::abs(system.spins[a].gyromagnetic_ratio - system.spins[b].gyromagnetic_ratio) <=
        1e-6 * std::abs(system.spins[a].gyromagnetic_ratio);
    CMat op = cs.ops.iz[a] * cs.ops.iz[b];
    if (homo) {
      // 3 IzSz - I.S = 2 IzSz - IxSx - IySy
      op *= 2.0;
      CMat t = cs.ops.ix[a] * cs.ops.ix[b];
      op -= t;
      t = cs.ops.iy[a] * cs.ops.iy[b];
      op -= t;
    } else {
      op *= 2.0;  // 2 IzSz only
    }
    cs.dipolar_op.push_back(std::move(op));
  }

  for (int k = 0; k < system.size(); ++k)
    if (system.homonuclear(k)) cs.rf_mask.push_back(k);
  cs.rf_x = cs.ops.collective_x(cs.rf_mask);
  cs.rf_y = cs.ops.collective_y(cs.rf_mask);
  cs.rf_z = cs.ops.collective_z(cs.rf_mask);
  return cs;
}

CMat hamiltonian_at(double t, const CompiledSystem& cs, const RfSample* rf) {
  CMat h = cs.h_static;
  for (int k = 0; k < cs.system.size(); ++k) {
    const double w = cs.coeffs.shift[std::size_t(k)].eval(t, cs.omega_r).real();
    if (w != 0.0) h.add_scaled(w, cs.ops.iz[std::size_t(k)]);
  }
  for (std::size_t d = 0; d < cs.system.dipolar.size(); ++d) {
    const double w = cs.coeffs.dipolar[d].eval(t, cs.omega_r).real();
    if (w != 0.0) h.add_scaled(w, cs.dipolar_op[d]);
  }
  if (rf != nullptr) {
    if (rf->amplitude != 0.0) {
      h.add_scaled(rf->amplitude * std::cos(rf->phase), cs.rf_x);
      h.add_scaled(rf->amplitude * std::sin(rf->phase), cs.rf_y);
    }
    if (rf->offset != 0.0) h.add_scaled(rf->offset, cs.rf_z);
  }
  return h;
}

CMat hamiltonian_at(double t, const SpinSystem& system, const EulerAngles& crystallite,
                    double omega_r, const RfSample* rf) {
  return hamiltonian_at(t, compile_system(system, crystallite, omega_r), rf);
}

namespace {

// Piecewise-constant evolution across one rf sample (or bare delay when
// sample == nullptr): the internal Hamiltonian is evaluated at substep
// midpoints, the rf fields are constant across the sample.
void accumulate_interval(const CompiledSystem& cs, double t0, double duration,
                         const RfSample* sample, int substeps, CMat& u) {
  const double dt = duration / substeps;
  for (int s = 0; s < substeps; ++s) {
    const double t_mid = t0 + (s + 0.5) * dt;
    const CMat h = hamiltonian_at(t_mid, cs, sample);
    const CMat step = expm_i_herm(h, dt);
    u = step * u;
  }
}

int substeps_for(double duration, double omega_r, int substeps_per_rotor) {
  const double tau_r = two_pi / omega_r;
  const double target = tau_r / substeps_per_rotor;
  return std::max(1, int(std::ceil(duration / target - 1e-9)));
}

void play_waveform(const CompiledSystem& cs, const RfWaveform& w, double t0, int repeats,
                   const PropOptions& opts, CMat& u) {
  const int per_sample = substeps_for(w.dwell, cs.omega_r, opts.substeps_per_rotor);
  double t = t0;
  for (int r = 0; r < repeats; ++r) {
    for (int k = 0; k < w.size(); ++k) {
      RfSample s;
      s.amplitude = w.amplitude[std::size_t(k)];
      if (opts.playback == Playback::total_phase) {
        s.phase = w.total_phase[std::size_t(k)];
        s.offset = 0.0;
      } else {
        s.phase = w.phase[std::size_t(k)];
        s.offset = w.offset[std::size_t(k)];
      }
      accumulate_interval(cs, t, w.dwell, &s, per_sample, u);
      t += w.dwell;
    }
  }
}

}  // namespace

CMat segment_propagator(const CompiledSystem& cs, const TimelineSegment& seg, double t0,
                        const PropOptions& opts) {
  CMat u = CMat::identity(cs.ops.dim);
  if (const auto* w = std::get_if<WaveformSegment>(&seg)) {
    play_waveform(cs, *w->waveform, t0, w->repeats, opts, u);
  } else if (const auto* d = std::get_if<DelaySegment>(&seg)) {
    if (d->duration < 0.0) throw NumericalError("timeline: negative delay");
    if (d->duration > 0.0)
      accumulate_interval(cs, t0, d->duration, nullptr,
                          substeps_for(d->duration, cs.omega_r, opts.substeps_per_rotor), u);
  } else if (const auto* p = std::get_if<IdealPulseSegment>(&seg)) {
    for (int k : p->mask)
      if (k < 0 || k >= cs.system.size())
        throw NumericalError("timeline: ideal pulse mask references spin " + std::to_string(k));
    CMat gen = cs.ops.collective_x(p->mask);
    gen *= std::cos(p->phase);
    CMat gy = cs.ops.collective_y(p->mask);
    gy *= std::sin(p->phase);
    gen += gy;
    u = expm_i_herm(gen, p->angle);
  } else if (const auto* sp = std::get_if<ShapedPulseSegment>(&seg)) {
    play_waveform(cs, *sp->waveform, t0, 1, opts, u);
  }
  return u;
}

PropResult propagate(const DensityState& rho0, const EventTimeline& timeline,
                     const SpinSystem& system, const EulerAngles& crystallite, double omega_r,
                     const PropOptions& opts) {
  const CompiledSystem cs = compile_system(system, crystallite, omega_r);
  if (rho0.rho.dim() != cs.ops.dim)
    throw NumericalError("propagate: density matrix dimension mismatch");
  CMat u = CMat::identity(cs.ops.dim);
  double t = 0.0;
  int index = 0;
  for (const auto& seg : timeline.segments) {
    try {
      const CMat us = segment_propagator(cs, seg, t, opts);
      u = us * u;
    } catch (const NumericalError& e) {
      throw NumericalError("segment " + std::to_string(index) + ": " + e.what());
    }
    if (const auto* w = std::get_if<WaveformSegment>(&seg))
      t += w->waveform->duration() * w->repeats;
    else if (const auto* d = std::get_if<DelaySegment>(&seg))
      t += d->duration;
    else if (const auto* sp = std::get_if<ShapedPulseSegment>(&seg))
      t += sp->waveform->duration();
    ++index;
  }
  PropResult res;
  const CMat t1 = u * rho0.rho;
  res.state.rho = mul_adjb(t1, u);
  if (opts.collect_propagator) res.propagator = u;
  return res;
}

double detect(const DensityState& rho, const CMat& op) {
  const double norm = frob_inner(op, op).real();
  if (!(norm > 0.0)) throw std::domain_error("detect: zero observable");
  // op Hermitian: trace(rho op) = <rho, op>_F
  return frob_inner(rho.rho, op).real() / norm;
}

}  // namespace tofu
