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

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "tofu/cmat.hpp"
#include "tofu/rfgen.hpp"
#include "tofu/spinsys.hpp"

namespace tofu {

// Kronecker-built spin-1/2 operators for n spins (dim = 2^n).
struct OperatorSet {
  int n_spins = 0;
  int dim = 0;
  std::vector<CMat> ix, iy, iz;  // one per spin
  CMat fx, fy, fz;               // collective over all spins

  CMat collective_x(const std::vector<int>& mask) const;
  CMat collective_y(const std::vector<int>& mask) const;
  CMat collective_z(const std::vector<int>& mask) const;
};

OperatorSet spin_operators(int n);

struct DensityState {
  CMat rho;
};

// Timeline segment kinds. Waveform segments play `repeats` whole copies of
// the shape back to back; the shape's phase restarts at each repeat while
// the internal Hamiltonian follows absolute time.
struct WaveformSegment {
  std::shared_ptr<const RfWaveform> waveform;
  int repeats = 1;
};
struct DelaySegment {
  double duration = 0.0;
};
struct IdealPulseSegment {
  double angle = 0.0;  // rad
  double phase = 0.0;  // rad, 0 = x
  std::vector<int> mask;  // spin indices the rotation acts on
};
struct ShapedPulseSegment {
  std::shared_ptr<const RfWaveform> waveform;  // selectivity via offset
};

using TimelineSegment =
    std::variant<WaveformSegment, DelaySegment, IdealPulseSegment, ShapedPulseSegment>;

struct EventTimeline {
  std::vector<TimelineSegment> segments;
  double total_duration() const;
};

// explicit_offset integrates the offset as a per-sample Fz term and tracks
// the continuous field closely at any digitization; total_phase replays the
// folded constant-carrier phase exactly as hardware does, which at coarse
// digitization carries a sinc-type droop of the transverse field.
enum class Playback {
  total_phase,
  explicit_offset
};

struct PropOptions {
  int substeps_per_rotor = 400;
  Playback playback = Playback::explicit_offset;
  bool collect_propagator = false;
};

// Crystallite-specific precomputed operators and coefficients; immutable and
// shareable across threads once built.
struct CompiledSystem {
  SpinSystem system;
  EulerAngles crystallite;
  double omega_r = 0.0;
  SystemCoeffs coeffs;
  OperatorSet ops;
  CMat h_static;                 // scalar couplings
  std::vector<CMat> dipolar_op;  // per coupling: homo 3IzSz - I.S, hetero 2IzSz
  std::vector<int> rf_mask;      // homonuclear channel
  CMat rf_x, rf_y, rf_z;         // collective ops on the rf channel
};

CompiledSystem compile_system(const SpinSystem& system, const EulerAngles& crystallite,
                              double omega_r);

struct RfSample {
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
};

// Internal Hamiltonian at absolute time t plus an optional rf sample, rad/s.
CMat hamiltonian_at(double t, const CompiledSystem& cs, const RfSample* rf);
// Convenience overload that compiles the system first.
CMat hamiltonian_at(double t, const SpinSystem& system, const EulerAngles& crystallite,
                    double omega_r, const RfSample* rf);

// Time-ordered propagator of one segment starting at absolute time t0.
CMat segment_propagator(const CompiledSystem& cs, const TimelineSegment& seg, double t0,
                        const PropOptions& opts);

struct PropResult {
  DensityState state;
  std::optional<CMat> propagator;
};

PropResult propagate(const DensityState& rho0, const EventTimeline& timeline,
                     const SpinSystem& system, const EulerAngles& crystallite, double omega_r,
                     const PropOptions& opts = {});

// Re(trace(rho * op)) / trace(op * op) for Hermitian op, so that rho == op
// detects as 1.
double detect(const DensityState& rho, const CMat& op);

}  // namespace tofu
