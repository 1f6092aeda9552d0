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
#include <string>
#include <vector>

#include "tofu/powder.hpp"
#include "tofu/propagator.hpp"

namespace tofu {

// Main experiment: the half-rotor delay flips the sign of every recoupled
// dipolar coupling while the selective pi on S (net: S untouched, all other
// channel spins inverted by the adjacent hard pi) flips I-S terms once more,
// so I-S dipolar phase accrues over the full recoupling time T while I-I
// dipolar, the I-S scalar coupling and all isotropic shifts refocus.
// Reference experiment: a half-rotor delay inside each T/2 block refocuses
// every recoupled dipolar coupling. Both sequences have identical length and
// place the selective pulse at the same rotor phase.
enum class Layout { main_experiment, reference_experiment };

enum class DetectMode { real_part, absolute };
enum class SelectiveMode { gaussian, ideal };

struct SelectivePulseParams {
  double duration = 250e-6;  // seconds
  double truncation = 0.01;  // Gaussian edge level relative to the peak
  int target = -1;           // spin index; -1 = the system's S spin
  int rotor_sync_p = 0;      // whole rotor periods for the pulse window; 0 = auto
  SelectiveMode mode = SelectiveMode::gaussian;
};

struct ExperimentParams {
  TofuParams tofu;
  int n_increments = 1;  // T = n 16 tau_r; 0 gives the empty (T = 0) sequence
  SelectivePulseParams selective;
  Layout layout = Layout::main_experiment;
  bool pad_quarter_rotor = true;      // length-matched layouts; false = minimal
  double hard_pulse_amplitude = 0.0;  // rad/s; 0 = ideal instantaneous pi
};

struct Experiment {
  EventTimeline timeline;
  std::shared_ptr<const RfWaveform> tofu_element;
  std::shared_ptr<const RfWaveform> selective;  // null for ideal mode
  double recoupling_time = 0.0;                 // T, seconds
};

Experiment build_experiment(const ExperimentParams& params, const SpinSystem& system);

// Truncated Gaussian inversion pulse, discretely calibrated so the on-grid
// flip angle is exactly pi. The offset column holds the detuning that makes
// the pulse resonant with a spin at iso shift target_offset.
RfWaveform gaussian_selective_pi(const SelectivePulseParams& p, double dwell,
                                 double target_offset);

struct SeriesOptions {
  PropOptions prop;
  DetectMode detect = DetectMode::real_part;
  double lambda = 0.0;  // s^-1, applied as exp(-lambda T) on detected signals
  int threads = 0;      // 0 = hardware concurrency
};

struct DephasingCurve {
  std::vector<double> t_seconds;
  std::vector<double> t_rotor_periods;
  std::vector<int> observed;                 // spin indices
  std::vector<std::string> labels;
  std::vector<std::vector<double>> signals;  // [time point][observed spin]
  Layout layout = Layout::main_experiment;
  std::string powder_scheme;
};

// Simulate the full experiment for each n in n_list, powder average the
// per-spin transverse signals. Crystallites run in parallel; the reduction
// is a fixed-order pairwise sum, so results are bit-reproducible.
DephasingCurve run_dephasing_series(const SpinSystem& system, const ExperimentParams& params,
                                    const OrientationSet& powder, const std::vector<int>& n_list,
                                    const SeriesOptions& opts = {});

// Continuous recoupling (no refocusing blocks): play n_elements copies of a
// waveform and record every spin's signal at element boundaries.
struct RecouplingCurve {
  std::vector<double> t_seconds;
  std::vector<std::vector<double>> signals;  // [boundary][spin]
};

RecouplingCurve run_recoupling_curve(const SpinSystem& system, const EulerAngles& crystallite,
                                     double omega_r, const RfWaveform& waveform, int n_elements,
                                     const SeriesOptions& opts = {});

}  // namespace tofu
