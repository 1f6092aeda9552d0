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

#include <map>
#include <string>
#include <vector>

#include "tofu/config.hpp"

namespace tofu {

// Triple-oscillating-field parameters: a constant x field of strength C, a
// y field of strength C rotating about x at rate C, and a strong field B
// rotating about the y field at rate C. One element lasts 2 pi / C.
struct TofuParams {
  double b_field = 0.0;   // rad/s
  double c_field = 0.0;   // rad/s
  double omega_r = 0.0;   // rad/s
  int steps_per_element = 200;

  double element_duration() const;
  // Throws ConfigError on hard violations; returns human-readable warnings
  // (e.g. C not at a supported recoupling condition).
  std::vector<std::string> check() const;
};

struct CartesianField {
  double x = 0.0, y = 0.0, z = 0.0;  // rad/s coefficients of Fx, Fy, Fz
};

// Cartesian components of the nested-rotation rf field at time t.
CartesianField tofu_cartesian_field(double t, const TofuParams& p);

// Digitized rf pulse: per-sample amplitude/phase plus the instantaneous
// offset (the Fz coefficient). total_phase folds the offset into the phase
// for playback at constant carrier; the accumulated integral uses the
// midpoint rule and the sign that makes the two playback modes generate the
// same propagator.
struct RfWaveform {
  double dwell = 0.0;  // seconds
  std::vector<double> amplitude;    // rad/s, >= 0
  std::vector<double> phase;        // rad, unwrapped
  std::vector<double> offset;       // rad/s
  std::vector<double> total_phase;  // rad, unwrapped

  int size() const { return int(amplitude.size()); }
  double duration() const { return dwell * size(); }
  double max_amplitude() const;
  void validate() const;  // internal consistency, throws NumericalError
};

// total_phase[k] = phase[k] - (sum_{j<k} offset[j] dwell + offset[k] dwell/2)
std::vector<double> fold_offset_into_phase(const std::vector<double>& phase,
                                           const std::vector<double>& offset, double dwell);

RfWaveform tofu_waveform(const TofuParams& p);

// Seven composite elements 90(phi) 360(phi+pi) 270(phi), phi stepped by
// 2 pi/7, constant amplitude 7 w_r, spanning two rotor periods.
RfWaveform postc7_waveform(double omega_r, int samples_per_c_element = 16);

enum class ShapeFormat { two_column, three_column };

// Text shape file: '#' header (dwell, normalization, caller metadata),
// then "amplitude% total_phase_deg [offset_hz]" per line.
void export_waveform(const RfWaveform& w, const std::string& path, ShapeFormat format,
                     const std::map<std::string, std::string>& header = {});
RfWaveform import_waveform(const std::string& path);

}  // namespace tofu
