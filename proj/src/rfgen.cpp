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
#include "tofu/rfgen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tofu/constants.hpp"

namespace tofu {

using constants::two_pi;

double TofuParams::element_duration() const { return two_pi / c_field; }

std::vector<std::string> TofuParams::check() const {
  if (!(omega_r > 0.0)) throw ConfigError("tofu: spinning rate must be positive");
  if (!(c_field > 0.0)) throw ConfigError("tofu: C must be positive");
  if (!(b_field > 4.0 * c_field))
    throw ConfigError("tofu: B must exceed 4C for the nested fields to truncate");
  if (steps_per_element < 16)
    throw ConfigError("tofu: fewer than 16 steps per element undersamples the B oscillation");
  std::vector<std::string> warnings;
  const double quarter = omega_r / 4.0, half = omega_r / 2.0;
  const double tol = 1e-9 * omega_r;
  if (std::abs(c_field - quarter) > tol && std::abs(c_field - half) > tol)
    warnings.push_back("C is neither w_r/4 nor w_r/2; exploratory recoupling condition");
  return warnings;
}

CartesianField tofu_cartesian_field(double t, const TofuParams& p) {
  const double ct = p.c_field * t;
  const double s = std::sin(ct), c = std::cos(ct);
  return {p.c_field + p.b_field * s,
          c * (p.c_field - p.b_field * s),
          p.c_field * s + p.b_field * c * c};
}

double RfWaveform::max_amplitude() const {
  double m = 0.0;
  for (double a : amplitude) m = std::max(m, a);
  return m;
}

void RfWaveform::validate() const {
  if (amplitude.empty()) throw NumericalError("waveform: no samples");
  if (phase.size() != amplitude.size() || offset.size() != amplitude.size() ||
      total_phase.size() != amplitude.size())
    throw NumericalError("waveform: inconsistent sample arrays");
  if (!(dwell > 0.0)) throw NumericalError("waveform: non-positive dwell");
  for (double a : amplitude)
    if (a < 0.0) throw NumericalError("waveform: negative amplitude sample");
  const auto folded = fold_offset_into_phase(phase, offset, dwell);
  for (std::size_t k = 0; k < folded.size(); ++k)
    if (std::abs(folded[k] - total_phase[k]) > 1e-12)
      throw NumericalError("waveform: total_phase inconsistent with phase/offset at sample " +
                           std::to_string(k));
}

std::vector<double> fold_offset_into_phase(const std::vector<double>& phase,
                                           const std::vector<double>& offset, double dwell) {
  std::vector<double> out(phase.size());
  double acc = 0.0;  // integral of offset up to the start of sample k
  for (std::size_t k = 0; k < phase.size(); ++k) {
    out[k] = phase[k] - (acc + 0.5 * offset[k] * dwell);
    acc += offset[k] * dwell;
  }
  return out;
}

namespace {

// Continuity helper: shift angle by multiples of 2 pi to land near prev.
double unwrap_near(double angle, double prev) {
  return angle + two_pi * std::round((prev - angle) / two_pi);
}

}  // namespace

RfWaveform tofu_waveform(const TofuParams& p) {
  p.check();
  RfWaveform w;
  const int n = p.steps_per_element;
  const double duration = p.element_duration();
  w.dwell = duration / n;
  w.amplitude.resize(std::size_t(n));
  w.phase.resize(std::size_t(n));
  w.offset.resize(std::size_t(n));
  double prev_phase = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t_mid = (k + 0.5) * w.dwell;
    const CartesianField f = tofu_cartesian_field(t_mid, p);
    w.amplitude[std::size_t(k)] = std::hypot(f.x, f.y);
    double ph = std::atan2(f.y, f.x);
    ph = unwrap_near(ph, prev_phase);
    prev_phase = ph;
    w.phase[std::size_t(k)] = ph;
    w.offset[std::size_t(k)] = f.z;
  }
  w.total_phase = fold_offset_into_phase(w.phase, w.offset, w.dwell);
  return w;
}

RfWaveform postc7_waveform(double omega_r, int samples_per_c_element) {
  if (!(omega_r > 0.0)) throw ConfigError("postc7: spinning rate must be positive");
  if (samples_per_c_element < 8 || samples_per_c_element % 8 != 0)
    throw ConfigError("postc7: samples per C element must be a positive multiple of 8");
  const double tau_r = two_pi / omega_r;
  const double amp = 7.0 * omega_r;
  const double element = 2.0 * tau_r / 7.0;  // one C element, total angle 720 deg
  RfWaveform w;
  w.dwell = element / samples_per_c_element;
  // sub-pulse boundaries at 1/8 and 5/8 of the element (90, 360, 270 degrees)
  const int n90 = samples_per_c_element / 8;
  const int n360 = samples_per_c_element / 2;
  for (int k = 0; k < 7; ++k) {
    const double phi = two_pi * k / 7.0;
    for (int s = 0; s < samples_per_c_element; ++s) {
      w.amplitude.push_back(amp);
      w.offset.push_back(0.0);
      const double ph = (s < n90 || s >= n90 + n360) ? phi : phi + constants::pi;
      w.phase.push_back(ph);
    }
  }
  w.total_phase = fold_offset_into_phase(w.phase, w.offset, w.dwell);
  return w;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void export_waveform(const RfWaveform& w, const std::string& path, ShapeFormat format,
                     const std::map<std::string, std::string>& header) {
  w.validate();
  std::ofstream out(path);
  if (!out) throw ConfigError("shape export: cannot write '" + path + "'");
  const double max_amp = w.max_amplitude();
  out << "# tofusim shape v1\n";
  out << "# format: " << (format == ShapeFormat::two_column ? "two-column" : "three-column") << "\n";
  out << "# samples: " << w.size() << "\n";
  out << "# dwell_s: " << fmt(w.dwell) << "\n";
  out << "# max_amplitude_hz: " << fmt(constants::rad_to_hz(max_amp)) << "\n";
  for (const auto& [k, v] : header) out << "# " << k << ": " << v << "\n";
  if (format == ShapeFormat::two_column)
    out << "# columns: amplitude_percent total_phase_deg\n";
  else
    out << "# columns: amplitude_percent total_phase_deg offset_hz\n";
  for (int k = 0; k < w.size(); ++k) {
    const double ap = max_amp > 0.0 ? 100.0 * w.amplitude[std::size_t(k)] / max_amp : 0.0;
    out << fmt(ap) << " " << fmt(constants::rad_to_deg(w.total_phase[std::size_t(k)]));
    if (format == ShapeFormat::three_column)
      out << " " << fmt(constants::rad_to_hz(w.offset[std::size_t(k)]));
    out << "\n";
  }
  if (!out) throw ConfigError("shape export: write to '" + path + "' failed");
}

RfWaveform import_waveform(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("shape import: cannot open '" + path + "'");
  RfWaveform w;
  double max_amp_hz = -1.0;
  bool three = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "dwell_s:") hs >> w.dwell;
      if (key == "max_amplitude_hz:") hs >> max_amp_hz;
      if (key == "format:") {
        std::string f;
        hs >> f;
        three = (f == "three-column");
      }
      continue;
    }
    std::istringstream ls(line);
    double ap = 0.0, tp = 0.0, off = 0.0;
    if (!(ls >> ap >> tp))
      throw ConfigError("shape import: '" + path + "' line " + std::to_string(lineno) + ": bad sample");
    if (three && !(ls >> off))
      throw ConfigError("shape import: '" + path + "' line " + std::to_string(lineno) +
                        ": missing offset column");
    w.amplitude.push_back(ap);
    w.total_phase.push_back(constants::deg_to_rad(tp));
    w.offset.push_back(constants::hz_to_rad(off));
  }
  if (w.amplitude.empty()) throw ConfigError("shape import: '" + path + "' has no samples");
  if (!(w.dwell > 0.0)) throw ConfigError("shape import: '" + path + "' missing dwell_s header");
  if (!(max_amp_hz >= 0.0)) throw ConfigError("shape import: '" + path + "' missing max_amplitude_hz header");
  const double max_amp = constants::hz_to_rad(max_amp_hz);
  for (auto& a : w.amplitude) a = a / 100.0 * max_amp;
  // Reconstruct the split phase from the folded one.
  w.phase.resize(w.amplitude.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < w.phase.size(); ++k) {
    w.phase[k] = w.total_phase[k] + acc + 0.5 * w.offset[k] * w.dwell;
    acc += w.offset[k] * w.dwell;
  }
  w.validate();
  return w;
}

}  // namespace tofu
