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
#include "tofu/sequence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "tofu/constants.hpp"

namespace tofu {

using constants::pi;
using constants::two_pi;

namespace {

int selective_window_periods(const SelectivePulseParams& p, double tau_r) {
  const int needed = int(std::ceil(p.duration / tau_r - 1e-9));
  if (p.rotor_sync_p == 0) return std::max(1, needed);
  if (p.rotor_sync_p < needed)
    throw ConfigError("experiment: selective pulse of " + std::to_string(p.duration * 1e6) +
                      " us does not fit in p = " + std::to_string(p.rotor_sync_p) +
                      " rotor periods; nearest valid p is " + std::to_string(needed));
  return p.rotor_sync_p;
}

struct Assets {
  std::shared_ptr<const RfWaveform> tofu;
  std::shared_ptr<const RfWaveform> selective;  // null in ideal mode
  double tau_r = 0.0;
  double element = 0.0;
  int window_p = 0;   // selective window, rotor periods
  int target = -1;    // selective target spin
  std::vector<int> hard_mask;
};

Assets make_assets(const ExperimentParams& p, const SpinSystem& system) {
  Assets a;
  a.tau_r = two_pi / p.tofu.omega_r;
  a.element = p.tofu.element_duration();
  a.tofu = std::make_shared<const RfWaveform>(tofu_waveform(p.tofu));
  a.window_p = selective_window_periods(p.selective, a.tau_r);
  a.target = p.selective.target >= 0 ? p.selective.target : system.s_spin;
  if (a.target < 0 || a.target >= system.size())
    throw ConfigError("experiment: selective pulse target out of range");
  if (p.selective.mode == SelectiveMode::gaussian) {
    const double dwell = a.tau_r / 50.0;
    a.selective = std::make_shared<const RfWaveform>(gaussian_selective_pi(
        p.selective, dwell, system.spins[std::size_t(a.target)].iso_shift));
  }
  for (int k = 0; k < system.size(); ++k)
    if (system.homonuclear(k)) a.hard_mask.push_back(k);
  return a;
}

// Number of whole waveform elements in a duration; errors out when the
// duration is not commensurate.
int element_count(double duration, double element) {
  const double x = duration / element;
  const int n = int(std::llround(x));
  if (std::abs(x - n) > 1e-9)
    throw ConfigError("experiment: block of " + std::to_string(duration) +
                      " s is not a whole number of waveform elements");
  return n;
}

void push_tofu(std::vector<TimelineSegment>& segs, const Assets& a, int elements) {
  if (elements > 0) segs.push_back(WaveformSegment{a.tofu, elements});
}

void push_delay(std::vector<TimelineSegment>& segs, double duration) {
  if (duration > 0.0) segs.push_back(DelaySegment{duration});
}

// Selective pi(S) followed by hard pi(all homonuclear), rotor synchronized.
// The selective pulse is centered in its p tau_r window; the hard pulse
// follows immediately.
void push_center_pulses(std::vector<TimelineSegment>& segs, const ExperimentParams& p,
                        const Assets& a) {
  const double window = a.window_p * a.tau_r;
  if (p.selective.mode == SelectiveMode::gaussian) {
    const double margin = 0.5 * (window - a.selective->duration());
    push_delay(segs, margin);
    segs.push_back(ShapedPulseSegment{a.selective});
    push_delay(segs, margin);
  } else {
    push_delay(segs, window / 2.0);
    segs.push_back(IdealPulseSegment{pi, 0.0, {a.target}});
    push_delay(segs, window / 2.0);
  }
  if (p.hard_pulse_amplitude > 0.0) {
    auto square = std::make_shared<RfWaveform>();
    square->dwell = pi / p.hard_pulse_amplitude;
    square->amplitude = {p.hard_pulse_amplitude};
    square->phase = {0.0};
    square->offset = {0.0};
    square->total_phase = {0.0};
    segs.push_back(ShapedPulseSegment{std::move(square)});
  } else {
    segs.push_back(IdealPulseSegment{pi, 0.0, a.hard_mask});
  }
}

EventTimeline assemble(const ExperimentParams& p, const Assets& a, int n) {
  EventTimeline tl;
  if (n == 0) return tl;  // T = 0: empty sequence by definition
  const double t_total = n * 16.0 * a.tau_r;
  const double wp = a.window_p * a.tau_r;
  auto& segs = tl.segments;
  if (p.layout == Layout::main_experiment) {
    const int half = element_count(t_total / 2.0, a.element);
    push_tofu(segs, a, half);
    if (p.pad_quarter_rotor) {
      // TOFU(T/2) . 3tr/4 . sel(p tr) . hard . (3tr/4 + p tr) . TOFU(T/2)
      push_delay(segs, 0.75 * a.tau_r);
      push_center_pulses(segs, p, a);
      push_delay(segs, 0.75 * a.tau_r + wp);
    } else {
      // minimal: RADAR delay only, lengths not matched to the reference
      push_delay(segs, 0.5 * a.tau_r);
      push_center_pulses(segs, p, a);
    }
    push_tofu(segs, a, half);
  } else {
    const int quarter = element_count(t_total / 4.0, a.element);
    push_tofu(segs, a, quarter);
    push_delay(segs, 0.5 * a.tau_r);
    push_tofu(segs, a, quarter);
    if (p.pad_quarter_rotor) {
      // tr/4 pads keep the center at half-rotor parity and match lengths
      push_delay(segs, 0.25 * a.tau_r);
      push_center_pulses(segs, p, a);
      push_delay(segs, 0.25 * a.tau_r + wp);
    } else {
      push_center_pulses(segs, p, a);
    }
    push_tofu(segs, a, quarter);
    push_delay(segs, 0.5 * a.tau_r);
    push_tofu(segs, a, quarter);
  }
  return tl;
}

}  // namespace

RfWaveform gaussian_selective_pi(const SelectivePulseParams& p, double dwell,
                                 double target_offset) {
  if (!(p.duration > 0.0)) throw ConfigError("selective pulse: duration must be positive");
  if (!(p.truncation > 0.0 && p.truncation < 1.0))
    throw ConfigError("selective pulse: truncation must be in (0, 1)");
  const int n = std::max(8, int(std::llround(p.duration / dwell)));
  RfWaveform w;
  w.dwell = p.duration / n;
  const double sigma = 0.5 * p.duration / std::sqrt(2.0 * std::log(1.0 / p.truncation));
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * w.dwell - 0.5 * p.duration;
    const double a = std::exp(-t * t / (2.0 * sigma * sigma));
    w.amplitude.push_back(a);
    area += a * w.dwell;
  }
  for (auto& a : w.amplitude) a *= pi / area;  // exact pi rotation on the grid
  w.phase.assign(std::size_t(n), 0.0);
  // resonant with a spin at iso shift target_offset: the detuning term
  // -target_offset Fz cancels that spin's internal shift
  w.offset.assign(std::size_t(n), -target_offset);
  w.total_phase = fold_offset_into_phase(w.phase, w.offset, w.dwell);
  return w;
}

Experiment build_experiment(const ExperimentParams& params, const SpinSystem& system) {
  if (params.n_increments < 0) throw ConfigError("experiment: n must be >= 0");
  params.tofu.check();
  system.validate();
  const Assets a = make_assets(params, system);
  Experiment e;
  e.tofu_element = a.tofu;
  e.selective = a.selective;
  e.recoupling_time = params.n_increments * 16.0 * a.tau_r;
  e.timeline = assemble(params, a, params.n_increments);
  return e;
}

namespace {

struct SegCache {
  const CompiledSystem* cs;
  const PropOptions* opts;
  double tau_r;
  std::map<std::tuple<int, const void*, long long, long long>, CMat> store;

  long long phase_key(double t0) const {
    double f = std::fmod(t0, tau_r) / tau_r;
    if (f < 0.0) f += 1.0;
    long long k = std::llround(f * 1e9);
    if (k == 1000000000LL) k = 0;
    return k;
  }

  const CMat& get(const TimelineSegment& seg, double t0) {
    std::tuple<int, const void*, long long, long long> key;
    if (const auto* w = std::get_if<WaveformSegment>(&seg)) {
      key = {0, w->waveform.get(), 1, phase_key(t0)};  // single element
    } else if (const auto* d = std::get_if<DelaySegment>(&seg)) {
      key = {1, nullptr, std::llround(d->duration * 1e15), phase_key(t0)};
    } else if (const auto* ip = std::get_if<IdealPulseSegment>(&seg)) {
      long long h = std::llround(ip->angle * 1e9) * 1315423911LL +
                    std::llround(ip->phase * 1e9);
      for (int m : ip->mask) h = h * 131 + m;
      key = {2, nullptr, h, 0};
    } else {
      const auto* sp = std::get_if<ShapedPulseSegment>(&seg);
      key = {3, sp->waveform.get(), 0, phase_key(t0)};
    }
    auto it = store.find(key);
    if (it != store.end()) return it->second;
    TimelineSegment unit = seg;
    if (auto* w = std::get_if<WaveformSegment>(&unit)) w->repeats = 1;
    CMat u = segment_propagator(*cs, unit, t0, *opts);
    return store.emplace(key, std::move(u)).first->second;
  }
};

double segment_duration(const TimelineSegment& seg) {
  if (const auto* w = std::get_if<WaveformSegment>(&seg))
    return w->waveform->duration() * w->repeats;
  if (const auto* d = std::get_if<DelaySegment>(&seg)) return d->duration;
  if (const auto* sp = std::get_if<ShapedPulseSegment>(&seg)) return sp->waveform->duration();
  return 0.0;
}

// Propagator of a timeline, reusing cached per-segment propagators. TOFU
// blocks repeat whole elements at unchanged rotor phase, so one element
// propagator per phase covers every block length.
CMat timeline_propagator(const EventTimeline& tl, SegCache& cache, int dim) {
  CMat u = CMat::identity(dim);
  double t = 0.0;
  for (const auto& seg : tl.segments) {
    if (const auto* w = std::get_if<WaveformSegment>(&seg)) {
      const CMat& ue = cache.get(seg, t);
      for (int r = 0; r < w->repeats; ++r) u = ue * u;
    } else {
      u = cache.get(seg, t) * u;
    }
    t += segment_duration(seg);
  }
  return u;
}

CMat initial_state(const CompiledSystem& cs) {
  CMat rho(cs.ops.dim);
  for (int k : cs.rf_mask) rho += cs.ops.ix[std::size_t(k)];
  return rho;
}

double detect_spin(const CMat& rho, const CompiledSystem& cs, int spin, DetectMode mode) {
  DensityState st{rho};
  const double x = detect(st, cs.ops.ix[std::size_t(spin)]);
  if (mode == DetectMode::real_part) return x;
  const double y = detect(st, cs.ops.iy[std::size_t(spin)]);
  return std::hypot(x, y);
}

void run_workers(std::size_t n_items, int threads, const std::function<void(std::size_t)>& fn) {
  int nt = threads > 0 ? threads : int(std::thread::hardware_concurrency());
  nt = std::max(1, std::min<int>(nt, int(n_items)));
  if (nt == 1) {
    for (std::size_t i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_items) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace

DephasingCurve run_dephasing_series(const SpinSystem& system, const ExperimentParams& params,
                                    const OrientationSet& powder, const std::vector<int>& n_list,
                                    const SeriesOptions& opts) {
  system.validate();
  powder.validate();
  params.tofu.check();
  const Assets assets = make_assets(params, system);
  const auto observed = system.observed_spins();
  if (observed.empty())
    throw ConfigError("dephasing series: no observed spins (need homonuclear spins besides S)");

  DephasingCurve curve;
  curve.layout = params.layout;
  curve.powder_scheme = powder.scheme;
  curve.observed = observed;
  for (int k : observed) curve.labels.push_back(system.spins[std::size_t(k)].label);
  const double tau_r = two_pi / params.tofu.omega_r;
  for (int n : n_list) {
    curve.t_seconds.push_back(n * 16.0 * tau_r);
    curve.t_rotor_periods.push_back(n * 16.0);
  }

  // signals[crystallite][point][spin]
  std::vector<std::vector<std::vector<double>>> per_cryst(powder.size());
  std::string failure;
  std::mutex fail_mutex;

  run_workers(powder.size(), opts.threads, [&](std::size_t c) {
    try {
      const CompiledSystem cs =
          compile_system(system, powder.entries[c].angles, params.tofu.omega_r);
      SegCache cache{&cs, &opts.prop, tau_r, {}};
      const CMat rho0 = initial_state(cs);
      auto& rows = per_cryst[c];
      rows.reserve(n_list.size());
      for (int n : n_list) {
        const EventTimeline tl = assemble(params, assets, n);
        const CMat u = timeline_propagator(tl, cache, cs.ops.dim);
        const CMat t1 = u * rho0;
        const CMat rho = mul_adjb(t1, u);
        std::vector<double> row;
        row.reserve(observed.size());
        for (int k : observed) row.push_back(detect_spin(rho, cs, k, opts.detect));
        rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(fail_mutex);
      if (failure.empty())
        failure = "crystallite " + std::to_string(c) + ": " + e.what();
    }
  });
  if (!failure.empty()) throw NumericalError("dephasing series: " + failure);

  curve.signals.assign(n_list.size(), std::vector<double>(observed.size(), 0.0));
  std::vector<double> vals(powder.size());
  for (std::size_t p = 0; p < n_list.size(); ++p) {
    const double decay = std::exp(-opts.lambda * curve.t_seconds[p]);
    for (std::size_t s = 0; s < observed.size(); ++s) {
      for (std::size_t c = 0; c < powder.size(); ++c) vals[c] = per_cryst[c][p][s];
      curve.signals[p][s] = decay * powder_average(vals, powder);
    }
  }
  return curve;
}

RecouplingCurve run_recoupling_curve(const SpinSystem& system, const EulerAngles& crystallite,
                                     double omega_r, const RfWaveform& waveform, int n_elements,
                                     const SeriesOptions& opts) {
  const CompiledSystem cs = compile_system(system, crystallite, omega_r);
  const CMat rho0 = initial_state(cs);
  RecouplingCurve out;
  const double elem = waveform.duration();
  CMat u = CMat::identity(cs.ops.dim);
  // element propagator is reused when the element spans whole rotor periods
  const double tau_r = two_pi / omega_r;
  const double ratio = elem / tau_r;
  const bool periodic = std::abs(ratio - std::llround(ratio)) < 1e-9;
  CMat u_elem;
  auto wf = std::make_shared<const RfWaveform>(waveform);
  for (int k = 0; k <= n_elements; ++k) {
    out.t_seconds.push_back(k * elem);
    const CMat t1 = u * rho0;
    const CMat rho = mul_adjb(t1, u);
    std::vector<double> row;
    for (int s = 0; s < system.size(); ++s)
      row.push_back(system.homonuclear(s) ? detect_spin(rho, cs, s, opts.detect) : 0.0);
    out.signals.push_back(std::move(row));
    if (k == n_elements) break;
    if (k == 0 || !periodic) {
      TimelineSegment seg = WaveformSegment{wf, 1};
      u_elem = segment_propagator(cs, seg, k * elem, opts.prop);
    }
    u = u_elem * u;
  }
  return out;
}

}  // namespace tofu
