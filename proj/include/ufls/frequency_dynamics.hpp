// Copyright 2026 The ufls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file ufls/frequency_dynamics.hpp
///
/// Frequency-only multi-machine model.
///
/// Every online machine i obeys the swing equation
///
///     (2 H_i / f_n) d f_i/dt = p_mech,i - p_elec,i            (pu on base_mva)
///
/// with a first-order droop governor
///
///     T_i d p_mech,i/dt = p_ref,i - (rating_i / base) / R_i * (f_i - f_n) / f_n - p_mech,i
///
/// (algebraic when T_i = 0). The system imbalance sum(p_mech) - P_load is
/// shared between the machines in proportion to H_i, and the load carries an
/// optional damping term D (f_c - f_n) / f_n. At t = 0 every machine sits at
/// its dispatched output and the load is defined as the sum of those outputs,
/// so the difference to the listed bus loads is a constant (losses).
///
/// Steady state after a net deficit dP (pu): (f_c - f_n) / f_n = -dP / beta
/// with beta = sum over online machines of (rating_i / base) / R_i, plus D.

#ifndef UFLS_FREQUENCY_DYNAMICS_HPP
#define UFLS_FREQUENCY_DYNAMICS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ufls/charfun_io.hpp"
#include "ufls/coalition_game.hpp"
#include "ufls/detail/text.hpp"
#include "ufls/error.hpp"
#include "ufls/grid_model.hpp"
#include "ufls/runge_kutta.hpp"

namespace ufls {

/// Center-of-inertia frequency sum(H_i f_i) / sum(H_i).
inline double coi_frequency(std::span<const double> freqs_hz, std::span<const double> inertias) {
  if (freqs_hz.empty()) {
    throw ValidationError("COI frequency needs at least one machine");
  }
  if (freqs_hz.size() != inertias.size()) {
    throw ValidationError("frequency and inertia vectors differ in length");
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    if (!(inertias[i] > 0.0)) {
      throw ValidationError("inertia constants must be > 0");
    }
    weighted += inertias[i] * freqs_hz[i];
    total += inertias[i];
  }
  return weighted / total;
}

/// Generation deficit in MW implied by an initial COI ROCOF:
/// P_d = 2 * total_inertia * |rocof| / f_n, in pu of \p base_mva.
inline double disturbance_power(double rocof_hz_s, double total_inertia_s, double nominal_hz,
                                double base_mva) {
  if (!(nominal_hz > 0.0)) {
    throw ValidationError("nominal frequency must be > 0");
  }
  if (!(total_inertia_s > 0.0)) {
    throw ValidationError("total inertia must be > 0");
  }
  if (!(base_mva > 0.0)) {
    throw ValidationError("base power must be > 0");
  }
  return 2.0 * total_inertia_s * std::abs(rocof_hz_s) / nominal_hz * base_mva;
}

struct DisturbanceEstimate {
  double rocof = 0.0;          ///< Hz/s
  double total_inertia = 0.0;  ///< s, online machines only
  double p_d = 0.0;            ///< MW
  std::vector<std::string> machine_ids;
  std::vector<double> per_machine_dp;  ///< MW, 2 H_i |rocof| / f_n * base
};

/// Stage one of the scheme: the deficit seen by the machines still online in \p system.
inline DisturbanceEstimate estimate_disturbance(double rocof_hz_s, const PowerSystem& system) {
  DisturbanceEstimate est;
  est.rocof = rocof_hz_s;
  est.total_inertia = total_inertia(system);
  est.p_d = disturbance_power(rocof_hz_s, est.total_inertia, system.nominal_frequency_hz,
                              system.base_mva);
  for (const auto& m : system.machines) {
    if (m.online) {
      est.machine_ids.push_back(m.id);
      est.per_machine_dp.push_back(2.0 * m.inertia_h * std::abs(rocof_hz_s) /
                                   system.nominal_frequency_hz * system.base_mva);
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Events

enum class EventKind { machine_outage, load_shed, load_step };

struct Event {
  double time_s = 0.0;
  EventKind kind = EventKind::machine_outage;
  std::string target;  ///< machine id or load bus
  double mw = 0.0;     ///< shed amount or signed load step; unused for outages

  static Event machine_outage(double t, std::string machine) {
    return {t, EventKind::machine_outage, std::move(machine), 0.0};
  }
  static Event load_shed(double t, std::string bus, double mw) {
    return {t, EventKind::load_shed, std::move(bus), mw};
  }
  static Event load_step(double t, std::string bus, double delta_mw) {
    return {t, EventKind::load_step, std::move(bus), delta_mw};
  }

  friend bool operator==(const Event&, const Event&) = default;
};

/// Time-ordered list of events. Times are non-negative and non-decreasing.
class EventSchedule {
 public:
  EventSchedule() = default;
  EventSchedule(std::initializer_list<Event> events) {
    for (const auto& e : events) {
      add(e);
    }
  }

  EventSchedule& add(Event e) {
    if (!(e.time_s >= 0.0) || !std::isfinite(e.time_s)) {
      throw ValidationError("event times must be non-negative");
    }
    if (!events_.empty() && e.time_s < events_.back().time_s) {
      throw ValidationError("event times must be non-decreasing");
    }
    events_.push_back(std::move(e));
    return *this;
  }

  const std::vector<Event>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  double first_time() const { return events_.front().time_s; }

 private:
  std::vector<Event> events_;
};

// ---------------------------------------------------------------------------
// Traces

struct FrequencyTrace {
  double dt = 0.0;
  double nominal_hz = 0.0;
  std::vector<double> time;
  std::vector<std::string> machine_ids;
  std::vector<double> inertia;                  ///< H_i per machine
  std::vector<std::vector<double>> machine_hz;  ///< [machine][sample]; NaN while offline
  std::vector<double> coi_hz;

  std::size_t size() const { return time.size(); }

  /// Index of the sample closest to \p t.
  std::size_t sample_at(double t) const {
    const auto k = static_cast<std::int64_t>(std::llround(t / dt));
    return static_cast<std::size_t>(std::clamp<std::int64_t>(k, 0, static_cast<std::int64_t>(size()) - 1));
  }

  double final_coi() const { return coi_hz.back(); }

  /// Lowest COI frequency and the time it occurs.
  std::pair<double, double> nadir() const {
    const auto it = std::min_element(coi_hz.begin(), coi_hz.end());
    return {*it, time[static_cast<std::size_t>(it - coi_hz.begin())]};
  }
};

inline constexpr double kMaxStep = 0.01;
inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultRocofWindow = 0.1;

namespace detail {

struct ModelState {
  std::vector<bool> online;
  std::vector<double> inertia;
  std::vector<double> gain;  // (rating / base) / R
  std::vector<double> tc;
  std::vector<double> p_ref;
  double p_load = 0.0;       // pu, without damping
  double damping = 0.0;
  double f_n = 0.0;
};

// State vector: [df_0 .. df_{m-1}, p_mech_0 .. p_mech_{m-1}], df in Hz.
inline void model_rhs(const ModelState& ms, std::span<const double> x, std::span<double> dxdt) {
  const std::size_t m = ms.inertia.size();
  double sum_h = 0.0;
  double weighted_df = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (ms.online[i]) {
      sum_h += ms.inertia[i];
      weighted_df += ms.inertia[i] * x[i];
    }
  }
  const double coi_df = weighted_df / sum_h;

  auto p_mech = [&](std::size_t i) {
    return ms.tc[i] > 0.0 ? x[m + i] : ms.p_ref[i] - ms.gain[i] * x[i] / ms.f_n;
  };
  double generation = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (ms.online[i]) {
      generation += p_mech(i);
    }
  }
  const double imbalance = generation - (ms.p_load + ms.damping * coi_df / ms.f_n);

  for (std::size_t i = 0; i < m; ++i) {
    if (!ms.online[i]) {
      dxdt[i] = 0.0;
      dxdt[m + i] = 0.0;
      continue;
    }
    const double pm = p_mech(i);
    const double pe = pm - ms.inertia[i] / sum_h * imbalance;
    dxdt[i] = ms.f_n / (2.0 * ms.inertia[i]) * (pm - pe);
    dxdt[m + i] =
        ms.tc[i] > 0.0 ? (ms.p_ref[i] - ms.gain[i] * x[i] / ms.f_n - x[m + i]) / ms.tc[i] : 0.0;
  }
}

// Rejects events that reference unknown or unavailable equipment.
inline void check_events(const PowerSystem& system, const EventSchedule& events) {
  std::map<std::string, bool, std::less<>> online;
  for (const auto& mc : system.machines) {
    online[mc.id] = mc.online;
  }
  std::map<std::string, double, std::less<>> load;
  for (const auto& l : system.loads) {
    load[l.bus] = l.active_mw;
  }
  std::size_t online_left = system.online_count();
  for (const auto& e : events.events()) {
    switch (e.kind) {
      case EventKind::machine_outage: {
        const auto it = online.find(e.target);
        if (it == online.end()) {
          throw ValidationError("event references unknown machine '" + e.target + "'");
        }
        if (!it->second) {
          throw ValidationError("machine '" + e.target + "' is already offline");
        }
        it->second = false;
        if (--online_left == 0) {
          throw ValidationError("outage of machine '" + e.target + "' leaves no machine online");
        }
        break;
      }
      case EventKind::load_shed:
      case EventKind::load_step: {
        const auto it = load.find(e.target);
        if (it == load.end()) {
          throw ValidationError("event references unknown load bus '" + e.target + "'");
        }
        if (!std::isfinite(e.mw)) {
          throw ValidationError("event amount at bus '" + e.target + "' is not finite");
        }
        if (e.kind == EventKind::load_shed) {
          if (!system.find_load(e.target)->sheddable) {
            throw ValidationError("load at bus '" + e.target + "' is not sheddable");
          }
          if (e.mw < 0.0) {
            throw ValidationError("shed amount at bus '" + e.target + "' must be >= 0");
          }
          it->second -= e.mw;
        } else {
          it->second += e.mw;
        }
        if (it->second < -1e-9) {
          throw ValidationError("events drive the load at bus '" + e.target + "' below zero");
        }
        break;
      }
    }
  }
}

}  // namespace detail

/// Integrates the model with classical RK4 from t = 0 to \p duration_s.
/// Events fire at the grid point nearest their time, before the step that
/// starts there; the sample recorded at that point is post-event.
inline FrequencyTrace simulate(const PowerSystem& system, const EventSchedule& events,
                               double duration_s, double dt = kDefaultStep) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ValidationError("simulation duration must be > 0");
  }
  if (!(dt > 0.0 && dt <= kMaxStep)) {
    throw ValidationError("time step must satisfy 0 < dt <= 0.01 s");
  }
  {
    PowerSystem checked = system;
    validate(checked);
  }
  detail::check_events(system, events);

  const std::size_t m = system.machines.size();
  const double base = system.base_mva;
  detail::ModelState ms;
  ms.f_n = system.nominal_frequency_hz;
  ms.damping = system.damping_pu;
  for (const auto& mc : system.machines) {
    ms.online.push_back(mc.online);
    ms.inertia.push_back(mc.inertia_h);
    ms.gain.push_back(mc.rating_mva / base / mc.droop);
    ms.tc.push_back(mc.governor_tc);
    ms.p_ref.push_back(mc.output_mw / base);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (ms.online[i]) {
      ms.p_load += ms.p_ref[i];
    }
  }

  std::vector<double> x(2 * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    x[m + i] = ms.p_ref[i];
  }

  const auto steps = static_cast<std::size_t>(std::llround(duration_s / dt));
  if (steps == 0) {
    throw ValidationError("duration shorter than one time step");
  }

  FrequencyTrace trace;
  trace.dt = dt;
  trace.nominal_hz = ms.f_n;
  trace.inertia = ms.inertia;
  for (const auto& mc : system.machines) {
    trace.machine_ids.push_back(mc.id);
  }
  trace.time.reserve(steps + 1);
  trace.coi_hz.reserve(steps + 1);
  trace.machine_hz.assign(m, {});
  for (auto& series : trace.machine_hz) {
    series.reserve(steps + 1);
  }

  std::vector<double> freqs;
  std::vector<double> weights;
  auto record = [&](double t) {
    freqs.clear();
    weights.clear();
    trace.time.push_back(t);
    for (std::size_t i = 0; i < m; ++i) {
      if (ms.online[i]) {
        const double f = ms.f_n + x[i];
        trace.machine_hz[i].push_back(f);
        freqs.push_back(f);
        weights.push_back(ms.inertia[i]);
      } else {
        trace.machine_hz[i].push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    trace.coi_hz.push_back(coi_frequency(freqs, weights));
  };

  const auto& ev = events.events();
  std::size_t next_event = 0;
  auto apply_due = [&](std::size_t k) {
    while (next_event < ev.size() &&
           static_cast<std::size_t>(std::llround(ev[next_event].time_s / dt)) <= k) {
      const Event& e = ev[next_event++];
      switch (e.kind) {
        case EventKind::machine_outage: {
          const auto it = std::find(trace.machine_ids.begin(), trace.machine_ids.end(), e.target);
          ms.online[static_cast<std::size_t>(it - trace.machine_ids.begin())] = false;
          break;
        }
        case EventKind::load_shed:
          ms.p_load -= e.mw / base;
          break;
        case EventKind::load_step:
          ms.p_load += e.mw / base;
          break;
      }
    }
  };

  RungeKutta4 stepper(2 * m);
  auto rhs = [&ms](std::span<const double> s, std::span<double> d, double) {
    detail::model_rhs(ms, s, d);
  };
  for (std::size_t k = 0; k <= steps; ++k) {
    apply_due(k);
    const double t = static_cast<double>(k) * dt;
    record(t);
    if (k < steps) {
      stepper.do_step(rhs, x, t, dt);
    }
  }
  return trace;
}

/// Least-squares slope of the COI frequency over [event_time, event_time + window].
inline double initial_rocof(const FrequencyTrace& trace, double event_time_s,
                            double window_s = kDefaultRocofWindow) {
  if (trace.size() < 2) {
    throw ValidationError("trace too short to measure ROCOF");
  }
  if (!(window_s > trace.dt)) {
    throw ValidationError("ROCOF window must be longer than the time step");
  }
  const double eps = trace.dt * 1e-6;
  if (event_time_s < -eps || event_time_s + window_s > trace.time.back() + eps) {
    throw ValidationError("ROCOF window lies outside the trace");
  }
  const std::size_t first = trace.sample_at(event_time_s);
  const std::size_t last = trace.sample_at(event_time_s + window_s);
  const double count = static_cast<double>(last - first + 1);
  double mean_t = 0.0;
  double mean_f = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    mean_t += trace.time[k];
    mean_f += trace.coi_hz[k];
  }
  mean_t /= count;
  mean_f /= count;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double dt = trace.time[k] - mean_t;
    num += dt * (trace.coi_hz[k] - mean_f);
    den += dt * dt;
  }
  return num / den;
}

/// ROCOF at t = 0+ after a net deficit \p imbalance_mw hits the online
/// machines of \p system (governors have not moved yet).
inline double analytic_initial_rocof(const PowerSystem& system, double imbalance_mw) {
  return -imbalance_mw / system.base_mva * system.nominal_frequency_hz /
         (2.0 * total_inertia(system));
}

/// ROCOF at t = 0+ after tripping machine \p machine_id: its output is lost
/// and its inertia leaves the sum.
inline double outage_initial_rocof(const PowerSystem& system, std::string_view machine_id) {
  const Machine* mc = system.find_machine(machine_id);
  if (mc == nullptr) {
    throw ValidationError("unknown machine '" + std::string(machine_id) + "'");
  }
  return analytic_initial_rocof(without_machine(system, machine_id), mc->output_mw);
}

/// beta = sum over online machines of (rating / base) / R, plus D.
inline double frequency_response_characteristic(const PowerSystem& system) {
  double beta = system.damping_pu;
  for (const auto& mc : system.machines) {
    if (mc.online) {
      beta += mc.rating_mva / system.base_mva / mc.droop;
    }
  }
  return beta;
}

// ---------------------------------------------------------------------------
// Characteristic functions

struct CharacteristicOptions {
  double shed_delay_s = 2.0;  ///< shedding delay after the disturbance in the frequency-rise runs
  double settle_s = 40.0;     ///< simulated time after the shed before reading the steady state
  double dt = kDefaultStep;
  double rocof_window_s = kDefaultRocofWindow;
  unsigned threads = 0;  ///< 0 selects hardware concurrency
};

/// Builds the frequency-rise and ROCOF games for \p candidates under \p disturbance.
///
/// For each non-empty coalition S, every load in S is shed in full:
///   - frequency-rise worth: final COI frequency with S shed shed_delay after
///     the disturbance, minus the final COI frequency without shedding;
///   - ROCOF worth: initial COI ROCOF with S shed at the disturbance instant,
///     minus the initial ROCOF without shedding (positive for any shed).
/// The disturbance instant is the time of the first event in the schedule.
inline GamePair characteristic_functions(const PowerSystem& system,
                                         std::span<const std::string> candidates,
                                         const EventSchedule& disturbance,
                                         const CharacteristicOptions& options = {}) {
  if (candidates.empty() || candidates.size() > kMaxPlayers) {
    throw CapacityError("between 1 and " + std::to_string(kMaxPlayers) +
                        " candidate buses are required, got " + std::to_string(candidates.size()));
  }
  if (disturbance.empty()) {
    throw ValidationError("characteristic functions need a disturbance event");
  }
  if (!(options.shed_delay_s >= 0.0) || !(options.settle_s > 0.0)) {
    throw ValidationError("shed delay must be >= 0 and settle time > 0");
  }
  std::vector<double> sizes;
  for (const auto& bus : candidates) {
    const LoadPoint* load = system.find_load(bus);
    if (load == nullptr) {
      throw ValidationError("candidate bus '" + bus + "' has no load");
    }
    if (!load->sheddable || load->priority) {
      throw ValidationError("candidate bus '" + bus + "' is not sheddable");
    }
    sizes.push_back(load->active_mw);
  }
  std::vector<std::string> players(candidates.begin(), candidates.end());
  GamePair games{CoalitionGame(players), CoalitionGame(players)};  // rejects duplicates

  const double t0 = disturbance.first_time();
  const double t_shed = t0 + options.shed_delay_s;
  const double duration = std::max(t_shed, disturbance.events().back().time_s) + options.settle_s;
  const double rocof_duration = t0 + options.rocof_window_s + 2.0 * options.dt;

  // Shed events go after the disturbance events at the same instant.
  auto with_shed = [&](Coalition s, double when) {
    EventSchedule sched;
    bool placed = false;
    auto place = [&] {
      for (const auto i : s.members()) {
        sched.add(Event::load_shed(when, candidates[i], sizes[i]));
      }
      placed = true;
    };
    for (const auto& e : disturbance.events()) {
      if (!placed && e.time_s > when) {
        place();
      }
      sched.add(e);
    }
    if (!placed) {
      place();
    }
    return sched;
  };

  const FrequencyTrace base_trace = simulate(system, disturbance, duration, options.dt);
  const double base_final = base_trace.final_coi();
  const double base_rocof =
      initial_rocof(simulate(system, disturbance, rocof_duration, options.dt), t0,
                    options.rocof_window_s);

  const std::size_t count = games.deltaf.coalition_count();
  std::vector<double> deltaf(count, 0.0);
  std::vector<double> rocof(count, 0.0);
  std::atomic<std::size_t> next{1};
  auto worker = [&] {
    for (std::size_t mask = next++; mask < count; mask = next++) {
      const Coalition s(static_cast<Coalition::mask_type>(mask));
      deltaf[mask] =
          simulate(system, with_shed(s, t_shed), duration, options.dt).final_coi() - base_final;
      rocof[mask] = initial_rocof(simulate(system, with_shed(s, t0), rocof_duration, options.dt),
                                  t0, options.rocof_window_s) -
                    base_rocof;
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads =
      std::min<std::size_t>(options.threads == 0 ? hw : options.threads, count - 1);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  for (std::size_t mask = 1; mask < count; ++mask) {
    const Coalition s(static_cast<Coalition::mask_type>(mask));
    games.deltaf.set_worth(s, deltaf[mask]);
    games.rocof.set_worth(s, rocof[mask]);
  }
  return games;
}

/// CSV with header `time_s,f_coi_hz,f_<id>_hz,...`, six decimals throughout.
inline std::string trace_to_csv(const FrequencyTrace& trace) {
  std::string out = "time_s,f_coi_hz";
  for (const auto& id : trace.machine_ids) {
    out += ",f_" + id + "_hz";
  }
  out += "\n";
  out.reserve(out.size() + trace.size() * (12 + 11 * (trace.machine_ids.size() + 1)));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += detail::format_fixed(trace.time[k], 6);
    out += ',';
    out += detail::format_fixed(trace.coi_hz[k], 6);
    for (const auto& series : trace.machine_hz) {
      out += ',';
      out += detail::format_fixed(series[k], 6);
    }
    out += '\n';
  }
  return out;
}

}  // namespace ufls

#endif  // UFLS_FREQUENCY_DYNAMICS_HPP
