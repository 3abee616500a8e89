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

/// \file ufls/scenario.hpp
///
/// The commands behind the `ufls` tool. The offline commands (`charfun`,
/// `shapley`) produce cacheable files; `plan` and `simulate` are the online
/// stage. Every command writes its files under ScenarioConfig::out_dir and
/// returns its result so it can be driven from tests.

#ifndef UFLS_SCENARIO_HPP
#define UFLS_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "ufls/charfun_io.hpp"
#include "ufls/coalition_game.hpp"
#include "ufls/detail/text.hpp"
#include "ufls/error.hpp"
#include "ufls/frequency_dynamics.hpp"
#include "ufls/grid_model.hpp"
#include "ufls/ufls_planner.hpp"

namespace ufls {

struct OutageSpec {
  std::string machine;
  double time_s = 0.0;
};

/// Parses `<machine>@<seconds>`, e.g. `2@5`.
inline OutageSpec parse_outage(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos) {
    throw ValidationError("outage must be written as <machine>@<time>, got '" + std::string(text) +
                          "'");
  }
  OutageSpec spec;
  spec.machine = std::string(detail::trim(text.substr(0, at)));
  const auto t = detail::parse_double(text.substr(at + 1));
  if (spec.machine.empty() || !t || !(*t >= 0.0)) {
    throw ValidationError("outage must be written as <machine>@<time>, got '" + std::string(text) +
                          "'");
  }
  spec.time_s = *t;
  return spec;
}

inline constexpr std::string_view kSimulateSource = "simulate";

struct ScenarioConfig {
  std::optional<std::filesystem::path> system_path;
  std::string charfun_source{kSimulateSource};  ///< "simulate" or a characteristic-function file
  std::vector<std::string> candidates;
  std::optional<OutageSpec> outage;
  double shed_delay_s = 2.0;
  std::optional<double> p_d_mw;  ///< nullopt: estimate from the simulated ROCOF
  double granularity_mw = kDefaultGranularity;
  double dt = kDefaultStep;
  double duration_s = 30.0;
  double rocof_window_s = kDefaultRocofWindow;
  double game_weight = kEqualGameWeight;
  std::optional<double> threshold_hz;  ///< defaults to default_trigger_threshold(f_n)
  std::filesystem::path out_dir = ".";

  void check() const {
    if (!(shed_delay_s >= 0.0)) {
      throw ValidationError("shedding delay must be >= 0");
    }
    if (!(granularity_mw > 0.0)) {
      throw ValidationError("granularity must be > 0");
    }
    if (p_d_mw && !(*p_d_mw >= 0.0)) {
      throw ValidationError("disturbance power must be >= 0");
    }
  }
};

namespace detail {

inline PowerSystem require_system(const ScenarioConfig& config, std::string_view command) {
  if (!config.system_path) {
    throw ValidationError(std::string(command) + " requires --system");
  }
  return load_system(*config.system_path);
}

inline void require_candidates(const ScenarioConfig& config) {
  if (config.candidates.empty()) {
    throw ValidationError("at least one candidate bus is required (--candidates)");
  }
}

inline void check_candidates(const PowerSystem& system, std::span<const std::string> candidates) {
  for (const auto& bus : candidates) {
    const LoadPoint* load = system.find_load(bus);
    if (load == nullptr) {
      throw ValidationError("candidate bus '" + bus + "' has no load");
    }
    if (!load->sheddable) {
      throw ValidationError("candidate bus '" + bus + "' is not sheddable");
    }
  }
}

inline EventSchedule outage_schedule(const OutageSpec& outage) {
  return EventSchedule{Event::machine_outage(outage.time_s, outage.machine)};
}

inline std::string join(std::span<const std::string> ids) {
  std::string out;
  for (const auto& id : ids) {
    out += (out.empty() ? "" : ",") + id;
  }
  return out;
}

}  // namespace detail

/// Characteristic functions for the configured candidates, either read from
/// a file (restricted to the candidates when given) or simulated under the
/// configured outage.
inline GamePair build_games(const ScenarioConfig& config, const std::optional<PowerSystem>& system) {
  if (system) {
    detail::check_candidates(*system, config.candidates);
  }
  if (config.charfun_source != kSimulateSource) {
    GamePair games = load_charfun(config.charfun_source);
    if (!config.candidates.empty()) {
      games = games.restrict_to(config.candidates);
    }
    return games;
  }
  if (!system) {
    throw ValidationError("simulated characteristic functions require --system");
  }
  detail::require_candidates(config);
  if (!config.outage) {
    throw ValidationError("simulated characteristic functions require --outage");
  }
  CharacteristicOptions options;
  options.shed_delay_s = config.shed_delay_s;
  options.dt = config.dt;
  options.rocof_window_s = config.rocof_window_s;
  return characteristic_functions(*system, config.candidates,
                                  detail::outage_schedule(*config.outage), options);
}

inline std::optional<PowerSystem> optional_system(const ScenarioConfig& config) {
  if (!config.system_path) {
    return std::nullopt;
  }
  return load_system(*config.system_path);
}

/// Writes `<out>/charfun.txt`.
inline GamePair cmd_charfun(const ScenarioConfig& config, std::ostream& log) {
  config.check();
  const auto system = optional_system(config);
  const GamePair games = build_games(config, system);
  const auto path = config.out_dir / "charfun.txt";
  detail::write_text_file(path, serialize_charfun(games));
  log << "wrote " << games.deltaf.coalition_count() - 1 << " coalitions for players "
      << detail::join(games.players()) << " to " << path.string() << "\n";
  return games;
}

inline std::string shapley_to_csv(const ShapleyResult& result) {
  std::string out = "bus,psi_deltaf,psi_rocof,psi_eqv\n";
  for (std::size_t i = 0; i < result.players.size(); ++i) {
    out += result.players[i] + "," + detail::format_fixed(result.psi_deltaf[i], 6) + "," +
           detail::format_fixed(result.psi_rocof[i], 6) + "," +
           detail::format_fixed(result.psi_eqv[i], 6) + "\n";
  }
  return out;
}

/// Prints the Shapley table and writes `<out>/shapley.csv`.
inline ShapleyResult cmd_shapley(const ScenarioConfig& config, std::ostream& out) {
  config.check();
  const auto system = optional_system(config);
  const GamePair games = build_games(config, system);
  const ShapleyResult result = equivalent_shapley(games.deltaf, games.rocof, config.game_weight);
  out << "   bus  psi_deltaf   psi_rocof     psi_eqv\n";
  for (std::size_t i = 0; i < result.players.size(); ++i) {
    std::string bus = result.players[i];
    bus.insert(0, bus.size() < 6 ? 6 - bus.size() : 0, ' ');
    out << bus << "  " << detail::format_fixed(result.psi_deltaf[i], 6) << "    "
        << detail::format_fixed(result.psi_rocof[i], 6) << "    "
        << detail::format_fixed(result.psi_eqv[i], 6) << "\n";
  }
  detail::write_text_file(config.out_dir / "shapley.csv", shapley_to_csv(result));
  return result;
}

/// P_d from the configured value, or estimated from the simulated initial
/// ROCOF of the outage on the post-outage system.
inline double resolve_disturbance_power(const ScenarioConfig& config, const PowerSystem& system,
                                        std::ostream& out) {
  if (config.p_d_mw) {
    return *config.p_d_mw;
  }
  if (!config.outage) {
    throw ValidationError("--pd auto requires --outage");
  }
  const double t0 = config.outage->time_s;
  const FrequencyTrace trace =
      simulate(system, detail::outage_schedule(*config.outage),
               t0 + config.rocof_window_s + 2.0 * config.dt, config.dt);
  const double rocof = initial_rocof(trace, t0, config.rocof_window_s);
  const DisturbanceEstimate est =
      estimate_disturbance(rocof, without_machine(system, config.outage->machine));
  out << "initial COI ROCOF " << detail::format_fixed(rocof, 4) << " Hz/s, remaining inertia "
      << detail::format_fixed(est.total_inertia, 2) << " s -> P_d "
      << detail::format_fixed(est.p_d, 3) << " MW\n";
  return est.p_d;
}

/// Prints the plan table and writes `<out>/plan.csv`.
inline SheddingPlan cmd_plan(const ScenarioConfig& config, std::ostream& out) {
  config.check();
  detail::require_candidates(config);
  PowerSystem system = detail::require_system(config, "plan");
  const GamePair games = build_games(config, system);
  const ShapleyResult shapley = equivalent_shapley(games.deltaf, games.rocof, config.game_weight);
  const double p_d = resolve_disturbance_power(config, system, out);

  PowerSystem post = config.outage ? without_machine(system, config.outage->machine) : system;
  std::vector<double> caps;
  for (const auto& bus : shapley.players) {
    caps.push_back(post.find_load(bus)->active_mw);
  }
  const SheddingPlan plan =
      allocate(p_d, shapley.players, shapley.psi_eqv, config.granularity_mw,
               std::span<const double>(caps));
  out << plan_to_table(plan);
  detail::write_text_file(config.out_dir / "plan.csv", plan_to_csv(plan));
  return plan;
}

struct SimulationSummary {
  SheddingPlan plan;
  std::optional<double> shed_time_s;  ///< nullopt when the trigger never fired
  double nadir_without_hz = 0.0;
  double nadir_without_time_s = 0.0;
  double final_without_hz = 0.0;
  double nadir_with_hz = 0.0;
  double nadir_with_time_s = 0.0;
  double final_with_hz = 0.0;
  double threshold_hz = 0.0;
  bool recovered = false;  ///< final COI within 0.05 Hz of nominal with shedding
  FrequencyTrace without_shedding;
  FrequencyTrace with_shedding;
};

inline constexpr double kRecoveryBand = 0.05;

/// Simulates the outage twice: without shedding, and with the planned shed
/// applied at max(outage + shed delay, first crossing of the trigger
/// threshold). Writes `trace_no_shed.csv`, `trace_shed.csv` and `summary.csv`.
inline SimulationSummary cmd_simulate(const ScenarioConfig& config, std::ostream& out) {
  config.check();
  detail::require_candidates(config);
  if (!config.outage) {
    throw ValidationError("simulate requires --outage");
  }
  const PowerSystem system = detail::require_system(config, "simulate");
  const GamePair games = build_games(config, system);
  const ShapleyResult shapley = equivalent_shapley(games.deltaf, games.rocof, config.game_weight);
  const double p_d = resolve_disturbance_power(config, system, out);

  const PowerSystem post = without_machine(system, config.outage->machine);
  std::vector<double> caps;
  for (const auto& bus : shapley.players) {
    caps.push_back(post.find_load(bus)->active_mw);
  }

  SimulationSummary summary;
  summary.plan = allocate(p_d, shapley.players, shapley.psi_eqv, config.granularity_mw,
                          std::span<const double>(caps));
  summary.threshold_hz =
      config.threshold_hz.value_or(default_trigger_threshold(system.nominal_frequency_hz));

  const EventSchedule outage = detail::outage_schedule(*config.outage);
  summary.without_shedding = simulate(system, outage, config.duration_s, config.dt);

  const FrequencyTrace& base = summary.without_shedding;
  std::optional<double> crossing;
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (base.coi_hz[k] < summary.threshold_hz) {
      crossing = base.time[k];
      break;
    }
  }
  EventSchedule with_shed = outage;
  if (crossing) {
    const double when = std::max(config.outage->time_s + config.shed_delay_s, *crossing);
    if (when <= config.duration_s) {
      summary.shed_time_s = when;
      for (const auto& e : summary.plan.entries) {
        if (e.rounded_mw > 0.0) {
          with_shed.add(Event::load_shed(when, e.bus, e.rounded_mw));
        }
      }
    }
  }
  summary.with_shedding = simulate(system, with_shed, config.duration_s, config.dt);

  std::tie(summary.nadir_without_hz, summary.nadir_without_time_s) = base.nadir();
  summary.final_without_hz = base.final_coi();
  std::tie(summary.nadir_with_hz, summary.nadir_with_time_s) = summary.with_shedding.nadir();
  summary.final_with_hz = summary.with_shedding.final_coi();
  summary.recovered =
      std::abs(summary.final_with_hz - system.nominal_frequency_hz) < kRecoveryBand;

  detail::write_text_file(config.out_dir / "trace_no_shed.csv", trace_to_csv(base));
  detail::write_text_file(config.out_dir / "trace_shed.csv", trace_to_csv(summary.with_shedding));

  using detail::format_fixed;
  std::string csv = "case,nadir_hz,nadir_time_s,final_hz,shed_time_s,shed_mw\n";
  csv += "no_shed," + format_fixed(summary.nadir_without_hz, 6) + "," +
         format_fixed(summary.nadir_without_time_s, 6) + "," +
         format_fixed(summary.final_without_hz, 6) + ",,0.000000\n";
  csv += "shed," + format_fixed(summary.nadir_with_hz, 6) + "," +
         format_fixed(summary.nadir_with_time_s, 6) + "," + format_fixed(summary.final_with_hz, 6) +
         "," + (summary.shed_time_s ? format_fixed(*summary.shed_time_s, 6) : std::string()) + "," +
         format_fixed(summary.shed_time_s ? summary.plan.rounded_total() : 0.0, 6) + "\n";
  detail::write_text_file(config.out_dir / "summary.csv", csv);

  out << plan_to_table(summary.plan);
  out << "without shedding: nadir " << format_fixed(summary.nadir_without_hz, 4) << " Hz at "
      << format_fixed(summary.nadir_without_time_s, 3) << " s, final "
      << format_fixed(summary.final_without_hz, 4) << " Hz\n";
  if (summary.shed_time_s) {
    out << "with shedding at " << format_fixed(*summary.shed_time_s, 3) << " s: nadir "
        << format_fixed(summary.nadir_with_hz, 4) << " Hz at "
        << format_fixed(summary.nadir_with_time_s, 3) << " s, final "
        << format_fixed(summary.final_with_hz, 4) << " Hz\n";
  } else {
    out << "trigger threshold " << format_fixed(summary.threshold_hz, 3)
        << " Hz never crossed, no shedding applied\n";
  }
  out << "recovered: " << (summary.recovered ? "yes" : "no") << "\n";
  return summary;
}

}  // namespace ufls

#endif  // UFLS_SCENARIO_HPP
