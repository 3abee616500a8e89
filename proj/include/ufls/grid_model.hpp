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

/// \file ufls/grid_model.hpp
///
/// Power-system data used by the load-shedding pipeline: machines with their
/// inertia and governor data, load points, and the system-level constants.
/// Values are stored in physical units (MW, MVA, Hz, s); per-unit conversion
/// happens in the dynamics code.
///
/// The on-disk form is a JSON document, see docs/file_formats.md.

#ifndef UFLS_GRID_MODEL_HPP
#define UFLS_GRID_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ufls/detail/text.hpp"
#include "ufls/error.hpp"

namespace ufls {

inline constexpr double kDefaultDroop = 0.05;
inline constexpr double kDefaultGovernorTc = 0.5;

struct Machine {
  std::string id;
  double inertia_h = 0.0;  ///< s, on the system base
  double rating_mva = 0.0;
  double droop = kDefaultDroop;  ///< speed regulation R, pu
  double governor_tc = kDefaultGovernorTc;  ///< s; 0 means an instantaneous governor
  double output_mw = 0.0;
  bool online = true;

  friend bool operator==(const Machine&, const Machine&) = default;
};

struct LoadPoint {
  std::string bus;
  double active_mw = 0.0;
  double reactive_mvar = 0.0;  ///< stored only, the dynamics are frequency-only
  bool sheddable = true;
  bool priority = false;  ///< priority loads are never candidates

  friend bool operator==(const LoadPoint&, const LoadPoint&) = default;
};

struct PowerSystem {
  std::vector<Machine> machines;
  std::vector<LoadPoint> loads;
  double nominal_frequency_hz = 60.0;
  double base_mva = 100.0;
  double damping_pu = 0.0;  ///< load-frequency damping D, pu power per pu frequency

  const Machine* find_machine(std::string_view id) const {
    const auto it = std::find_if(machines.begin(), machines.end(),
                                 [&](const Machine& m) { return m.id == id; });
    return it == machines.end() ? nullptr : &*it;
  }
  Machine* find_machine(std::string_view id) {
    return const_cast<Machine*>(std::as_const(*this).find_machine(id));
  }

  const LoadPoint* find_load(std::string_view bus) const {
    const auto it = std::find_if(loads.begin(), loads.end(),
                                 [&](const LoadPoint& l) { return l.bus == bus; });
    return it == loads.end() ? nullptr : &*it;
  }

  std::size_t online_count() const {
    return static_cast<std::size_t>(
        std::count_if(machines.begin(), machines.end(), [](const Machine& m) { return m.online; }));
  }

  double total_load_mw() const {
    double sum = 0.0;
    for (const auto& l : loads) {
      sum += l.active_mw;
    }
    return sum;
  }

  double total_reactive_mvar() const {
    double sum = 0.0;
    for (const auto& l : loads) {
      sum += l.reactive_mvar;
    }
    return sum;
  }

  friend bool operator==(const PowerSystem&, const PowerSystem&) = default;
};

/// Sum of H over online machines.
inline double total_inertia(const PowerSystem& system) {
  double sum = 0.0;
  for (const auto& m : system.machines) {
    if (m.online) {
      sum += m.inertia_h;
    }
  }
  return sum;
}

/// Checks every invariant of \p system and normalises it in place: a load
/// flagged as priority is forced to non-sheddable. Throws ValidationError
/// naming the first violated invariant.
inline void validate(PowerSystem& system) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };

  if (!(system.nominal_frequency_hz > 0.0) || !std::isfinite(system.nominal_frequency_hz)) {
    fail("nominal_frequency_hz must be > 0");
  }
  if (!(system.base_mva > 0.0) || !std::isfinite(system.base_mva)) {
    fail("base_mva must be > 0");
  }
  if (!(system.damping_pu >= 0.0) || !std::isfinite(system.damping_pu)) {
    fail("damping_pu must be >= 0");
  }
  if (system.machines.empty()) {
    fail("at least one machine required");
  }

  std::set<std::string, std::less<>> ids;
  for (const auto& m : system.machines) {
    const std::string where = "machine '" + m.id + "': ";
    if (m.id.empty()) {
      fail("machine id must not be empty");
    }
    if (!ids.insert(m.id).second) {
      fail("duplicate machine id '" + m.id + "'");
    }
    if (!(m.inertia_h > 0.0) || !std::isfinite(m.inertia_h)) {
      fail(where + "inertia_h must be > 0");
    }
    if (!(m.rating_mva > 0.0) || !std::isfinite(m.rating_mva)) {
      fail(where + "rating must be > 0");
    }
    if (!(m.droop > 0.0) || !std::isfinite(m.droop)) {
      fail(where + "droop must be > 0");
    }
    if (!(m.governor_tc >= 0.0) || !std::isfinite(m.governor_tc)) {
      fail(where + "governor_tc must be >= 0");
    }
    if (!(m.output_mw >= 0.0 && m.output_mw <= m.rating_mva)) {
      fail(where + "output must satisfy 0 <= output <= rating");
    }
  }
  if (system.online_count() == 0) {
    fail("at least one online machine required");
  }

  std::set<std::string, std::less<>> buses;
  for (auto& l : system.loads) {
    if (l.bus.empty()) {
      fail("load bus id must not be empty");
    }
    if (!buses.insert(l.bus).second) {
      fail("duplicate load bus '" + l.bus + "'");
    }
    if (!(l.active_mw >= 0.0) || !std::isfinite(l.active_mw)) {
      fail("load at bus '" + l.bus + "': active power must be >= 0");
    }
    if (l.priority) {
      l.sheddable = false;
    }
  }
}

namespace detail {

using nlohmann::json;

inline const json* member(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double number_field(const json& obj, std::string_view key, const std::string& path,
                           std::optional<double> fallback = std::nullopt) {
  const json* v = member(obj, key);
  if (v == nullptr || v->is_null()) {
    if (fallback) {
      return *fallback;
    }
    throw ParseError(path + "." + std::string(key) + ": required field missing");
  }
  if (!v->is_number()) {
    throw ParseError(path + "." + std::string(key) + ": expected a number");
  }
  return v->get<double>();
}

inline bool bool_field(const json& obj, std::string_view key, const std::string& path,
                       bool fallback) {
  const json* v = member(obj, key);
  if (v == nullptr || v->is_null()) {
    return fallback;
  }
  if (!v->is_boolean()) {
    throw ParseError(path + "." + std::string(key) + ": expected true or false");
  }
  return v->get<bool>();
}

// Identifiers may be written as strings or as integers ("5" and 5 are the same bus).
inline std::string id_field(const json& obj, std::string_view key, const std::string& path) {
  const json* v = member(obj, key);
  if (v == nullptr) {
    throw ParseError(path + "." + std::string(key) + ": required field missing");
  }
  if (v->is_string()) {
    return v->get<std::string>();
  }
  if (v->is_number_integer()) {
    return std::to_string(v->get<std::int64_t>());
  }
  throw ParseError(path + "." + std::string(key) + ": expected a string or integer id");
}

inline std::string line_location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace detail

/// Parses and validates a system document. \p origin only labels error messages.
inline PowerSystem parse_system(std::string_view text, std::string_view origin = "<input>") {
  using detail::json;
  const std::string where(origin);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": " + detail::line_location(text, e.byte) + ": malformed JSON (" +
                     e.what() + ")");
  }
  if (!doc.is_object()) {
    throw ParseError(where + ": top level must be an object");
  }

  try {
    PowerSystem system;
    system.base_mva = detail::number_field(doc, "base_mva", "system", 100.0);
    system.nominal_frequency_hz = detail::number_field(doc, "nominal_frequency_hz", "system");
    system.damping_pu = detail::number_field(doc, "damping_pu", "system", 0.0);

    const json* machines = detail::member(doc, "machines");
    if (machines == nullptr || !machines->is_array()) {
      throw ParseError("system.machines: expected an array");
    }
    for (std::size_t i = 0; i < machines->size(); ++i) {
      const json& m = (*machines)[i];
      const std::string path = "machines[" + std::to_string(i) + "]";
      if (!m.is_object()) {
        throw ParseError(path + ": expected an object");
      }
      Machine machine;
      machine.id = detail::id_field(m, "id", path);
      machine.inertia_h = detail::number_field(m, "inertia_h_s", path);
      machine.rating_mva = detail::number_field(m, "rating_mva", path);
      machine.droop = detail::number_field(m, "droop_pu", path, kDefaultDroop);
      machine.governor_tc = detail::number_field(m, "governor_tc_s", path, kDefaultGovernorTc);
      machine.output_mw = detail::number_field(m, "output_mw", path, 0.0);
      machine.online = detail::bool_field(m, "online", path, true);
      system.machines.push_back(std::move(machine));
    }

    if (const json* loads = detail::member(doc, "loads"); loads != nullptr) {
      if (!loads->is_array()) {
        throw ParseError("system.loads: expected an array");
      }
      for (std::size_t i = 0; i < loads->size(); ++i) {
        const json& l = (*loads)[i];
        const std::string path = "loads[" + std::to_string(i) + "]";
        if (!l.is_object()) {
          throw ParseError(path + ": expected an object");
        }
        LoadPoint load;
        load.bus = detail::id_field(l, "bus", path);
        load.active_mw = detail::number_field(l, "active_mw", path);
        load.reactive_mvar = detail::number_field(l, "reactive_mvar", path, 0.0);
        load.sheddable = detail::bool_field(l, "sheddable", path, true);
        load.priority = detail::bool_field(l, "priority", path, false);
        system.loads.push_back(std::move(load));
      }
    }
    // "lines", "transformers" and other network data are accepted and ignored.

    validate(system);
    return system;
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline PowerSystem load_system(const std::filesystem::path& path) {
  return parse_system(detail::read_text_file(path), path.string());
}

inline std::string serialize_system(const PowerSystem& system) {
  using detail::json;
  json doc;
  doc["base_mva"] = system.base_mva;
  doc["nominal_frequency_hz"] = system.nominal_frequency_hz;
  doc["damping_pu"] = system.damping_pu;
  doc["machines"] = json::array();
  for (const auto& m : system.machines) {
    doc["machines"].push_back({{"id", m.id},
                               {"inertia_h_s", m.inertia_h},
                               {"rating_mva", m.rating_mva},
                               {"droop_pu", m.droop},
                               {"governor_tc_s", m.governor_tc},
                               {"output_mw", m.output_mw},
                               {"online", m.online}});
  }
  doc["loads"] = json::array();
  for (const auto& l : system.loads) {
    doc["loads"].push_back({{"bus", l.bus},
                            {"active_mw", l.active_mw},
                            {"reactive_mvar", l.reactive_mvar},
                            {"sheddable", l.sheddable},
                            {"priority", l.priority}});
  }
  return doc.dump(2) + "\n";
}

/// Reduced WECC 3-machine 9-bus system. Inertias are on the 100 MVA base;
/// ratings, dispatch and loads follow the standard data set. Governor data
/// use the library defaults.
inline PowerSystem wecc9() {
  PowerSystem system;
  system.base_mva = 100.0;
  system.nominal_frequency_hz = 60.0;
  system.damping_pu = 0.0;
  system.machines = {
      {"1", 23.64, 247.5, kDefaultDroop, kDefaultGovernorTc, 71.6, true},
      {"2", 6.4, 192.0, kDefaultDroop, kDefaultGovernorTc, 163.0, true},
      {"3", 3.01, 128.0, kDefaultDroop, kDefaultGovernorTc, 85.0, true},
  };
  system.loads = {
      {"5", 125.0, 50.0, true, false},
      {"6", 90.0, 30.0, true, false},
      {"8", 100.0, 35.0, true, false},
  };
  return system;
}

/// Copy of \p system with machine \p id taken offline.
inline PowerSystem without_machine(PowerSystem system, std::string_view id) {
  Machine* m = system.find_machine(id);
  if (m == nullptr) {
    throw ValidationError("unknown machine '" + std::string(id) + "'");
  }
  m->online = false;
  if (system.online_count() == 0) {
    throw ValidationError("at least one online machine required");
  }
  return system;
}

}  // namespace ufls

#endif  // UFLS_GRID_MODEL_HPP
