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

/// \file ufls/ufls_planner.hpp
///
/// Turns a disturbance power and per-bus equivalent Shapley values into shed
/// amounts. Each bus receives D_k = psi_k / sum(psi) of the deficit; the
/// amounts are then rounded to the shedding granularity by largest-remainder
/// apportionment so that the rounded amounts still add up to the deficit.

#ifndef UFLS_UFLS_PLANNER_HPP
#define UFLS_UFLS_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ufls/coalition_game.hpp"
#include "ufls/detail/text.hpp"
#include "ufls/error.hpp"
#include "ufls/frequency_dynamics.hpp"
#include "ufls/grid_model.hpp"

namespace ufls {

struct PlanEntry {
  std::string bus;
  double equivalent_shapley = 0.0;
  double distribution_factor = 0.0;
  double raw_mw = 0.0;      ///< D_k * P_d
  double rounded_mw = 0.0;  ///< integer multiple of the granularity

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct SheddingPlan {
  std::vector<PlanEntry> entries;
  double total_p_d = 0.0;  ///< MW
  double granularity = 1.0;

  double rounded_total() const {
    double sum = 0.0;
    for (const auto& e : entries) {
      sum += e.rounded_mw;
    }
    return sum;
  }

  const PlanEntry* find(std::string_view bus) const {
    const auto it = std::find_if(entries.begin(), entries.end(),
                                 [&](const PlanEntry& e) { return e.bus == bus; });
    return it == entries.end() ? nullptr : &*it;
  }

  friend bool operator==(const SheddingPlan&, const SheddingPlan&) = default;
};

inline constexpr double kDefaultGranularity = 1.0;

/// D_k = psi_k / sum(psi). All values must be >= 0 and at least one > 0.
inline std::vector<double> distribution_factors(std::span<const double> psi_eqv) {
  double total = 0.0;
  for (const double p : psi_eqv) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("equivalent Shapley values must be finite and >= 0");
    }
    total += p;
  }
  if (!(total > 0.0)) {
    throw ValidationError("degenerate Shapley values: all equivalent Shapley values are zero");
  }
  std::vector<double> d(psi_eqv.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = psi_eqv[k] / total;
  }
  return d;
}

namespace detail {

// Largest-remainder apportionment of `units` among the buses in `active`,
// with quotas proportional to `weight`. Remainders that tie go to the lower
// bus id.
inline void apportion(std::int64_t units, std::span<const double> quota,
                      std::span<const std::string> buses, std::span<const std::size_t> active,
                      std::span<std::int64_t> out) {
  constexpr double kSnap = 1e-9;
  std::int64_t assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (const std::size_t k : active) {
    double whole = std::floor(quota[k]);
    double frac = quota[k] - whole;
    if (frac > 1.0 - kSnap) {
      whole += 1.0;
      frac = 0.0;
    }
    out[k] = static_cast<std::int64_t>(whole);
    assigned += out[k];
    remainders.emplace_back(frac, k);
  }
  std::sort(remainders.begin(), remainders.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) {
      return a.first > b.first;
    }
    return id_less(buses[a.second], buses[b.second]);
  });
  std::int64_t left = units - assigned;
  // Quotas sum to `units` up to rounding, so `left` lies in [0, active.size()].
  for (std::size_t r = 0; left > 0 && !remainders.empty(); r = (r + 1) % remainders.size()) {
    ++out[remainders[r].second];
    --left;
  }
  for (std::size_t r = remainders.size(); left < 0 && r-- > 0;) {
    if (out[remainders[r].second] > 0) {
      --out[remainders[r].second];
      ++left;
    }
  }
}

}  // namespace detail

/// Splits \p p_d (MW) among \p buses in proportion to \p psi_eqv.
///
/// Rounded amounts are multiples of \p granularity and add up to
/// round(p_d / granularity) * granularity. With \p caps (MW per bus, e.g. the
/// candidate load sizes) an amount that would exceed its cap is clamped and
/// the excess is spread over the remaining buses by their D_k, repeating until
/// no cap is violated. Throws InfeasibleError when the caps cannot hold p_d.
inline SheddingPlan allocate(double p_d, std::span<const std::string> buses,
                             std::span<const double> psi_eqv,
                             double granularity = kDefaultGranularity,
                             std::optional<std::span<const double>> caps = std::nullopt) {
  if (!(p_d >= 0.0) || !std::isfinite(p_d)) {
    throw ValidationError("disturbance power must be finite and >= 0");
  }
  if (!(granularity > 0.0) || !std::isfinite(granularity)) {
    throw ValidationError("granularity must be > 0");
  }
  if (buses.size() != psi_eqv.size()) {
    throw ValidationError("one equivalent Shapley value per bus is required");
  }
  if (caps && caps->size() != buses.size()) {
    throw ValidationError("one cap per bus is required");
  }
  const std::size_t n = buses.size();
  const auto factors = distribution_factors(psi_eqv);

  SheddingPlan plan;
  plan.total_p_d = p_d;
  plan.granularity = granularity;
  for (std::size_t k = 0; k < n; ++k) {
    plan.entries.push_back({buses[k], psi_eqv[k], factors[k], factors[k] * p_d, 0.0});
  }

  const auto units = static_cast<std::int64_t>(std::llround(p_d / granularity));
  std::vector<std::int64_t> cap_units(n, units);
  if (caps) {
    std::int64_t capacity = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!((*caps)[k] >= 0.0)) {
        throw ValidationError("caps must be >= 0");
      }
      cap_units[k] = static_cast<std::int64_t>(std::floor((*caps)[k] / granularity + 1e-9));
      capacity += cap_units[k];
    }
    if (units > capacity) {
      throw InfeasibleError("disturbance power " + detail::format_fixed(p_d, 3) +
                            " MW exceeds the sheddable load at the candidate buses (" +
                            detail::format_fixed(static_cast<double>(capacity) * granularity, 3) +
                            " MW)");
    }
  }

  std::vector<std::int64_t> amount(n, 0);
  std::vector<bool> capped(n, false);
  while (true) {
    std::int64_t remaining = units;
    std::vector<std::size_t> active;
    double active_weight = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (capped[k]) {
        amount[k] = cap_units[k];
        remaining -= cap_units[k];
      } else {
        active.push_back(k);
        active_weight += factors[k];
      }
    }
    std::vector<double> quota(n, 0.0);
    if (!active.empty() && active_weight > 0.0) {
      // Without caps this is the raw amount divided by the granularity.
      const double scale = static_cast<double>(remaining) / active_weight;
      for (const std::size_t k : active) {
        quota[k] = active.size() == n ? factors[k] * p_d / granularity : factors[k] * scale;
      }
    } else if (remaining > 0) {
      // Only zero-weight buses are left; spread evenly.
      for (const std::size_t k : active) {
        quota[k] = static_cast<double>(remaining) / static_cast<double>(active.size());
      }
    }
    if (active.empty()) {
      if (remaining != 0) {
        throw InfeasibleError("caps cannot absorb the disturbance power");
      }
      break;
    }
    detail::apportion(remaining, quota, buses, active, amount);

    bool violated = false;
    for (const std::size_t k : active) {
      if (amount[k] > cap_units[k]) {
        capped[k] = true;
        violated = true;
      }
    }
    if (!violated) {
      break;
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    plan.entries[k].rounded_mw = static_cast<double>(amount[k]) * granularity;
  }
  return plan;
}

/// Online stage: deficit from the measured ROCOF on the post-disturbance
/// \p system, split over the players of \p shapley. Each bus is capped at its
/// current load.
inline SheddingPlan plan_from_measurement(double rocof_hz_s, const PowerSystem& system,
                                          const ShapleyResult& shapley,
                                          double granularity = kDefaultGranularity) {
  const DisturbanceEstimate est = estimate_disturbance(rocof_hz_s, system);
  std::vector<double> caps;
  caps.reserve(shapley.players.size());
  for (const auto& bus : shapley.players) {
    const LoadPoint* load = system.find_load(bus);
    if (load == nullptr) {
      throw ValidationError("candidate bus '" + bus + "' has no load");
    }
    if (!load->sheddable) {
      throw ValidationError("candidate bus '" + bus + "' is not sheddable");
    }
    caps.push_back(load->active_mw);
  }
  return allocate(est.p_d, shapley.players, shapley.psi_eqv, granularity,
                  std::span<const double>(caps));
}

/// Trigger level used by closed-loop scenarios: 59.5 Hz on a 60 Hz system,
/// scaled for other nominal frequencies.
inline double default_trigger_threshold(double nominal_hz) { return nominal_hz * (59.5 / 60.0); }

/// `bus,psi_eqv,distribution_factor,raw_mw,rounded_mw`
inline std::string plan_to_csv(const SheddingPlan& plan) {
  std::string out = "bus,psi_eqv,distribution_factor,raw_mw,rounded_mw\n";
  for (const auto& e : plan.entries) {
    out += e.bus + "," + detail::format_fixed(e.equivalent_shapley, 6) + "," +
           detail::format_fixed(e.distribution_factor, 6) + "," +
           detail::format_fixed(e.raw_mw, 6) + "," + detail::format_fixed(e.rounded_mw, 6) + "\n";
  }
  return out;
}

/// Aligned text table with the same columns as the CSV plus a total row.
inline std::string plan_to_table(const SheddingPlan& plan) {
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) {
      s.insert(0, width - s.size(), ' ');
    }
    return s;
  };
  const int mw_decimals = plan.granularity >= 1.0 && std::floor(plan.granularity) == plan.granularity ? 0 : 3;
  std::string out = pad("bus", 6) + pad("psi_eqv", 12) + pad("D_k", 10) + pad("raw_MW", 12) +
                    pad("shed_MW", 10) + "\n";
  for (const auto& e : plan.entries) {
    out += pad(e.bus, 6) + pad(detail::format_fixed(e.equivalent_shapley, 4), 12) +
           pad(detail::format_fixed(e.distribution_factor, 5), 10) +
           pad(detail::format_fixed(e.raw_mw, 3), 12) +
           pad(detail::format_fixed(e.rounded_mw, mw_decimals), 10) + "\n";
  }
  out += pad("total", 6) + pad("", 12) + pad("", 10) + pad(detail::format_fixed(plan.total_p_d, 3), 12) +
         pad(detail::format_fixed(plan.rounded_total(), mw_decimals), 10) + "\n";
  return out;
}

}  // namespace ufls

#endif  // UFLS_UFLS_PLANNER_HPP
