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

// ufls: scenario runner for Shapley-value based under-frequency load shedding.
//
//   ufls charfun  --system wecc9.json --charfun simulate --candidates 5,6,8 --outage 3@1
//   ufls shapley  --charfun wecc9_reference.charfun
//   ufls plan     --system wecc9.json --charfun wecc9_reference.charfun --candidates 5,6,8 --pd 85
//   ufls simulate --system wecc9.json --charfun wecc9_reference.charfun --candidates 5,6,8 --outage 2@5
//
// Exit codes: 0 success, 1 validation error, 2 infeasible plan, 3 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ufls/ufls.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kInfeasible = 2, kIo = 3 };

struct RawOptions {
  std::string system;
  std::string charfun = std::string(ufls::kSimulateSource);
  std::string candidates;
  std::string outage;
  std::string pd = "auto";
  double shed_delay = 2.0;
  double granularity = ufls::kDefaultGranularity;
  double dt = ufls::kDefaultStep;
  double duration = 30.0;
  double rocof_window = ufls::kDefaultRocofWindow;
  double weight = ufls::kEqualGameWeight;
  std::optional<double> threshold;
  std::string out = ".";
};

void add_common(CLI::App& cmd, RawOptions& raw) {
  cmd.add_option("--system", raw.system, "system file (JSON)");
  cmd.add_option("--charfun", raw.charfun,
                 "characteristic-function file, or 'simulate' to build it from the system")
      ->capture_default_str();
  cmd.add_option("--candidates", raw.candidates, "candidate load buses, comma separated");
  cmd.add_option("--outage", raw.outage, "machine outage as <machine>@<seconds>");
  cmd.add_option("--shed-delay", raw.shed_delay, "shedding delay after the outage, s")
      ->capture_default_str();
  cmd.add_option("--granularity", raw.granularity, "shedding granularity, MW")
      ->capture_default_str();
  cmd.add_option("--dt", raw.dt, "integration step, s")->capture_default_str();
  cmd.add_option("--rocof-window", raw.rocof_window, "initial ROCOF fit window, s")
      ->capture_default_str();
  cmd.add_option("--weight", raw.weight, "weight of the frequency-rise game in psi_eqv")
      ->capture_default_str();
  cmd.add_option("--out", raw.out, "output directory")->capture_default_str();
}

ufls::ScenarioConfig to_config(const RawOptions& raw) {
  ufls::ScenarioConfig config;
  if (!raw.system.empty()) {
    config.system_path = raw.system;
  }
  config.charfun_source = raw.charfun;
  config.candidates = ufls::detail::split_list(raw.candidates);
  for (const auto& c : config.candidates) {
    if (c.empty()) {
      throw ufls::ValidationError("empty entry in --candidates");
    }
  }
  if (!raw.outage.empty()) {
    config.outage = ufls::parse_outage(raw.outage);
  }
  if (raw.pd != "auto") {
    const auto value = ufls::detail::parse_double(raw.pd);
    if (!value) {
      throw ufls::ValidationError("--pd expects a number of MW or 'auto', got '" + raw.pd + "'");
    }
    config.p_d_mw = *value;
  }
  config.shed_delay_s = raw.shed_delay;
  config.granularity_mw = raw.granularity;
  config.dt = raw.dt;
  config.duration_s = raw.duration;
  config.rocof_window_s = raw.rocof_window;
  config.game_weight = raw.weight;
  config.threshold_hz = raw.threshold;
  config.out_dir = raw.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-value based under-frequency load shedding"};
  app.require_subcommand(1);
  RawOptions raw;

  auto* charfun = app.add_subcommand("charfun", "write characteristic functions of all coalitions");
  add_common(*charfun, raw);

  auto* shapley = app.add_subcommand("shapley", "Shapley and equivalent Shapley values");
  add_common(*shapley, raw);

  auto* plan = app.add_subcommand("plan", "locations and amounts of load shedding");
  add_common(*plan, raw);
  plan->add_option("--pd", raw.pd, "disturbance power in MW, or 'auto' to estimate from ROCOF")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "frequency traces without and with shedding");
  add_common(*simulate, raw);
  simulate->add_option("--pd", raw.pd, "disturbance power in MW, or 'auto'")
      ->capture_default_str();
  simulate->add_option("--duration", raw.duration, "simulated time, s")->capture_default_str();
  simulate->add_option("--threshold", raw.threshold,
                       "trigger frequency, Hz (default 59.5 Hz scaled to f_n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const ufls::ScenarioConfig config = to_config(raw);
    if (charfun->parsed()) {
      ufls::cmd_charfun(config, std::cout);
    } else if (shapley->parsed()) {
      ufls::cmd_shapley(config, std::cout);
    } else if (plan->parsed()) {
      ufls::cmd_plan(config, std::cout);
    } else if (simulate->parsed()) {
      ufls::cmd_simulate(config, std::cout);
    }
  } catch (const ufls::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ufls::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ufls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
