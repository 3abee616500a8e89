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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ufls/grid_model.hpp"

using namespace ufls;

namespace {

std::string minimal_system(const std::string& machines, const std::string& loads = "[]") {
  return R"({"base_mva": 100, "nominal_frequency_hz": 60, "machines": )" + machines +
         R"(, "loads": )" + loads + "}";
}

}  // namespace

TEST(GridModel, LoadsWecc9Fixture) {
  const PowerSystem sys = load_system(test::data_path("wecc9.json"));
  ASSERT_EQ(sys.machines.size(), 3u);
  EXPECT_DOUBLE_EQ(sys.machines[0].inertia_h, 23.64);
  EXPECT_DOUBLE_EQ(sys.machines[1].inertia_h, 6.4);
  EXPECT_DOUBLE_EQ(sys.machines[2].inertia_h, 3.01);

  ASSERT_EQ(sys.loads.size(), 3u);
  EXPECT_EQ(sys.loads[0].bus, "5");
  EXPECT_EQ(sys.loads[1].bus, "6");
  EXPECT_EQ(sys.loads[2].bus, "8");
  EXPECT_DOUBLE_EQ(sys.loads[0].active_mw, 125.0);
  EXPECT_DOUBLE_EQ(sys.loads[1].active_mw, 90.0);
  EXPECT_DOUBLE_EQ(sys.loads[2].active_mw, 100.0);
  EXPECT_DOUBLE_EQ(sys.total_load_mw(), 315.0);
  EXPECT_DOUBLE_EQ(sys.total_reactive_mvar(), 115.0);
  EXPECT_DOUBLE_EQ(sys.nominal_frequency_hz, 60.0);
}

TEST(GridModel, FixtureFileMatchesBuiltIn) {
  EXPECT_EQ(load_system(test::data_path("wecc9.json")), wecc9());
}

TEST(GridModel, TotalInertia) {
  const PowerSystem sys = wecc9();
  EXPECT_NEAR(total_inertia(sys), 33.05, 1e-12);
  EXPECT_NEAR(total_inertia(without_machine(sys, "3")), 30.04, 1e-12);

  PowerSystem single;
  single.machines = {{"g", 5.0, 100.0}};
  EXPECT_DOUBLE_EQ(total_inertia(single), 5.0);
}

TEST(GridModel, TotalInertiaAdditiveAndOrderInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> h(0.5, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    PowerSystem sys;
    const int n = 1 + trial % 9;
    for (int i = 0; i < n; ++i) {
      sys.machines.push_back({"m" + std::to_string(i), h(rng), 100.0});
    }
    const double whole = total_inertia(sys);

    PowerSystem left = sys;
    PowerSystem right = sys;
    for (int i = 0; i < n; ++i) {
      (i % 2 == 0 ? right : left).machines[static_cast<std::size_t>(i)].online = false;
    }
    EXPECT_NEAR(total_inertia(left) + total_inertia(right), whole, 1e-12 * whole);

    std::shuffle(sys.machines.begin(), sys.machines.end(), rng);
    EXPECT_NEAR(total_inertia(sys), whole, 1e-12 * whole);
  }
}

TEST(GridModel, RoundTripThroughSerializer) {
  PowerSystem sys = wecc9();
  sys.damping_pu = 1.5;
  sys.machines[1].droop = 0.04;
  sys.machines[2].governor_tc = 0.0;
  sys.machines[2].online = false;
  sys.loads[1].priority = true;
  validate(sys);
  const PowerSystem again = parse_system(serialize_system(sys));
  EXPECT_EQ(again, sys);
  EXPECT_EQ(serialize_system(again), serialize_system(sys));
}

TEST(GridModel, DefaultsForOptionalFields) {
  const PowerSystem sys = parse_system(minimal_system(
      R"([{"id": 1, "inertia_h_s": 4, "rating_mva": 100}])", R"([{"bus": 7, "active_mw": 10}])"));
  const Machine& m = sys.machines.front();
  EXPECT_EQ(m.id, "1");
  EXPECT_DOUBLE_EQ(m.droop, kDefaultDroop);
  EXPECT_DOUBLE_EQ(m.governor_tc, kDefaultGovernorTc);
  EXPECT_DOUBLE_EQ(m.output_mw, 0.0);
  EXPECT_TRUE(m.online);
  EXPECT_EQ(sys.loads.front().bus, "7");
  EXPECT_TRUE(sys.loads.front().sheddable);
  EXPECT_DOUBLE_EQ(sys.damping_pu, 0.0);
}

TEST(GridModel, PriorityLoadIsNeverSheddable) {
  const PowerSystem sys = parse_system(minimal_system(
      R"([{"id": "g", "inertia_h_s": 4, "rating_mva": 100}])",
      R"([{"bus": "a", "active_mw": 10, "sheddable": true, "priority": true}])"));
  EXPECT_TRUE(sys.loads.front().priority);
  EXPECT_FALSE(sys.loads.front().sheddable);
}

TEST(GridModel, ZeroMachinesRejected) {
  try {
    parse_system(minimal_system("[]"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("at least one machine required"), std::string::npos);
  }
}

TEST(GridModel, AllOfflineRejected) {
  EXPECT_THROW(parse_system(minimal_system(
                   R"([{"id": "g", "inertia_h_s": 4, "rating_mva": 100, "online": false}])")),
               ValidationError);
}

TEST(GridModel, InvariantViolationsNameTheField) {
  struct Case {
    std::string machines;
    std::string loads;
    std::string needle;
  };
  const std::vector<Case> cases = {
      {R"([{"id": "g", "inertia_h_s": 0, "rating_mva": 100}])", "[]", "inertia_h"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": -1}])", "[]", "rating"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100, "droop_pu": 0}])", "[]", "droop"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100, "governor_tc_s": -0.1}])", "[]",
       "governor_tc"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100, "output_mw": 120}])", "[]", "output"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100}, {"id": "g", "inertia_h_s": 1, "rating_mva": 100}])",
       "[]", "duplicate machine"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100}])",
       R"([{"bus": 5, "active_mw": 1}, {"bus": "5", "active_mw": 2}])", "duplicate load"},
      {R"([{"id": "g", "inertia_h_s": 1, "rating_mva": 100}])", R"([{"bus": 5, "active_mw": -1}])",
       "active power"},
  };
  for (const auto& c : cases) {
    try {
      parse_system(minimal_system(c.machines, c.loads));
      ADD_FAILURE() << "accepted: " << c.machines << " " << c.loads;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(c.needle), std::string::npos) << e.what();
    }
  }
}

TEST(GridModel, ParseErrorsCarryLocation) {
  try {
    parse_system("{\n  \"base_mva\": 100,\n  \"machines\": [ oops ]\n}", "broken.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("broken.json"), std::string::npos) << what;
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
  }
  try {
    parse_system(minimal_system(R"([{"id": "g", "inertia_h_s": "big", "rating_mva": 100}])"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("machines[0].inertia_h_s"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_system(R"({"machines": []})"), ParseError);  // nominal frequency missing
}

TEST(GridModel, NetworkDataIgnored) {
  const PowerSystem sys = parse_system(R"({
    "nominal_frequency_hz": 50,
    "machines": [{"id": "g", "inertia_h_s": 4, "rating_mva": 100}],
    "lines": [{"from": 1, "to": 2, "x_pu": 0.1}],
    "transformers": []
  })");
  EXPECT_DOUBLE_EQ(sys.nominal_frequency_hz, 50.0);
  EXPECT_DOUBLE_EQ(sys.base_mva, 100.0);
}

TEST(GridModel, MissingFileIsIoError) {
  EXPECT_THROW(load_system("/nonexistent/system.json"), IoError);
}
