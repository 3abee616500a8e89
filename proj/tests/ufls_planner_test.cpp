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

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ufls/ufls_planner.hpp"

using namespace ufls;

namespace {

const std::vector<std::string> kBuses = {"5", "6", "8"};
const std::vector<double> kReferencePsi = {1.1973, 0.8581, 0.9424};

std::vector<double> rounded(const SheddingPlan& plan) {
  std::vector<double> out;
  for (const auto& e : plan.entries) {
    out.push_back(e.rounded_mw);
  }
  return out;
}

std::vector<double> raw(const SheddingPlan& plan) {
  std::vector<double> out;
  for (const auto& e : plan.entries) {
    out.push_back(e.raw_mw);
  }
  return out;
}

std::vector<std::string> bus_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::to_string(i + 1));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// distribution_factors

TEST(DistributionFactors, ReferenceShapleyValues) {
  const auto d = distribution_factors(kReferencePsi);
  EXPECT_NEAR(d[0], 0.39939288811795315, 1e-12);
  EXPECT_NEAR(d[1], 0.2862432450463673, 1e-12);
  EXPECT_NEAR(d[2], 0.31436386683567946, 1e-12);
  EXPECT_NEAR(d[0] + d[1] + d[2], 1.0, 1e-12);
}

TEST(DistributionFactors, SymmetricAndDummy) {
  EXPECT_EQ(distribution_factors(std::vector<double>{1, 1}), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(distribution_factors(std::vector<double>{2, 0}), (std::vector<double>{1.0, 0.0}));
}

TEST(DistributionFactors, Errors) {
  try {
    distribution_factors(std::vector<double>{0, 0, 0});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate Shapley values"), std::string::npos);
  }
  EXPECT_THROW(distribution_factors(std::vector<double>{1, -0.1}), ValidationError);
  EXPECT_THROW(distribution_factors(std::vector<double>{}), ValidationError);
}

// ---------------------------------------------------------------------------
// allocate

TEST(Allocate, ThreeLocations) {
  const auto plan = allocate(85.0, kBuses, kReferencePsi, 1.0);
  EXPECT_EQ(rounded(plan), (std::vector<double>{34, 24, 27}));
  EXPECT_NEAR(plan.entries[0].raw_mw, 33.948395490026016, 1e-9);
  EXPECT_NEAR(plan.entries[1].raw_mw, 24.330675828941224, 1e-9);
  EXPECT_NEAR(plan.entries[2].raw_mw, 26.720928681032756, 1e-9);
  EXPECT_DOUBLE_EQ(plan.rounded_total(), 85.0);
  EXPECT_DOUBLE_EQ(plan.total_p_d, 85.0);
}

TEST(Allocate, TwoLocations) {
  const auto plan =
      allocate(85.0, std::vector<std::string>{"5", "8"}, std::vector<double>{1.2222, 0.9187});
  EXPECT_EQ(rounded(plan), (std::vector<double>{49, 36}));
}

TEST(Allocate, EqualSplit) {
  const auto plan = allocate(10.0, std::vector<std::string>{"a", "b"}, std::vector<double>{1, 1});
  EXPECT_EQ(rounded(plan), (std::vector<double>{5, 5}));
}

TEST(Allocate, TiesGoToLowerBusId) {
  // Remainders tie at .5; one unit to hand out.
  const auto plan =
      allocate(3.0, std::vector<std::string>{"10", "9"}, std::vector<double>{1, 1});
  EXPECT_EQ(rounded(plan), (std::vector<double>{1, 2}));
}

TEST(Allocate, ZeroDeficit) {
  const auto plan = allocate(0.0, kBuses, kReferencePsi);
  EXPECT_EQ(rounded(plan), (std::vector<double>{0, 0, 0}));
}

TEST(Allocate, Granularity) {
  const auto plan = allocate(85.0, kBuses, kReferencePsi, 5.0);
  for (const double r : rounded(plan)) {
    EXPECT_DOUBLE_EQ(std::fmod(r, 5.0), 0.0);
  }
  EXPECT_DOUBLE_EQ(plan.rounded_total(), 85.0);

  const auto fine = allocate(1.7, kBuses, kReferencePsi, 0.1);
  EXPECT_NEAR(fine.rounded_total(), 1.7, 1e-12);
}

TEST(Allocate, CapsRedistributeExcess) {
  // Bus 5 would get 34 MW but only 20 MW are there; 14 MW move to 6 and 8 by D_k.
  const std::vector<double> caps = {20.0, 90.0, 100.0};
  const auto plan = allocate(85.0, kBuses, kReferencePsi, 1.0, std::span<const double>(caps));
  EXPECT_DOUBLE_EQ(plan.entries[0].rounded_mw, 20.0);
  EXPECT_DOUBLE_EQ(plan.rounded_total(), 85.0);
  const double share6 = 65.0 * 0.8581 / (0.8581 + 0.9424);
  EXPECT_NEAR(plan.entries[1].rounded_mw, share6, 1.0);
  EXPECT_NEAR(plan.entries[0].raw_mw, 33.948395490026016, 1e-9);  // raw stays D_k * P_d
}

TEST(Allocate, CapsCascade) {
  const std::vector<double> caps = {30.0, 10.0, 50.0};
  const auto plan = allocate(85.0, kBuses, kReferencePsi, 1.0, std::span<const double>(caps));
  EXPECT_EQ(rounded(plan), (std::vector<double>{30, 10, 45}));
}

TEST(Allocate, InfeasibleWhenCapsTooSmall) {
  const std::vector<double> caps = {20.0, 20.0, 20.0};
  EXPECT_THROW(allocate(85.0, kBuses, kReferencePsi, 1.0, std::span<const double>(caps)),
               InfeasibleError);
}

TEST(Allocate, InputErrors) {
  EXPECT_THROW(allocate(-1.0, kBuses, kReferencePsi), ValidationError);
  EXPECT_THROW(allocate(10.0, kBuses, kReferencePsi, 0.0), ValidationError);
  EXPECT_THROW(allocate(10.0, kBuses, std::vector<double>{1, 2}), ValidationError);
  EXPECT_THROW(allocate(10.0, kBuses, std::vector<double>{0, 0, 0}), ValidationError);
}

// ---------------------------------------------------------------------------
// Properties

TEST(AllocateProperties, ExactTotalAndBoundedDeviation) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> pd(0.0, 500.0);
  std::uniform_real_distribution<double> psi(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 12;
    std::vector<double> values(n);
    for (auto& v : values) {
      v = psi(rng);
    }
    values[0] += 1e-3;  // never all zero
    const double p_d = pd(rng);
    const auto plan = allocate(p_d, bus_names(n), values, 1.0);
    EXPECT_DOUBLE_EQ(plan.rounded_total(), std::round(p_d));
    double raw_sum = 0.0;
    double d_sum = 0.0;
    for (const auto& e : plan.entries) {
      EXPECT_LT(std::abs(e.rounded_mw - e.raw_mw), 1.0);
      EXPECT_GE(e.rounded_mw, 0.0);
      EXPECT_DOUBLE_EQ(e.rounded_mw, std::round(e.rounded_mw));
      raw_sum += e.raw_mw;
      d_sum += e.distribution_factor;
    }
    EXPECT_NEAR(raw_sum, p_d, 1e-9 * std::max(1.0, p_d));
    EXPECT_NEAR(d_sum, 1.0, 1e-12);
  }
}

TEST(AllocateProperties, ScaleInvariance) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> psi(0.01, 3.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 8;
    std::vector<double> values(n);
    for (auto& v : values) {
      v = psi(rng);
    }
    const double p_d = std::uniform_real_distribution<double>(0.0, 300.0)(rng);
    const auto base = allocate(p_d, bus_names(n), values);

    // Powers of two scale exactly, so everything must be bit-identical.
    std::vector<double> doubled = values;
    for (auto& v : doubled) {
      v *= 4.0;
    }
    const auto exact = allocate(p_d, bus_names(n), doubled);
    EXPECT_EQ(rounded(exact), rounded(base));
    EXPECT_EQ(raw(exact), raw(base));

    const double c = scale(rng);
    std::vector<double> scaled = values;
    for (auto& v : scaled) {
      v *= c;
    }
    const auto other = allocate(p_d, bus_names(n), scaled);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(other.entries[k].distribution_factor, base.entries[k].distribution_factor, 1e-12);
      EXPECT_NEAR(other.entries[k].raw_mw, base.entries[k].raw_mw, 1e-9);
    }
  }
}

TEST(AllocateProperties, MonotoneInOwnShapleyValue) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> psi(0.01, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 6;
    std::vector<double> values(n);
    for (auto& v : values) {
      v = psi(rng);
    }
    const std::size_t k = static_cast<std::size_t>(trial) % n;
    const auto before = allocate(100.0, bus_names(n), values);
    values[k] += psi(rng);
    const auto after = allocate(100.0, bus_names(n), values);
    EXPECT_GE(after.entries[k].raw_mw, before.entries[k].raw_mw);
  }
}

TEST(AllocateProperties, IntegralRawAmountsAreKept) {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> amount(0, 60);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 8;
    std::vector<double> target(n);
    for (auto& t : target) {
      t = amount(rng);
    }
    target[0] += 1.0;
    const double total = std::accumulate(target.begin(), target.end(), 0.0);
    // psi proportional to the integer amounts: raw == target (up to rounding).
    const auto plan = allocate(total, bus_names(n), target);
    EXPECT_EQ(rounded(plan), target);
  }
}

// ---------------------------------------------------------------------------
// plan_from_measurement

TEST(PlanFromMeasurement, Machine3OutageOnWecc9) {
  const PowerSystem post = without_machine(wecc9(), "3");
  ShapleyResult shapley;
  shapley.players = kBuses;
  shapley.psi_eqv = kReferencePsi;
  const auto plan = plan_from_measurement(-0.8489, post, shapley);
  EXPECT_NEAR(plan.total_p_d, 85.0, 0.01);
  EXPECT_EQ(rounded(plan), (std::vector<double>{34, 24, 27}));
}

TEST(PlanFromMeasurement, ZeroRocofGivesEmptyPlan) {
  ShapleyResult shapley;
  shapley.players = kBuses;
  shapley.psi_eqv = kReferencePsi;
  const auto plan = plan_from_measurement(0.0, wecc9(), shapley);
  EXPECT_EQ(rounded(plan), (std::vector<double>{0, 0, 0}));
}

TEST(PlanFromMeasurement, InfeasibleBeyondSheddableLoad) {
  ShapleyResult shapley;
  shapley.players = {"5", "8"};
  shapley.psi_eqv = {1.0, 1.0};
  // 4 Hz/s on 30.04 s of inertia is about 400 MW, more than 225 MW at buses 5 and 8.
  EXPECT_THROW(plan_from_measurement(-4.0, without_machine(wecc9(), "3"), shapley),
               InfeasibleError);
}

TEST(PlanFromMeasurement, UnknownOrProtectedBus) {
  ShapleyResult shapley;
  shapley.players = {"4"};
  shapley.psi_eqv = {1.0};
  EXPECT_THROW(plan_from_measurement(-0.5, wecc9(), shapley), ValidationError);

  PowerSystem sys = wecc9();
  sys.loads[0].priority = true;
  validate(sys);
  shapley.players = {"5"};
  EXPECT_THROW(plan_from_measurement(-0.5, sys, shapley), ValidationError);
}

// ---------------------------------------------------------------------------
// Output

TEST(PlanOutput, CsvColumns) {
  const auto plan = allocate(85.0, kBuses, kReferencePsi);
  const std::string csv = plan_to_csv(plan);
  EXPECT_EQ(csv,
            "bus,psi_eqv,distribution_factor,raw_mw,rounded_mw\n"
            "5,1.197300,0.399393,33.948395,34.000000\n"
            "6,0.858100,0.286243,24.330676,24.000000\n"
            "8,0.942400,0.314364,26.720929,27.000000\n");
  const std::string table = plan_to_table(plan);
  EXPECT_NE(table.find("total"), std::string::npos);
  EXPECT_NE(table.find("34"), std::string::npos);
}

TEST(TriggerThreshold, DefaultScalesWithNominal) {
  EXPECT_DOUBLE_EQ(default_trigger_threshold(60.0), 59.5);
  EXPECT_NEAR(default_trigger_threshold(50.0), 49.583333333333336, 1e-12);
}
