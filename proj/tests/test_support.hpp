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

#ifndef UFLS_TESTS_TEST_SUPPORT_HPP
#define UFLS_TESTS_TEST_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ufls/coalition_game.hpp"

namespace ufls::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(UFLS_DATA_DIR) / name;
}

inline std::vector<std::string> player_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back("P" + std::to_string(i + 1));
  }
  return out;
}

/// Game with uniformly random worths in [-5, 5] on every non-empty coalition.
inline CoalitionGame random_game(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> worth(-5.0, 5.0);
  std::vector<double> v(std::size_t{1} << n, 0.0);
  for (std::size_t mask = 1; mask < v.size(); ++mask) {
    v[mask] = worth(rng);
  }
  return CoalitionGame(player_names(n), std::move(v));
}

/// Reference characteristic functions for buses 5, 6, 8 written out by hand,
/// independent of the file parser.
inline CoalitionGame reference_deltaf() {
  return CoalitionGame({"5", "6", "8"},
                       {0.0, 1.2757, 0.9196, 2.1869, 0.9887, 2.2727, 1.9144, 3.1883});
}

inline CoalitionGame reference_rocof() {
  return CoalitionGame({"5", "6", "8"},
                       {0.0, 1.1189, 0.7990, 1.9169, 0.8890, 2.0092, 1.6866, 2.8071});
}

}  // namespace ufls::test

#endif  // UFLS_TESTS_TEST_SUPPORT_HPP
