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

/// \file ufls/coalition_game.hpp
///
/// Transferable-utility cooperative games over at most 24 players.
///
/// A coalition is a bitmask over player indices; the characteristic function
/// is stored densely, indexed by mask, so every one of the 2^n coalitions has
/// a worth. Players are identified by string ids (load bus ids) and results
/// are always reported alongside the player list.

#ifndef UFLS_COALITION_GAME_HPP
#define UFLS_COALITION_GAME_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ufls/error.hpp"

namespace ufls {

inline constexpr std::size_t kMaxPlayers = 24;
inline constexpr std::size_t kMaxOraclePlayers = 8;

class Coalition {
 public:
  using mask_type = std::uint32_t;

  constexpr Coalition() = default;
  constexpr explicit Coalition(mask_type bits) : bits_(bits) {}

  static constexpr Coalition grand(std::size_t n) {
    return Coalition(n == 0 ? 0u : static_cast<mask_type>((std::uint64_t{1} << n) - 1));
  }

  constexpr mask_type bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t player) const { return (bits_ >> player) & 1u; }
  constexpr Coalition with(std::size_t player) const { return Coalition(bits_ | (1u << player)); }
  constexpr Coalition without(std::size_t player) const {
    return Coalition(bits_ & ~(1u << player));
  }
  constexpr bool is_subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }

  /// Player indices in ascending order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (mask_type b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  mask_type bits_ = 0;
};

/// All 2^n coalitions of n players in ascending mask order, empty set first.
inline std::vector<Coalition> enumerate_coalitions(std::size_t n) {
  if (n > kMaxPlayers) {
    throw CapacityError("coalition enumeration supports at most " + std::to_string(kMaxPlayers) +
                        " players, got " + std::to_string(n));
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Coalition> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    out.emplace_back(static_cast<Coalition::mask_type>(mask));
  }
  return out;
}

class CoalitionGame {
 public:
  CoalitionGame() = default;

  /// Game over \p players with every worth zero.
  explicit CoalitionGame(std::vector<std::string> players) : players_(std::move(players)) {
    check_players();
    worth_.assign(std::size_t{1} << players_.size(), 0.0);
  }

  /// \p worth is indexed by coalition mask and must hold 2^n values with worth[0] == 0.
  CoalitionGame(std::vector<std::string> players, std::vector<double> worth)
      : players_(std::move(players)), worth_(std::move(worth)) {
    check_players();
    if (worth_.size() != (std::size_t{1} << players_.size())) {
      throw ValidationError("characteristic function needs " +
                            std::to_string(std::size_t{1} << players_.size()) +
                            " worths, got " + std::to_string(worth_.size()));
    }
    if (worth_[0] != 0.0) {
      throw ValidationError("worth of the empty coalition must be 0");
    }
  }

  const std::vector<std::string>& players() const { return players_; }
  std::size_t player_count() const { return players_.size(); }
  std::size_t coalition_count() const { return worth_.size(); }

  double worth(Coalition s) const { return worth_[s.bits()]; }
  double grand_worth() const { return worth_.back(); }
  std::span<const double> worths() const { return worth_; }

  void set_worth(Coalition s, double value) {
    if (s.bits() >= worth_.size()) {
      throw ValidationError("coalition outside the player set");
    }
    if (s.empty() && value != 0.0) {
      throw ValidationError("worth of the empty coalition must be 0");
    }
    worth_[s.bits()] = value;
  }

  /// Index of player \p id, or player_count() when absent.
  std::size_t index_of(std::string_view id) const {
    const auto it = std::find(players_.begin(), players_.end(), id);
    return static_cast<std::size_t>(it - players_.begin());
  }

  Coalition coalition_of(std::span<const std::string> ids) const {
    Coalition s;
    for (const auto& id : ids) {
      const std::size_t i = index_of(id);
      if (i == player_count()) {
        throw ValidationError("unknown player '" + id + "'");
      }
      s = s.with(i);
    }
    return s;
  }

  /// Subgame on \p ids (in that order): each coalition keeps its worth in this game.
  CoalitionGame restrict_to(std::span<const std::string> ids) const {
    std::vector<std::size_t> map;
    map.reserve(ids.size());
    for (const auto& id : ids) {
      const std::size_t i = index_of(id);
      if (i == player_count()) {
        throw ValidationError("player '" + id + "' is not part of the game");
      }
      map.push_back(i);
    }
    CoalitionGame sub(std::vector<std::string>(ids.begin(), ids.end()));
    for (std::size_t mask = 1; mask < sub.worth_.size(); ++mask) {
      Coalition original;
      for (std::size_t k = 0; k < map.size(); ++k) {
        if ((mask >> k) & 1u) {
          original = original.with(map[k]);
        }
      }
      sub.worth_[mask] = worth(original);
    }
    return sub;
  }

  friend CoalitionGame operator+(const CoalitionGame& a, const CoalitionGame& b) {
    if (a.players_ != b.players_) {
      throw ValidationError("games over different player lists cannot be added");
    }
    CoalitionGame sum = a;
    for (std::size_t i = 0; i < sum.worth_.size(); ++i) {
      sum.worth_[i] += b.worth_[i];
    }
    return sum;
  }

 private:
  void check_players() const {
    if (players_.size() > kMaxPlayers) {
      throw CapacityError("a game supports at most " + std::to_string(kMaxPlayers) +
                          " players, got " + std::to_string(players_.size()));
    }
    for (std::size_t i = 0; i < players_.size(); ++i) {
      for (std::size_t j = i + 1; j < players_.size(); ++j) {
        if (players_[i] == players_[j]) {
          throw ValidationError("duplicate player '" + players_[i] + "'");
        }
      }
    }
  }

  std::vector<std::string> players_;
  std::vector<double> worth_{0.0};
};

/// Shapley weights w[s] = (s-1)!(n-s)!/n! for s = 1..n (w[0] unused).
///
/// Built by the recurrence w[1] = 1/n, w[s+1] = w[s] * s / (n-s), so no
/// factorial is ever formed. Each step adds at most one rounding, hence
/// |w[s] - exact| <= 2 s eps |exact|, about 1e-14 relative at n = 24.
inline std::vector<double> shapley_weights(std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) {
    return w;
  }
  w[1] = 1.0 / static_cast<double>(n);
  for (std::size_t s = 1; s < n; ++s) {
    w[s + 1] = w[s] * static_cast<double>(s) / static_cast<double>(n - s);
  }
  return w;
}

namespace detail {

// Pairwise summation of term(i) over [lo, hi); the split points depend only on
// the range, so the result is independent of how players are spread over threads.
template <class Term>
double pairwise_sum(std::uint64_t lo, std::uint64_t hi, const Term& term) {
  if (hi - lo <= 64) {
    double s = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      s += term(i);
    }
    return s;
  }
  const std::uint64_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

inline double shapley_for_player(const CoalitionGame& game, std::span<const double> weights,
                                 std::size_t j) {
  const std::size_t n = game.player_count();
  const auto v = game.worths();
  const std::uint64_t low_mask = (std::uint64_t{1} << j) - 1;
  const std::uint64_t bit = std::uint64_t{1} << j;
  // r enumerates the coalitions of the other n-1 players; S = r with j inserted.
  auto term = [&](std::uint64_t r) {
    const std::uint64_t s = ((r & ~low_mask) << 1) | (r & low_mask) | bit;
    const auto size = static_cast<std::size_t>(std::popcount(s));
    return weights[size] * (v[s] - v[s ^ bit]);
  };
  return pairwise_sum(0, std::uint64_t{1} << (n - 1), term);
}

}  // namespace detail

/// Shapley value of every player by direct summation over coalitions:
/// psi_j = sum over S containing j of w[|S|] (V(S) - V(S \ {j})).
///
/// O(n 2^n). Players are processed in parallel for n >= 16; every player's
/// sum is a fixed pairwise tree, so the result does not depend on the thread
/// count.
inline std::vector<double> shapley_values(const CoalitionGame& game) {
  const std::size_t n = game.player_count();
  std::vector<double> psi(n, 0.0);
  if (n == 0) {
    return psi;
  }
  const auto weights = shapley_weights(n);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = n >= 16 ? std::min<std::size_t>(hw, n) : 1;
  if (workers <= 1) {
    for (std::size_t j = 0; j < n; ++j) {
      psi[j] = detail::shapley_for_player(game, weights, j);
    }
    return psi;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t j = w; j < n; j += workers) {
        psi[j] = detail::shapley_for_player(game, weights, j);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  return psi;
}

/// Independent check of shapley_values: the marginal contribution of each
/// player averaged over all n! join orders. Limited to 8 players.
inline std::vector<double> shapley_permutation_oracle(const CoalitionGame& game) {
  const std::size_t n = game.player_count();
  if (n > kMaxOraclePlayers) {
    throw CapacityError("permutation oracle supports at most " +
                        std::to_string(kMaxOraclePlayers) + " players, got " + std::to_string(n));
  }
  std::vector<double> total(n, 0.0);
  if (n == 0) {
    return total;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t orderings = 0;
  do {
    Coalition s;
    for (const std::size_t p : order) {
      const Coalition next = s.with(p);
      total[p] += game.worth(next) - game.worth(s);
      s = next;
    }
    ++orderings;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& t : total) {
    t /= static_cast<double>(orderings);
  }
  return total;
}

/// Shapley values of the frequency-rise game, the ROCOF game, and their
/// weighted mean, keyed by `players`.
struct ShapleyResult {
  std::vector<std::string> players;
  std::vector<double> psi_deltaf;
  std::vector<double> psi_rocof;
  std::vector<double> psi_eqv;
};

inline constexpr double kEqualGameWeight = 0.5;

/// psi_eqv = weight * psi_deltaf + (1 - weight) * psi_rocof; the default
/// weight 0.5 is the plain average of the two games.
inline ShapleyResult equivalent_shapley(const CoalitionGame& deltaf_game,
                                        const CoalitionGame& rocof_game,
                                        double weight = kEqualGameWeight) {
  if (deltaf_game.players() != rocof_game.players()) {
    throw ValidationError("the frequency-rise and ROCOF games must share one player list");
  }
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw ValidationError("game weight must lie in [0, 1]");
  }
  ShapleyResult result;
  result.players = deltaf_game.players();
  result.psi_deltaf = shapley_values(deltaf_game);
  result.psi_rocof = shapley_values(rocof_game);
  result.psi_eqv.resize(result.players.size());
  for (std::size_t i = 0; i < result.players.size(); ++i) {
    result.psi_eqv[i] = weight == kEqualGameWeight
                            ? (result.psi_deltaf[i] + result.psi_rocof[i]) / 2.0
                            : weight * result.psi_deltaf[i] + (1.0 - weight) * result.psi_rocof[i];
  }
  return result;
}

inline constexpr double kCoreSlack = 1e-9;

/// True iff \p allocation is in the core: every coalition receives at least
/// its worth (absolute slack 1e-9) and the grand coalition's worth is
/// distributed exactly (1e-9 relative).
inline bool in_core(const CoalitionGame& game, std::span<const double> allocation) {
  const std::size_t n = game.player_count();
  if (allocation.size() != n) {
    throw ValidationError("allocation has " + std::to_string(allocation.size()) +
                          " payoffs for " + std::to_string(n) + " players");
  }
  const std::size_t count = game.coalition_count();
  // Payoff sums for every coalition, built incrementally from the lowest set bit.
  std::vector<double> paid(count, 0.0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    paid[mask] = paid[mask & (mask - 1)] + allocation[low];
  }
  const double grand = game.grand_worth();
  if (std::abs(paid[count - 1] - grand) > kCoreSlack * std::max(1.0, std::abs(grand))) {
    return false;
  }
  for (std::size_t mask = 1; mask + 1 < count; ++mask) {
    if (paid[mask] < game.worths()[mask] - kCoreSlack) {
      return false;
    }
  }
  return true;
}

}  // namespace ufls

#endif  // UFLS_COALITION_GAME_HPP
