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

#ifndef UFLS_RUNGE_KUTTA_HPP
#define UFLS_RUNGE_KUTTA_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ufls {

/// Classical fixed-step fourth-order Runge-Kutta stepper.
///
/// `System` is callable as `system(std::span<const double> x,
/// std::span<double> dxdt, double t)`. The stepper owns its scratch buffers,
/// so repeated steps do not allocate.
class RungeKutta4 {
 public:
  explicit RungeKutta4(std::size_t n) : tmp_(n), k1_(n), k2_(n), k3_(n), k4_(n) {}

  std::size_t size() const { return tmp_.size(); }

  template <class System>
  void do_step(System&& system, std::span<double> x, double t, double dt) {
    const std::size_t n = tmp_.size();
    const double half = dt / 2.0;

    system(std::span<const double>(x), std::span<double>(k1_), t);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = x[i] + half * k1_[i];
    }
    system(std::span<const double>(tmp_), std::span<double>(k2_), t + half);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = x[i] + half * k2_[i];
    }
    system(std::span<const double>(tmp_), std::span<double>(k3_), t + half);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = x[i] + dt * k3_[i];
    }
    system(std::span<const double>(tmp_), std::span<double>(k4_), t + dt);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

 private:
  std::vector<double> tmp_, k1_, k2_, k3_, k4_;
};

}  // namespace ufls

#endif  // UFLS_RUNGE_KUTTA_HPP
