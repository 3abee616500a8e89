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

#ifndef UFLS_UFLS_HPP
#define UFLS_UFLS_HPP

#include "ufls/charfun_io.hpp"
#include "ufls/coalition_game.hpp"
#include "ufls/error.hpp"
#include "ufls/frequency_dynamics.hpp"
#include "ufls/grid_model.hpp"
#include "ufls/runge_kutta.hpp"
#include "ufls/scenario.hpp"
#include "ufls/ufls_planner.hpp"

#endif  // UFLS_UFLS_HPP
