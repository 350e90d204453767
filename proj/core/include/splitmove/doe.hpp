// Copyright 2026 The splitmove Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splitmove/gp.hpp"
#include "splitmove/kernel.hpp"
#include "splitmove/limit_state.hpp"
#include "splitmove/random.hpp"

namespace splitmove {

/// (d + 1) + N_fail log(1/p).
double expected_doe_calls(double d, double n_fail, double p);

/// Greedy surrogate walk: T proposals from the kernel, each started at the
/// best point so far and kept only if the surrogate predicts a higher level.
/// Makes no true limit-state call.
std::vector<double> surrogate_climb(std::span<const double> x, double y, const GPModel& model,
                                    const KernelConfig& cfg, int steps, Rng& rng);

struct DoEOptions {
  std::size_t n_fail = 10;
  KernelConfig kernel;
  /// Surrogate proposals per move.
  int climb_steps = 20;
  std::uint64_t seed = 0;
  /// Per-chain cap on true calls; default 50 * ceil(log(1e12)).
  std::optional<std::size_t> move_cap;
  GpFitOptions gp;
  /// Hyperparameters are searched again once the design has grown by this
  /// factor since the last search; every other refit only re-conditions.
  double refit_growth = 1.2;
};

struct DesignPoint {
  std::vector<double> x;
  double g = 0.0;      ///< raw limit-state value
  double level = 0.0;  ///< oriented level
  bool is_failure = false;
  int chain_id = -1;   ///< -1 for the initial d + 1 points
  int move_index = 0;  ///< 0 for a chain's starting draw
};

struct DoEResult {
  std::vector<DesignPoint> design;
  std::size_t n_fail = 0;
  std::uint64_t n_calls = 0;
  /// True calls of each chain, its starting draw included.
  std::vector<std::uint64_t> per_chain_moves;
  /// Number of surrogate (re)fits; equals design size - (d + 1) + 1.
  std::size_t fit_count = 0;
  bool complete = true;
  std::string diagnostics;
  nlohmann::json hyperparameters;
};

DoEResult build_doe(const LimitState& ls, const DoEOptions& options);

/// Columns x1..xd,g,is_failure,chain_id,move_index.
void write_doe_csv(std::ostream& out, const DoEResult& result);

}  // namespace splitmove
