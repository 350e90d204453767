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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitmove/kernel.hpp"
#include "splitmove/limit_state.hpp"

namespace splitmove {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// (1 - 1/(K N))^M, evaluated in log space.
double estimate_p(std::uint64_t total_moves, std::uint64_t workers, std::uint64_t n_per_worker);

/// p^2 (p^{-1/N} - 1) for N particles in total.
double variance_p(double p, double n_total);
/// -p^2 log p / N.
double cramer_rao_bound(double p, double n_total);

/// Asymptotic (1 - alpha) interval p_hat exp(-Z^2/2N -+ sqrt(Delta)).
ConfidenceInterval ci_p(double p_hat, double n_total, double alpha);

enum class SamplerMode { kMcmc, kIdeal };

struct ProbabilityOptions {
  std::size_t n_per_worker = 100;
  std::size_t workers = 10;
  KernelConfig kernel;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  SamplerMode mode = SamplerMode::kMcmc;
  /// Lowest particles moved together inside each worker.
  std::size_t k_batch = 1;
  /// Worker threads; 0 = hardware concurrency.
  std::size_t threads = 0;
};

struct ProbEstimate {
  double p_hat = 1.0;
  std::uint64_t M = 0;
  std::uint64_t K = 0;
  std::uint64_t N = 0;
  double alpha = 0.05;
  ConfidenceInterval ci;
  std::uint64_t n_calls = 0;
  std::vector<std::uint64_t> per_worker_calls;
  std::vector<std::uint64_t> per_worker_moves;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  std::uint64_t max_worker_calls() const;
};

/// Launches the workers to the failure threshold, sums their moves and
/// applies estimate_p with K = workers.
ProbEstimate run_probability(const LimitState& ls, const ProbabilityOptions& options);

nlohmann::json to_json(const ProbEstimate& e);
ProbEstimate prob_estimate_from_json(const nlohmann::json& j);

}  // namespace splitmove
