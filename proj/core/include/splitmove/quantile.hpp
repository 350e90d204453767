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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitmove/event_log.hpp"
#include "splitmove/kernel.hpp"
#include "splitmove/limit_state.hpp"
#include "splitmove/probability.hpp"

namespace splitmove {

// Indexing convention: q_1 <= q_2 <= ... are the merged arrival levels,
// 1-based. Formulas taking `n_total` use the total particle count n_c * N.

/// ceil(-n_total log p), the rank of the event closest to the quantile.
std::uint64_t target_event_count(double p, double n_total);

/// Per-worker move budget of the first pass so that P(not enough events)
/// is about alpha. Needs n_c >= 2 and 0 < alpha < 1/e; otherwise throws a
/// ConfigError pointing at the safe choice ceil(-N log p).
std::uint64_t choose_m0(std::size_t n_per_worker, std::size_t n_c, double p, double alpha);
/// Location parameter b_n of the maximum of n standard normals.
double gaussian_max_location(double n);

/// (q_{M-1} + q_M) / 2 of ascending levels. M >= 2.
double estimate_q(std::span<const double> sorted_levels, std::uint64_t M);
double estimate_q(const EventLog& merged, std::uint64_t M);

struct RankInterval {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};
/// floor(m - Z sqrt(m)), ceil(m + Z sqrt(m)).
RankInterval ci_q_indices(std::uint64_t m, double alpha);

struct LevelInterval {
  double lower = 0.0;
  double upper = 0.0;
};
/// (q_{m-}, q_{m+}); throws ShortfallError when fewer than m+ events exist.
LevelInterval ci_q(std::span<const double> sorted_levels, std::uint64_t m, double alpha);
LevelInterval ci_q(const EventLog& merged, std::uint64_t m, double alpha);

struct BiasBounds {
  double lower = 0.0;
  double upper = 0.0;
};
/// O(1/N) bounds on E[q_{m+k}] - q.
BiasBounds bias_bounds(double p, double f_q, double fp_q, double n_total, int k);
/// Bounds for (q_{m-1} + q_m)/2, i.e. the average of k = -1 and k = 0.
BiasBounds estimator_bias_bounds(double p, double f_q, double fp_q, double n_total);

/// sqrt(-p^2 log p / f(q)^2 / N).
double clt_sd(double p, double f_q, double n_total);
/// Limit covariance of (q_{m+k1}, q_{m+k2}); independent of k1, k2.
double quantile_cov(double p, double f_q, double n_total, int k1, int k2);

/// q f(q) / (-p log p).
double gamma_q(double q, double p, double f_q);
/// Effective calls per core to reach CV delta on the quantile.
double t_par_quantile(double p, double delta, double q, double f_q, double n_c, double T);
/// ceil(p / (q^2 f(q)^2 delta^2 n_c)).
double t_mc_quantile(double p, double delta, double q, double f_q, double n_c);
/// -N log p + sqrt(2 N log(1/p) log n_c), per worker.
double expected_iters_two_pass(double n_per_worker, double n_c, double p);
double expected_iters_sequential(double n_per_worker, double n_c, double p);

struct QuantileDiagnostics {
  double clt_sd = 0.0;
  double bias_lower = 0.0;
  double bias_upper = 0.0;
  double gamma_q = 0.0;
  double expected_iters = 0.0;
};

struct QuantileOptions {
  std::size_t n_per_worker = 100;
  std::size_t workers = 10;
  KernelConfig kernel;
  /// Accepted risk of running short of events after the first pass.
  double alpha_risk = 0.05;
  /// Level of the rank-based confidence interval.
  double ci_alpha = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  SamplerMode mode = SamplerMode::kMcmc;
  /// Run extra moves when the first two passes did not produce m events.
  bool top_up = true;
  /// Keep moving until the interval's upper rank is available.
  bool extend_for_ci = true;
  std::optional<std::uint64_t> m0_override;
  std::size_t threads = 0;
};

struct QuantileEstimate {
  double q_hat = 0.0;
  std::uint64_t m = 0;
  std::uint64_t m0 = 0;
  double alpha_risk = 0.05;
  /// Arrivals at or below q_max after the second pass (2-pass), or at the
  /// stopping round (sequential).
  std::uint64_t events_obtained = 0;
  bool shortfall = false;
  std::uint64_t top_up_rounds = 0;
  std::optional<LevelInterval> ci;
  RankInterval ci_indices;
  double ci_alpha = 0.05;
  std::uint64_t K = 0;
  std::uint64_t N = 0;
  /// Counted moves over all workers.
  std::uint64_t total_moves = 0;
  std::uint64_t n_calls = 0;
  std::vector<std::uint64_t> per_worker_calls;
  /// Mean per-worker counted moves when the estimate became available.
  double mean_iterations = 0.0;
  std::uint64_t seed = 0;
  std::optional<QuantileDiagnostics> diagnostics;
  std::vector<std::string> warnings;

  std::uint64_t max_worker_calls() const;
};

/// First pass of m0 moves per worker, synchronisation on the largest m0-th
/// consumed level, second pass up to it, then merge. Without enough events
/// the shortfall flag is set and, if allowed, extra rounds are run.
/// Without top-up a shortfall leaves q_hat NaN.
QuantileEstimate run_quantile_two_pass(const LimitState& ls, double p,
                                       const QuantileOptions& options);
/// Lock-step rounds of one move per worker until m events lie below the
/// smallest level consumed in the round.
QuantileEstimate run_quantile_sequential(const LimitState& ls, double p,
                                         const QuantileOptions& options);

/// Uses the exact level pdf when the state has one; f'(q) by central difference.
std::optional<QuantileDiagnostics> quantile_diagnostics(const LimitState& ls, double p,
                                                        double q, std::size_t n_per_worker,
                                                        std::size_t n_c);

nlohmann::json to_json(const QuantileEstimate& e);

}  // namespace splitmove
