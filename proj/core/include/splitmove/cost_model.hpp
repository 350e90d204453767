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

namespace splitmove {

/// Inputs of the computing-time comparison. Time is counted in limit-state
/// calls made by one core.
struct CostModel {
  double p = 1e-6;
  /// Target coefficient of variation of the estimator.
  double delta = 0.1;
  double n_c = 1.0;
  double T = 20.0;
  /// Conditional probability per level, for the splitting comparison.
  double p0 = 0.1;

  void validate() const;
};

/// Squared CV of a fixed-p0 splitting estimator with N particles per level.
double delta2_ms(double p, double p0, double n);
double delta_ms(double p, double p0, double n);

/// Naive Monte Carlo: ceil(1 / (n_c delta^2 p)).
double t_mc(const CostModel& cm);
/// Splitting with N set by the CV target:
/// N / n_c + floor(log p / log p0) T max(N (1 - p0) / n_c, 1).
double t_ms(const CostModel& cm);
/// Expected effective time of the fully parallel moving-particles estimator.
double t_par_expected(const CostModel& cm);
/// Same without the maximum-of-workers overhead (sequential parallelisation).
double t_par_sequential(const CostModel& cm);
/// p0 at which N (1 - p0) = n_c under the CV constraint; bisection to 1e-10.
double optimal_p0(const CostModel& cm);
/// -T K N log p.
double expected_total_calls(double p, double workers, double n_per_worker, double T);

}  // namespace splitmove
