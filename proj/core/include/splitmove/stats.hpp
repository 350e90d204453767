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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace splitmove {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// Degrees of freedom (chi-square) or effective sample size (KS).
  double dof = 0.0;
};

/// Chi-square goodness of fit of observed counts to Poisson(lambda). Cells
/// are pooled from both tails until every expected count is at least 5.
/// Returns nullopt when fewer than two cells survive the pooling.
std::optional<TestResult> chi2_poisson_test(std::span<const std::uint64_t> counts, double lambda);

/// Asymptotic Kolmogorov distribution tail Q(x) = P(K > x).
double kolmogorov_sf(double x);

/// One-sample KS test against a continuous cdf.
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);
/// Two-sample KS test.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Linear-interpolation quantile of ascending data (R type 7).
double empirical_quantile(std::span<const double> sorted, double prob);

double sample_mean(std::span<const double> x);
/// Unbiased sample variance.
double sample_variance(std::span<const double> x);

struct ReplicationSummary {
  std::vector<double> estimates;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  /// Whiskers extend to the extreme values.
  double min = 0.0;
  double max = 0.0;
  std::vector<std::uint64_t> per_rep_calls;

  bool operator==(const ReplicationSummary&) const = default;
};

/// Quartiles and extremes; NaN estimates are left out of the statistics.
ReplicationSummary boxplot_summary(std::vector<double> estimates,
                                   std::vector<std::uint64_t> per_rep_calls = {});

}  // namespace splitmove
