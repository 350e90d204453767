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

#include "splitmove/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "splitmove/error.hpp"

namespace splitmove {

std::optional<TestResult> chi2_poisson_test(std::span<const std::uint64_t> counts, double lambda) {
  if (!(lambda > 0.0)) return std::nullopt;
  const double n = static_cast<double>(counts.size());
  // Two bins of expected count 5 are the minimum.
  if (n < 10.0) return std::nullopt;
  const boost::math::poisson_distribution<double> pois(lambda);
  const std::uint64_t top = *std::max_element(counts.begin(), counts.end());

  // Left edge: first k with n P(X <= k) >= 5. Right edge: last k with
  // n P(X >= k) >= 5.
  std::uint64_t lo = 0;
  while (n * boost::math::cdf(pois, static_cast<double>(lo)) < 5.0) ++lo;
  std::uint64_t hi = static_cast<std::uint64_t>(std::ceil(lambda));
  while (hi > 0 && n * boost::math::cdf(boost::math::complement(pois, static_cast<double>(hi) - 1.0)) < 5.0) --hi;
  while (n * boost::math::cdf(boost::math::complement(pois, static_cast<double>(hi))) >= 5.0) ++hi;
  if (hi <= lo) return std::nullopt;

  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<std::uint64_t> hist(std::max(top, hi) + 1, 0);
  for (auto c : counts) ++hist[c];

  std::vector<Bin> bins;
  Bin first;
  first.expected = n * boost::math::cdf(pois, static_cast<double>(lo));
  for (std::uint64_t k = 0; k <= lo; ++k) first.observed += static_cast<double>(hist[k]);
  bins.push_back(first);

  Bin acc;
  for (std::uint64_t k = lo + 1; k < hi; ++k) {
    acc.expected += n * boost::math::pdf(pois, static_cast<double>(k));
    acc.observed += static_cast<double>(hist[k]);
    if (acc.expected >= 5.0) {
      bins.push_back(acc);
      acc = {};
    }
  }
  Bin last = acc;
  last.expected += n * boost::math::cdf(boost::math::complement(pois, static_cast<double>(hi) - 1.0));
  for (std::uint64_t k = hi; k < hist.size(); ++k) last.observed += static_cast<double>(hist[k]);
  bins.push_back(last);
  if (bins.size() < 2) return std::nullopt;

  double chi2 = 0.0;
  for (const auto& b : bins) chi2 += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  const double dof = static_cast<double>(bins.size() - 1);
  return TestResult{chi2, boost::math::gamma_q(0.5 * dof, 0.5 * chi2), dof};
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double k = 2.0 * j - 1.0;
      s += std::exp(-k * k * pi2 / (8.0 * x * x));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_sf((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("ks_test: no samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n), n};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double n_eff = n * m / (n + m);
  return {d, ks_p_value(d, n_eff), n_eff};
}

double empirical_quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) return std::nan("");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(prob, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) return std::nan("");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return std::nan("");
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

ReplicationSummary boxplot_summary(std::vector<double> estimates,
                                   std::vector<std::uint64_t> per_rep_calls) {
  ReplicationSummary s;
  std::vector<double> v;
  for (double e : estimates) {
    if (!std::isnan(e)) v.push_back(e);
  }
  std::sort(v.begin(), v.end());
  s.estimates = std::move(estimates);
  s.per_rep_calls = std::move(per_rep_calls);
  s.q1 = empirical_quantile(v, 0.25);
  s.median = empirical_quantile(v, 0.5);
  s.q3 = empirical_quantile(v, 0.75);
  s.min = v.empty() ? std::nan("") : v.front();
  s.max = v.empty() ? std::nan("") : v.back();
  return s;
}

}  // namespace splitmove
