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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace splitmove {

/// Which side of the threshold is the failure domain, in the function's own
/// convention. Samplers always see an oriented "level" that grows toward
/// failure: level = g for kAbove, level = -g for kBelow.
enum class FailureSide { kAbove, kBelow };

/// Integrated hazard of the level distribution: Lambda(y) = -log(1 - F(y)).
struct HazardView {
  std::function<double(double)> lambda;
  std::function<double(double)> inverse_lambda;  // may be empty
};

/// Exact law of the oriented level g(X), X ~ N(0, I).
struct LevelLaw {
  std::function<double(double)> cdf;
  std::function<double(double)> pdf;
  /// 1 - cdf, evaluated without cancellation.
  std::function<double(double)> tail;
  /// Inverse of Lambda; empty when no closed form is available.
  std::function<double(double)> inverse_lambda;

  HazardView hazard() const;
};

/// Parameters of a lognormal marginal given by its mean and coefficient of
/// variation (not by its log-scale moments).
struct LognormalSpec {
  double mean = 1.0;
  double cv = 0.0;

  double sigma_log() const;
  double mu_log() const;
  void validate() const;
};

/// Maps a standard normal coordinate to the lognormal marginal.
double std_to_lognormal(double u, const LognormalSpec& spec);

/// A performance function g on R^d with standard Gaussian inputs.
///
/// Evaluations are counted; the counter tolerates concurrent callers and the
/// function itself must be reentrant.
class LimitState {
 public:
  using Function = std::function<double(std::span<const double>)>;

  LimitState(std::string name, std::size_t dim, Function g, FailureSide side,
             double threshold);

  LimitState(const LimitState& other);
  LimitState& operator=(const LimitState& other);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  FailureSide side() const { return side_; }

  /// Failure threshold in the function's own convention.
  double threshold() const { return threshold_; }
  /// Failure threshold on the oriented level scale.
  double level_threshold() const { return orient(threshold_); }
  LimitState with_threshold(double threshold) const;

  /// g(x), counted. Throws InvalidArgument on dimension mismatch and
  /// EvaluationError on a non-finite result.
  double eval(std::span<const double> x) const;
  /// Oriented level of x, counted.
  double level(std::span<const double> x) const { return orient(eval(x)); }

  double orient(double g) const { return side_ == FailureSide::kAbove ? g : -g; }
  bool is_failure_level(double level) const { return level > level_threshold(); }

  std::uint64_t call_count() const { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() { calls_.store(0, std::memory_order_relaxed); }

  /// Exact law of the oriented level, if known.
  const std::optional<LevelLaw>& law() const { return law_; }
  void set_law(LevelLaw law) { law_ = std::move(law); }
  std::optional<HazardView> hazard() const;

  /// Best available reference failure probability at the current threshold.
  std::optional<double> reference_probability() const;
  void set_reference_probability(double p) { reference_p_ = p; }

 private:
  std::string name_;
  std::size_t dim_;
  Function g_;
  FailureSide side_;
  double threshold_;
  std::optional<LevelLaw> law_;
  std::optional<double> reference_p_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

}  // namespace splitmove
