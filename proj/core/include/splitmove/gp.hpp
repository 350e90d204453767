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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace splitmove {

struct GpFitOptions {
  /// Random starting points of the likelihood search, in addition to the
  /// warm start when one is given.
  int restarts = 8;
  double nugget = 1e-8;
  int max_iterations = 100;
  /// Previous length scales to start from.
  std::optional<std::vector<double>> warm_start;
  std::uint64_t seed = 0;
};

/// Simple kriging with a known constant trend and an anisotropic
/// squared-exponential covariance sd^2 exp(-sum_k (dx_k / l_k)^2 / 2).
class GPModel {
 public:
  /// Maximum-likelihood length scales with the trend held fixed; the process
  /// variance is profiled out. Needs at least d + 1 points.
  static GPModel fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values, double trend,
                     const GpFitOptions& options = {});

  /// Conditions on the data with given length scales (no likelihood search).
  /// The nugget is escalated up to 1e-4 if the correlation matrix is not
  /// numerically positive definite; NumericalError beyond that.
  static GPModel condition(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                           double trend, const Eigen::VectorXd& length_scales,
                           double nugget = 1e-8);

  double predict(std::span<const double> x) const;
  double predict_variance(std::span<const double> x) const;

  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  double trend() const { return trend_; }
  const Eigen::VectorXd& length_scales() const { return length_scales_; }
  double process_sd() const { return process_sd_; }
  double nugget() const { return nugget_; }
  double log_likelihood() const { return log_likelihood_; }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& values() const { return values_; }

  nlohmann::json hyperparameters_json() const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd values_;
  double trend_ = 0.0;
  Eigen::VectorXd length_scales_;
  double process_sd_ = 0.0;
  double nugget_ = 1e-8;
  double log_likelihood_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd weights_;  // R^{-1} (y - trend)
};

/// Concentrated log-likelihood of the residuals about `trend` as a function
/// of log length scales, with its gradient when `gradient` is non-null.
/// Returns nullopt when the correlation matrix cannot be factorised.
std::optional<double> concentrated_log_likelihood(const Eigen::MatrixXd& points,
                                                  const Eigen::VectorXd& values, double trend,
                                                  const Eigen::VectorXd& log_scales,
                                                  double nugget, Eigen::VectorXd* gradient);

}  // namespace splitmove
