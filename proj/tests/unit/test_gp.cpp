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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "splitmove/error.hpp"
#include "splitmove/gp.hpp"
#include "splitmove/random.hpp"
#include "splitmove/stats.hpp"

namespace sm = splitmove;

namespace {

Eigen::MatrixXd uniform_design(int n, int d, sm::Rng& rng, double lo = -2, double hi = 2) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) x(i, k) = lo + (hi - lo) * sm::uniform01(rng);
  }
  return x;
}

// One draw of a zero-mean GP with the given scales at the rows of x.
Eigen::VectorXd sample_gp(const Eigen::MatrixXd& x, const Eigen::VectorXd& scales, double sd,
                          sm::Rng& rng) {
  const auto n = x.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d2 = ((x.row(i) - x.row(j)).array() / scales.transpose().array()).square().sum();
      c(i, j) = sd * sd * std::exp(-0.5 * d2);
    }
    c(i, i) += 1e-10;
  }
  Eigen::VectorXd z(n);
  sm::fill_standard_normal(rng, std::span<double>(z.data(), static_cast<std::size_t>(n)));
  return c.llt().matrixL() * z;
}

std::span<const double> row(const Eigen::MatrixXd& x, Eigen::Index i, std::vector<double>& buf) {
  buf.assign(x.cols(), 0.0);
  for (Eigen::Index k = 0; k < x.cols(); ++k) buf[static_cast<std::size_t>(k)] = x(i, k);
  return buf;
}

}  // namespace

TEST(Gp, InterpolatesTrainingPoints) {
  auto rng = sm::derive_stream(1, 0, 0);
  const auto x = uniform_design(25, 2, rng);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) y(i) = std::sin(x(i, 0)) + x(i, 1) * x(i, 1);
  const auto m = sm::GPModel::fit(x, y, 0.5);
  std::vector<double> buf;
  for (int i = 0; i < 25; ++i) {
    EXPECT_NEAR(m.predict(row(x, i, buf)), y(i), 1e-3 * m.process_sd());
    EXPECT_LT(m.predict_variance(row(x, i, buf)), 1e-4 * m.process_sd() * m.process_sd());
  }
  EXPECT_EQ(m.trend(), 0.5);
  EXPECT_EQ(m.size(), 25u);
  EXPECT_EQ(m.dim(), 2u);
}

TEST(Gp, ConstantResponseEqualToTrend) {
  auto rng = sm::derive_stream(2, 0, 0);
  const auto x = uniform_design(6, 2, rng);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 3.0);
  const auto m = sm::GPModel::fit(x, y, 3.0);
  EXPECT_DOUBLE_EQ(m.process_sd(), 0.0);
  const std::vector<double> far{40.0, -40.0};
  EXPECT_DOUBLE_EQ(m.predict(far), 3.0);
  const std::vector<double> mid{0.1, 0.1};
  EXPECT_NEAR(m.predict(mid), 3.0, 1e-12);
}

TEST(Gp, FarFieldRevertsToTrend) {
  auto rng = sm::derive_stream(3, 0, 0);
  const auto x = uniform_design(10, 2, rng);
  Eigen::VectorXd y = x.col(0);
  const auto m = sm::GPModel::fit(x, y, -7.0);
  const std::vector<double> far{1e3, 1e3};
  EXPECT_NEAR(m.predict(far), -7.0, 1e-9);
}

TEST(Gp, NeedsEnoughPoints) {
  auto rng = sm::derive_stream(4, 0, 0);
  const auto x = uniform_design(3, 3, rng);
  EXPECT_THROW(sm::GPModel::fit(x, Eigen::VectorXd::Zero(3), 1.0), sm::InvalidArgument);
}

TEST(Gp, DuplicatePointsEscalateNugget) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 0.0, 1.0;
  Eigen::VectorXd y(3);
  y << 1.0, 1.0, 2.0;
  const auto m = sm::GPModel::condition(x, y, 0.0, Eigen::VectorXd::Constant(1, 1.0), 0.0);
  EXPECT_GT(m.nugget(), 0.0);
  EXPECT_LE(m.nugget(), 1e-4);
}

TEST(Gp, LikelihoodGradientMatchesFiniteDifferences) {
  auto rng = sm::derive_stream(5, 0, 0);
  const auto x = uniform_design(15, 3, rng);
  Eigen::VectorXd y(15);
  for (int i = 0; i < 15; ++i) y(i) = x(i, 0) - x(i, 1) * x(i, 2);
  Eigen::VectorXd t(3);
  t << 0.2, -0.1, 0.4;
  Eigen::VectorXd g;
  const auto ll = sm::concentrated_log_likelihood(x, y, 0.3, t, 1e-8, &g);
  ASSERT_TRUE(ll.has_value());
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd tp = t, tm = t;
    const double h = 1e-5;
    tp(k) += h;
    tm(k) -= h;
    const double fd = (*sm::concentrated_log_likelihood(x, y, 0.3, tp, 1e-8, nullptr) -
                       *sm::concentrated_log_likelihood(x, y, 0.3, tm, 1e-8, nullptr)) /
                      (2 * h);
    EXPECT_NEAR(g(k), fd, 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Gp, RecoversKnownScales) {
  Eigen::VectorXd truth(2);
  truth << 0.8, 2.0;
  Eigen::VectorXd err = Eigen::VectorXd::Zero(2);
  constexpr int draws = 10;
  for (int r = 0; r < draws; ++r) {
    auto rng = sm::derive_stream(6, r, 0);
    const auto x = uniform_design(30, 2, rng);
    const Eigen::VectorXd y = sample_gp(x, truth, 1.5, rng);
    sm::GpFitOptions o;
    o.seed = r;
    const auto m = sm::GPModel::fit(x, y, 0.0, o);
    err += (m.length_scales().array().log() - truth.array().log()).matrix();
  }
  err /= draws;
  EXPECT_LT(std::abs(err(0)), 0.5);
  EXPECT_LT(std::abs(err(1)), 0.5);
}

TEST(Gp, WarmStartReachesSameOptimum) {
  auto rng = sm::derive_stream(7, 0, 0);
  const auto x = uniform_design(20, 2, rng);
  Eigen::VectorXd scales(2);
  scales << 1.0, 0.6;
  const Eigen::VectorXd y = sample_gp(x, scales, 1.0, rng);
  const auto cold = sm::GPModel::fit(x, y, 0.0);
  sm::GpFitOptions o;
  o.restarts = 0;
  o.warm_start = std::vector<double>(cold.length_scales().data(), cold.length_scales().data() + 2);
  const auto warm = sm::GPModel::fit(x, y, 0.0, o);
  EXPECT_NEAR(warm.log_likelihood(), cold.log_likelihood(), 1e-6 * std::abs(cold.log_likelihood()));
}

TEST(Gp, HyperparametersJson) {
  auto rng = sm::derive_stream(8, 0, 0);
  const auto x = uniform_design(8, 2, rng);
  const Eigen::VectorXd y = x.col(1);
  const auto j = sm::GPModel::fit(x, y, 0.0).hyperparameters_json();
  EXPECT_EQ(j.at("length_scales").size(), 2u);
  EXPECT_EQ(j.at("n_points").get<std::size_t>(), 8u);
  EXPECT_DOUBLE_EQ(j.at("trend").get<double>(), 0.0);
}
