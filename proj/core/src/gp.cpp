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

#include "splitmove/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <ceres/ceres.h>

#include "splitmove/error.hpp"
#include "splitmove/random.hpp"

namespace splitmove {

namespace {

constexpr double kMaxNugget = 1e-4;

Eigen::MatrixXd correlation(const Eigen::MatrixXd& x, const Eigen::VectorXd& inv_l2) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d2 = ((x.row(i) - x.row(j)).array().square() * inv_l2.transpose().array()).sum();
      r(i, j) = r(j, i) = std::exp(-0.5 * d2);
    }
  }
  return r;
}

bool all_equal_to(const Eigen::VectorXd& y, double trend) {
  const double tol = 1e-14 * std::max(1.0, std::abs(trend));
  return ((y.array() - trend).abs() <= tol).all();
}

Eigen::VectorXd input_ranges(const Eigen::MatrixXd& x) {
  Eigen::VectorXd r = x.colwise().maxCoeff() - x.colwise().minCoeff();
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (!(r(k) > 0.0)) r(k) = 1.0;
  }
  return r;
}

// Negative concentrated log-likelihood over unconstrained z, with
// log l_k = lo_k + (hi_k - lo_k) sigmoid(z_k).
class NegLogLik final : public ceres::FirstOrderFunction {
 public:
  NegLogLik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double trend, double nugget,
            Eigen::VectorXd lo, Eigen::VectorXd hi)
      : x_(x), y_(y), trend_(trend), nugget_(nugget), lo_(std::move(lo)), hi_(std::move(hi)) {}

  Eigen::VectorXd to_log_scales(const double* z) const {
    Eigen::VectorXd t(lo_.size());
    for (Eigen::Index k = 0; k < t.size(); ++k) {
      t(k) = lo_(k) + (hi_(k) - lo_(k)) / (1.0 + std::exp(-z[k]));
    }
    return t;
  }

  double to_z(Eigen::Index k, double log_scale) const {
    const double s = std::clamp((log_scale - lo_(k)) / (hi_(k) - lo_(k)), 1e-6, 1.0 - 1e-6);
    return std::log(s / (1.0 - s));
  }

  bool Evaluate(const double* z, double* cost, double* gradient) const override {
    const Eigen::VectorXd t = to_log_scales(z);
    Eigen::VectorXd g;
    const auto ll = concentrated_log_likelihood(x_, y_, trend_, t, nugget_,
                                                gradient != nullptr ? &g : nullptr);
    if (!ll || !std::isfinite(*ll)) return false;
    *cost = -*ll;
    if (gradient != nullptr) {
      for (Eigen::Index k = 0; k < t.size(); ++k) {
        const double s = 1.0 / (1.0 + std::exp(-z[k]));
        gradient[k] = -g(k) * (hi_(k) - lo_(k)) * s * (1.0 - s);
      }
    }
    return true;
  }

  int NumParameters() const override { return static_cast<int>(lo_.size()); }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  double trend_;
  double nugget_;
  Eigen::VectorXd lo_, hi_;
};

}  // namespace

std::optional<double> concentrated_log_likelihood(const Eigen::MatrixXd& points,
                                                  const Eigen::VectorXd& values, double trend,
                                                  const Eigen::VectorXd& log_scales,
                                                  double nugget, Eigen::VectorXd* gradient) {
  const Eigen::Index n = points.rows();
  const Eigen::VectorXd inv_l2 = (-2.0 * log_scales.array()).exp().matrix();
  Eigen::MatrixXd r = correlation(points, inv_l2);
  r.diagonal().array() += nugget;
  const Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) return std::nullopt;

  const Eigen::VectorXd res = values.array() - trend;
  const Eigen::VectorXd a = llt.solve(res);
  const double s2 = res.dot(a) / static_cast<double>(n);
  if (!(s2 > 0.0)) return std::nullopt;
  const Eigen::MatrixXd& lmat = llt.matrixLLT();
  const double logdet = 2.0 * lmat.diagonal().array().log().sum();
  const double ll = -0.5 * static_cast<double>(n) * std::log(s2) - 0.5 * logdet;

  if (gradient != nullptr) {
    // W = a a^T / s2 - R^{-1}; dL/dlog l_k = 1/2 sum_ij W_ij C_ij D^k_ij,
    // with C the correlation without nugget and D^k_ij = (dx_k)^2 / l_k^2.
    Eigen::MatrixXd w = -llt.solve(Eigen::MatrixXd::Identity(n, n));
    w.noalias() += a * a.transpose() / s2;
    r.diagonal().array() -= nugget;
    const Eigen::MatrixXd wc = w.cwiseProduct(r);
    const Eigen::VectorXd row_sums = wc.rowwise().sum();
    const Eigen::MatrixXd wcx = wc * points;
    gradient->resize(points.cols());
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
      const auto xk = points.col(k);
      const double sum = xk.array().square().matrix().dot(row_sums) - xk.dot(wcx.col(k));
      (*gradient)(k) = inv_l2(k) * sum;
    }
  }
  return ll;
}

GPModel GPModel::condition(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                           double trend, const Eigen::VectorXd& length_scales, double nugget) {
  if (points.rows() != values.size() || points.rows() == 0) {
    throw InvalidArgument("GP: points and values disagree in size");
  }
  if (length_scales.size() != points.cols() || !(length_scales.array() > 0.0).all()) {
    throw InvalidArgument("GP: need one positive length scale per input");
  }
  GPModel m;
  m.points_ = points;
  m.values_ = values;
  m.trend_ = trend;
  m.length_scales_ = length_scales;

  const Eigen::VectorXd inv_l2 = length_scales.array().square().inverse().matrix();
  const Eigen::MatrixXd r0 = correlation(points, inv_l2);
  for (double nu = nugget; nu <= kMaxNugget * (1.0 + 1e-12); nu *= 10.0) {
    Eigen::MatrixXd r = r0;
    r.diagonal().array() += nu;
    m.chol_.compute(r);
    if (m.chol_.info() == Eigen::Success) {
      m.nugget_ = nu;
      const Eigen::VectorXd res = values.array() - trend;
      m.weights_ = m.chol_.solve(res);
      const double n = static_cast<double>(values.size());
      const double s2 = std::max(0.0, res.dot(m.weights_) / n);
      m.process_sd_ = std::sqrt(s2);
      const double logdet = 2.0 * m.chol_.matrixLLT().diagonal().array().log().sum();
      m.log_likelihood_ =
          s2 > 0.0 ? -0.5 * n * std::log(s2) - 0.5 * logdet : std::numeric_limits<double>::infinity();
      return m;
    }
    if (nu == 0.0) nu = 1e-12;
  }
  throw NumericalError("GP: correlation matrix not positive definite up to nugget " +
                       std::to_string(kMaxNugget) + " (" + std::to_string(points.rows()) +
                       " points; duplicates?)");
}

GPModel GPModel::fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values, double trend,
                     const GpFitOptions& options) {
  const Eigen::Index n = points.rows(), d = points.cols();
  if (n < d + 1) {
    throw InvalidArgument("GP fit needs at least d + 1 = " + std::to_string(d + 1) + " points");
  }
  const Eigen::VectorXd range = input_ranges(points);
  if (all_equal_to(values, trend)) return condition(points, values, trend, range, options.nugget);

  const Eigen::VectorXd lo = (1e-2 * range).array().log().matrix();
  const Eigen::VectorXd hi = (1e2 * range).array().log().matrix();
  auto* fn = new NegLogLik(points, values, trend, options.nugget, lo, hi);
  ceres::GradientProblem problem(fn);
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = options.max_iterations;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;

  // The isotropic start at the input range is always tried.
  std::vector<Eigen::VectorXd> starts{range.array().log().matrix()};
  if (options.warm_start && static_cast<Eigen::Index>(options.warm_start->size()) == d) {
    starts.push_back(Eigen::Map<const Eigen::VectorXd>(options.warm_start->data(), d)
                         .array()
                         .log()
                         .matrix());
  }
  Rng rng = derive_stream(options.seed, 0x6770ULL);
  for (int s = 0; s < options.restarts; ++s) {
    Eigen::VectorXd t(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      t(k) = std::log(range(k)) + std::log(1e-2) + uniform01(rng) * std::log(1e3);
    }
    starts.push_back(t);
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_t = range.array().log().matrix();
  for (const auto& t0 : starts) {
    std::vector<double> z(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = fn->to_z(k, t0(k));
    double c0 = 0.0;
    if (!fn->Evaluate(z.data(), &c0, nullptr)) continue;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, z.data(), &summary);
    double c = 0.0;
    if (fn->Evaluate(z.data(), &c, nullptr) && c < best) {
      best = c;
      best_t = fn->to_log_scales(z.data());
    }
  }
  return condition(points, values, trend, best_t.array().exp().matrix(), options.nugget);
}

double GPModel::predict(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidArgument("GP predict: wrong dimension");
  const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::RowVectorXd inv_l2 = length_scales_.array().square().inverse().matrix().transpose();
  double s = trend_;
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    const double d2 = ((points_.row(i) - xv).array().square() * inv_l2.array()).sum();
    s += std::exp(-0.5 * d2) * weights_(i);
  }
  return s;
}

double GPModel::predict_variance(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidArgument("GP predict: wrong dimension");
  const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::RowVectorXd inv_l2 = length_scales_.array().square().inverse().matrix().transpose();
  Eigen::VectorXd k(points_.rows());
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    k(i) = std::exp(-0.5 * ((points_.row(i) - xv).array().square() * inv_l2.array()).sum());
  }
  const double reduction = k.dot(chol_.solve(k));
  return std::max(0.0, process_sd_ * process_sd_ * (1.0 - reduction));
}

nlohmann::json GPModel::hyperparameters_json() const {
  std::vector<double> scales(length_scales_.data(), length_scales_.data() + length_scales_.size());
  return {{"trend", trend_},
          {"length_scales", scales},
          {"process_sd", process_sd_},
          {"nugget", nugget_},
          {"log_likelihood", std::isfinite(log_likelihood_) ? nlohmann::json(log_likelihood_)
                                                           : nlohmann::json()},
          {"n_points", size()}};
}

}  // namespace splitmove
