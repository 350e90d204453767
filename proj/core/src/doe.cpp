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

#include "splitmove/doe.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "splitmove/error.hpp"

namespace splitmove {

double expected_doe_calls(double d, double n_fail, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("expected_doe_calls: p outside (0, 1)");
  return (d + 1.0) + n_fail * std::log(1.0 / p);
}

std::vector<double> surrogate_climb(std::span<const double> x, double y, const GPModel& model,
                                    const KernelConfig& cfg, int steps, Rng& rng) {
  std::vector<double> best(x.begin(), x.end());
  std::vector<double> w(x.size()), cand(x.size());
  const double scale = 1.0 / std::sqrt(1.0 + cfg.sigma * cfg.sigma);
  for (int t = 0; t < steps; ++t) {
    fill_standard_normal(rng, w);
    if (cfg.kind == KernelKind::kDirectGaussian) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = (best[i] + cfg.sigma * w[i]) * scale;
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = best[i] + cfg.sigma * w[i];
      const double log_ratio = standard_normal_log_density(cand) - standard_normal_log_density(best);
      if (!(uniform01(rng) < std::exp(log_ratio))) continue;
    }
    const double pred = model.predict(cand);
    if (pred > y) {
      y = pred;
      best = cand;
    }
  }
  return best;
}

namespace {

// Number of climbs in a row allowed to return their starting point before
// the point is evaluated anyway.
constexpr int kMaxIdleClimbs = 100;

class Surrogate {
 public:
  Surrogate(std::size_t dim, double trend, const DoEOptions& o) : dim_(dim), trend_(trend), o_(o) {}

  void add(const std::vector<double>& x, double level) {
    xs_.push_back(x);
    ys_.push_back(level);
  }

  void refit() {
    const auto n = static_cast<Eigen::Index>(xs_.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(dim_));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = xs_[i][k];
      y(i) = ys_[i];
    }
    const bool search = !model_ || static_cast<double>(n) >= o_.refit_growth * last_search_size_;
    if (search) {
      GpFitOptions fo = o_.gp;
      fo.seed = o_.seed + static_cast<std::uint64_t>(n);
      if (model_) {
        const auto& l = model_->length_scales();
        fo.warm_start = std::vector<double>(l.data(), l.data() + l.size());
        fo.restarts = std::min(fo.restarts, 2);
      }
      model_ = GPModel::fit(x, y, trend_, fo);
      last_search_size_ = static_cast<double>(n);
    } else {
      model_ = GPModel::condition(x, y, trend_, model_->length_scales(), o_.gp.nugget);
    }
    ++fits_;
  }

  const GPModel& model() const { return *model_; }
  std::size_t fits() const { return fits_; }

 private:
  std::size_t dim_;
  double trend_;
  const DoEOptions& o_;
  std::vector<std::vector<double>> xs_;
  std::vector<double> ys_;
  std::optional<GPModel> model_;
  double last_search_size_ = 0.0;
  std::size_t fits_ = 0;
};

}  // namespace

DoEResult build_doe(const LimitState& ls, const DoEOptions& o) {
  if (o.n_fail < 1) throw ConfigError("DoE needs n_fail >= 1");
  if (o.climb_steps < 1) throw ConfigError("DoE needs at least one surrogate step per move");
  o.kernel.validate();
  const std::size_t d = ls.dim();
  const double q = ls.level_threshold();
  const std::size_t cap =
      o.move_cap.value_or(50 * static_cast<std::size_t>(std::ceil(std::log(1e12))));

  DoEResult r;
  Rng rng = derive_stream(o.seed, 0x646f65ULL);
  Surrogate sur(d, q, o);
  const std::uint64_t calls0 = ls.call_count();

  auto evaluate = [&](const std::vector<double>& x, int chain, int move) {
    const double g = ls.eval(x);
    DesignPoint p{x, g, ls.orient(g), false, chain, move};
    p.is_failure = ls.is_failure_level(p.level);
    r.design.push_back(p);
    sur.add(x, p.level);
    return p.level;
  };

  std::vector<double> x(d);
  for (std::size_t i = 0; i <= d; ++i) {
    fill_standard_normal(rng, x);
    evaluate(x, -1, 0);
  }
  sur.refit();

  for (std::size_t c = 0; c < o.n_fail && r.complete; ++c) {
    const int chain = static_cast<int>(c);
    fill_standard_normal(rng, x);
    double y = evaluate(x, chain, 0);
    sur.refit();
    std::uint64_t calls = 1;
    int move = 0;
    int idle = 0;
    while (!ls.is_failure_level(y)) {
      if (calls >= cap) {
        r.complete = false;
        r.diagnostics = "chain " + std::to_string(c) + " hit the move cap of " +
                        std::to_string(cap) + " true calls at level " + std::to_string(y) +
                        " (threshold " + std::to_string(q) + ")";
        break;
      }
      std::vector<double> cand = surrogate_climb(x, y, sur.model(), o.kernel, o.climb_steps, rng);
      if (cand == x && ++idle < kMaxIdleClimbs) continue;
      idle = 0;
      const double y_new = evaluate(cand, chain, ++move);
      sur.refit();
      ++calls;
      if (y_new >= y) {
        x = std::move(cand);
        y = y_new;
      }
    }
    r.per_chain_moves.push_back(calls);
  }

  for (const auto& p : r.design) r.n_fail += p.is_failure;
  r.n_calls = ls.call_count() - calls0;
  r.fit_count = sur.fits();
  r.hyperparameters = sur.model().hyperparameters_json();
  return r;
}

void write_doe_csv(std::ostream& out, const DoEResult& result) {
  const std::size_t d = result.design.empty() ? 0 : result.design.front().x.size();
  for (std::size_t k = 0; k < d; ++k) out << 'x' << (k + 1) << ',';
  out << "g,is_failure,chain_id,move_index\n";
  char buf[64];
  for (const auto& p : result.design) {
    for (double v : p.x) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", p.g);
    out << buf << ',' << (p.is_failure ? 1 : 0) << ',' << p.chain_id << ',' << p.move_index
        << '\n';
  }
}

}  // namespace splitmove
