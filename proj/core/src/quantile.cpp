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

#include "splitmove/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include "splitmove/error.hpp"
#include "splitmove/mover.hpp"
#include "splitmove/special.hpp"
#include "splitmove/workers.hpp"

namespace splitmove {

std::uint64_t target_event_count(double p, double n_total) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("target probability must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(-n_total * std::log(p)));
}

double gaussian_max_location(double n) {
  const double s = std::sqrt(2.0 * std::log(n));
  return s - (std::log(std::log(n)) + std::log(4.0 * std::numbers::pi)) / (2.0 * s);
}

std::uint64_t choose_m0(std::size_t n_per_worker, std::size_t n_c, double p, double alpha) {
  const std::uint64_t fallback = target_event_count(p, static_cast<double>(n_per_worker));
  if (n_c < 2) {
    throw ConfigError("choose_m0 needs at least 2 workers; use m0 = ceil(-N log p) = " +
                      std::to_string(fallback));
  }
  if (!(alpha > 0.0 && alpha < std::exp(-1.0))) {
    throw ConfigError("choose_m0 needs 0 < alpha < 1/e; use m0 = ceil(-N log p) = " +
                      std::to_string(fallback));
  }
  const double nt = -static_cast<double>(n_per_worker) * std::log(p);
  const double nc = static_cast<double>(n_c);
  const double beta = gaussian_max_location(nc) -
                      std::log(std::log(1.0 / alpha)) / std::sqrt(2.0 * std::log(nc));
  const double delta = beta * beta + 4.0 * nt;
  const double m0 = nt + 0.5 * beta * beta - 0.5 * beta * std::sqrt(delta);
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(m0)));
}

double estimate_q(std::span<const double> sorted_levels, std::uint64_t M) {
  if (M < 2) throw InvalidArgument("estimate_q needs M >= 2");
  if (sorted_levels.size() < M) {
    throw ShortfallError("estimate_q: " + std::to_string(sorted_levels.size()) +
                         " events, need " + std::to_string(M));
  }
  return 0.5 * (sorted_levels[M - 2] + sorted_levels[M - 1]);
}

double estimate_q(const EventLog& merged, std::uint64_t M) {
  const auto levels = merged.arrival_levels();
  return estimate_q(levels, M);
}

RankInterval ci_q_indices(std::uint64_t m, double alpha) {
  const double z = two_sided_z(alpha);
  const double half = z * std::sqrt(static_cast<double>(m));
  const double lo = std::floor(static_cast<double>(m) - half);
  return {static_cast<std::uint64_t>(std::max(1.0, lo)),
          static_cast<std::uint64_t>(std::ceil(static_cast<double>(m) + half))};
}

LevelInterval ci_q(std::span<const double> sorted_levels, std::uint64_t m, double alpha) {
  const RankInterval r = ci_q_indices(m, alpha);
  if (sorted_levels.size() < r.upper) {
    throw ShortfallError("ci_q: need " + std::to_string(r.upper) + " events, have " +
                         std::to_string(sorted_levels.size()) + "; extend the run");
  }
  return {sorted_levels[r.lower - 1], sorted_levels[r.upper - 1]};
}

LevelInterval ci_q(const EventLog& merged, std::uint64_t m, double alpha) {
  const auto levels = merged.arrival_levels();
  return ci_q(levels, m, alpha);
}

BiasBounds bias_bounds(double p, double f_q, double fp_q, double n_total, int k) {
  if (!(f_q > 0.0)) throw InvalidArgument("bias bounds need f(q) > 0");
  const double a = -0.5 * std::log(p) * (1.0 + fp_q * p / (f_q * f_q));
  const double scale = p / (n_total * f_q);
  return {scale * (a + k), scale * (a + k + 1)};
}

BiasBounds estimator_bias_bounds(double p, double f_q, double fp_q, double n_total) {
  const BiasBounds lo = bias_bounds(p, f_q, fp_q, n_total, -1);
  const BiasBounds hi = bias_bounds(p, f_q, fp_q, n_total, 0);
  return {0.5 * (lo.lower + hi.lower), 0.5 * (lo.upper + hi.upper)};
}

double clt_sd(double p, double f_q, double n_total) {
  return std::sqrt(quantile_cov(p, f_q, n_total, 0, 0));
}

double quantile_cov(double p, double f_q, double n_total, int, int) {
  if (!(f_q > 0.0)) throw InvalidArgument("quantile CLT needs f(q) > 0");
  return -p * p * std::log(p) / (f_q * f_q) / n_total;
}

double gamma_q(double q, double p, double f_q) { return q * f_q / (-p * std::log(p)); }

double t_par_quantile(double p, double delta, double q, double f_q, double n_c, double T) {
  const double lead = p * std::log(p) / (delta * q * f_q);
  return T / n_c * lead * lead *
         (1.0 + 1.0 / (T * std::log(1.0 / p)) +
          delta * gamma_q(q, p, f_q) * std::sqrt(2.0 * n_c * std::log(n_c)));
}

double t_mc_quantile(double p, double delta, double q, double f_q, double n_c) {
  return std::ceil(p / (q * q * f_q * f_q * delta * delta * n_c));
}

double expected_iters_two_pass(double n_per_worker, double n_c, double p) {
  const double nt = -n_per_worker * std::log(p);
  return nt + std::sqrt(2.0 * nt * std::log(n_c));
}

double expected_iters_sequential(double n_per_worker, double n_c, double p) {
  return expected_iters_two_pass(n_per_worker, n_c, p);
}

std::uint64_t QuantileEstimate::max_worker_calls() const {
  return per_worker_calls.empty()
             ? 0
             : *std::max_element(per_worker_calls.begin(), per_worker_calls.end());
}

std::optional<QuantileDiagnostics> quantile_diagnostics(const LimitState& ls, double p, double q,
                                                        std::size_t n_per_worker,
                                                        std::size_t n_c) {
  if (!ls.law() || !ls.law()->pdf) return std::nullopt;
  const auto& pdf = ls.law()->pdf;
  const double f = pdf(q);
  if (!(f > 0.0) || !std::isfinite(f)) return std::nullopt;
  const double h = 1e-5 * std::max(1.0, std::abs(q));
  const double fp = (pdf(q + h) - pdf(q - h)) / (2.0 * h);
  const double n_total = static_cast<double>(n_per_worker * n_c);
  const BiasBounds b = estimator_bias_bounds(p, f, fp, n_total);
  QuantileDiagnostics d;
  d.clt_sd = clt_sd(p, f, n_total);
  d.bias_lower = b.lower;
  d.bias_upper = b.upper;
  d.gamma_q = gamma_q(q, p, f);
  d.expected_iters = expected_iters_two_pass(static_cast<double>(n_per_worker),
                                             static_cast<double>(n_c), p);
  return d;
}

namespace {

// The n_c resumable descents of one quantile run.
class Pool {
 public:
  Pool(const LimitState& ls, const QuantileOptions& o) : o_(o) {
    if (o.workers == 0 || o.n_per_worker == 0) throw ConfigError("workers and N must be positive");
    o.kernel.validate();
    std::optional<HazardView> hazard;
    if (o.mode == SamplerMode::kIdeal) {
      hazard = ls.hazard();
      if (!hazard || !hazard->inverse_lambda) {
        throw UnsupportedError(ls.name() + " has no exact conditional sampler");
      }
    }
    d_.resize(o.workers);
    parallel_for(o.workers, o.threads, [&](std::size_t w) {
      Rng rng = worker_stream(o.seed, o.rep, w);
      if (hazard) {
        d_[w] = std::make_unique<IdealDescent>(*hazard, o.n_per_worker, std::move(rng));
      } else {
        d_[w] = std::make_unique<McmcDescent>(ls, o.n_per_worker, o.kernel, std::move(rng));
      }
    });
  }

  std::size_t size() const { return d_.size(); }
  Descent& operator[](std::size_t w) { return *d_[w]; }

  void run_all(const StopRule& stop) {
    parallel_for(d_.size(), o_.threads, [&](std::size_t w) { d_[w]->run(stop); });
  }
  void run_each(const std::function<StopRule(const Descent&)>& rule) {
    parallel_for(d_.size(), o_.threads, [&](std::size_t w) { d_[w]->run(rule(*d_[w])); });
  }

  std::uint64_t count_at_or_below(double level) const {
    std::uint64_t n = 0;
    for (const auto& d : d_) n += d->log().count_arrivals_at_or_below(level);
    return n;
  }

  // Every arrival at or below this level has been generated.
  double complete_level() const {
    double m = d_.front()->min_level();
    for (const auto& d : d_) m = std::min(m, d->min_level());
    return m;
  }

  double mean_moves() const {
    double s = 0.0;
    for (const auto& d : d_) s += static_cast<double>(d->moves());
    return s / static_cast<double>(d_.size());
  }

  std::vector<double> merged_levels() const {
    std::vector<EventLog> logs;
    logs.reserve(d_.size());
    for (const auto& d : d_) logs.push_back(d->log());
    return merge_logs(logs).arrival_levels();
  }

  // Runs extra rounds until `rank` arrivals lie in the complete region.
  void extend_to_rank(std::uint64_t rank) {
    for (std::uint64_t have = count_at_or_below(complete_level()); have < rank;
         have = count_at_or_below(complete_level())) {
      const std::uint64_t extra = (rank - have + d_.size() - 1) / d_.size();
      run_each([&](const Descent& d) { return StopRule::after_moves(d.moves() + extra); });
      double level = -INFINITY;
      for (const auto& d : d_) level = std::max(level, d->consumed_levels().back());
      run_all(StopRule::at_level(level));
    }
  }

 private:
  const QuantileOptions& o_;
  std::vector<std::unique_ptr<Descent>> d_;
};

void finish(Pool& pool, QuantileEstimate& e, const LimitState& ls, double p,
            const QuantileOptions& o) {
  e.mean_iterations = pool.mean_moves();
  e.ci_indices = ci_q_indices(e.m, o.ci_alpha);
  if (o.extend_for_ci) pool.extend_to_rank(e.ci_indices.upper);

  const auto levels = pool.merged_levels();
  e.q_hat = estimate_q(levels, e.m);
  if (pool.count_at_or_below(pool.complete_level()) >= e.ci_indices.upper) {
    e.ci = ci_q(levels, e.m, o.ci_alpha);
  }

  for (std::size_t w = 0; w < pool.size(); ++w) {
    e.per_worker_calls.push_back(pool[w].calls());
    e.n_calls += pool[w].calls();
    e.total_moves += pool[w].moves();
  }
  if (std::isfinite(e.q_hat)) {
    e.diagnostics = quantile_diagnostics(ls, p, e.q_hat, o.n_per_worker, o.workers);
  }
}

QuantileEstimate start(double p, const QuantileOptions& o) {
  QuantileEstimate e;
  e.K = o.workers;
  e.N = o.n_per_worker;
  e.alpha_risk = o.alpha_risk;
  e.ci_alpha = o.ci_alpha;
  e.seed = o.seed;
  e.m = target_event_count(p, static_cast<double>(o.workers * o.n_per_worker));
  if (e.m < 2) throw ConfigError("quantile target needs at least 2 events; increase N or lower p");
  if (o.n_per_worker < 10) {
    e.warnings.push_back("N = " + std::to_string(o.n_per_worker) +
                         " particles per worker; at least 10 is recommended");
  }
  return e;
}

}  // namespace

QuantileEstimate run_quantile_two_pass(const LimitState& ls, double p, const QuantileOptions& o) {
  QuantileEstimate e = start(p, o);
  if (o.m0_override) {
    e.m0 = *o.m0_override;
  } else if (o.workers < 2) {
    e.m0 = target_event_count(p, static_cast<double>(o.n_per_worker));
    e.warnings.push_back("single worker: m0 set to ceil(-N log p)");
  } else {
    e.m0 = choose_m0(o.n_per_worker, o.workers, p, o.alpha_risk);
  }
  if (e.m0 == 0) throw ConfigError("m0 must be positive");

  Pool pool(ls, o);
  pool.run_all(StopRule::after_moves(e.m0));
  double q_max = -INFINITY;
  for (std::size_t w = 0; w < pool.size(); ++w) {
    q_max = std::max(q_max, pool[w].consumed_levels()[e.m0 - 1]);
  }
  pool.run_all(StopRule::at_level(q_max));
  e.events_obtained = pool.count_at_or_below(q_max);
  e.shortfall = e.events_obtained < e.m;

  if (e.shortfall && !o.top_up) {
    e.q_hat = NAN;
    e.mean_iterations = pool.mean_moves();
    e.ci_indices = ci_q_indices(e.m, o.ci_alpha);
    for (std::size_t w = 0; w < pool.size(); ++w) {
      e.per_worker_calls.push_back(pool[w].calls());
      e.n_calls += pool[w].calls();
      e.total_moves += pool[w].moves();
    }
    e.warnings.push_back("shortfall: " + std::to_string(e.events_obtained) + " of " +
                         std::to_string(e.m) + " events");
    return e;
  }

  std::uint64_t have = e.events_obtained;
  while (have < e.m) {
    const std::uint64_t extra = (e.m - have + o.workers - 1) / o.workers;
    pool.run_each([&](const Descent& d) { return StopRule::after_moves(d.moves() + extra); });
    for (std::size_t w = 0; w < pool.size(); ++w) {
      q_max = std::max(q_max, pool[w].consumed_levels().back());
    }
    pool.run_all(StopRule::at_level(q_max));
    have = pool.count_at_or_below(q_max);
    ++e.top_up_rounds;
  }
  finish(pool, e, ls, p, o);
  return e;
}

QuantileEstimate run_quantile_sequential(const LimitState& ls, double p,
                                         const QuantileOptions& o) {
  QuantileEstimate e = start(p, o);
  Pool pool(ls, o);
  std::uint64_t k = 0;
  std::uint64_t have = 0;
  while (have < e.m) {
    ++k;
    pool.run_all(StopRule::after_moves(k));
    double q_min = INFINITY;
    for (std::size_t w = 0; w < pool.size(); ++w) {
      q_min = std::min(q_min, pool[w].consumed_levels()[k - 1]);
    }
    have = 0;
    for (std::size_t w = 0; w < pool.size(); ++w) {
      const auto& c = pool[w].consumed_levels();
      have += static_cast<std::uint64_t>(std::upper_bound(c.begin(), c.end(), q_min) - c.begin());
    }
  }
  e.events_obtained = have;
  finish(pool, e, ls, p, o);
  return e;
}

nlohmann::json to_json(const QuantileEstimate& e) {
  nlohmann::json j{{"q_hat", std::isfinite(e.q_hat) ? nlohmann::json(e.q_hat) : nlohmann::json()},
                   {"ci", e.ci ? nlohmann::json{e.ci->lower, e.ci->upper} : nlohmann::json()},
                   {"ci_alpha", e.ci_alpha},
                   {"M", e.total_moves},
                   {"K", e.K},
                   {"N", e.N},
                   {"n_calls", e.n_calls},
                   {"per_worker_calls", e.per_worker_calls},
                   {"seed", e.seed},
                   {"m", e.m},
                   {"m0", e.m0},
                   {"alpha_risk", e.alpha_risk},
                   {"events_obtained", e.events_obtained},
                   {"shortfall", e.shortfall},
                   {"top_up_rounds", e.top_up_rounds},
                   {"ci_indices", {e.ci_indices.lower, e.ci_indices.upper}},
                   {"mean_iterations", e.mean_iterations},
                   {"warnings", e.warnings}};
  if (e.diagnostics) {
    j["diagnostics"] = {{"clt_sd", e.diagnostics->clt_sd},
                        {"bias_lower", e.diagnostics->bias_lower},
                        {"bias_upper", e.diagnostics->bias_upper},
                        {"gamma_q", e.diagnostics->gamma_q},
                        {"expected_iters", e.diagnostics->expected_iters}};
  }
  return j;
}

}  // namespace splitmove
