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

#include "splitmove/probability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitmove/error.hpp"
#include "splitmove/mover.hpp"
#include "splitmove/special.hpp"
#include "splitmove/workers.hpp"

namespace splitmove {

double estimate_p(std::uint64_t total_moves, std::uint64_t workers, std::uint64_t n_per_worker) {
  const double kn = static_cast<double>(workers) * static_cast<double>(n_per_worker);
  if (kn < 2.0) throw ConfigError("estimate_p needs K * N >= 2");
  return std::exp(static_cast<double>(total_moves) * std::log1p(-1.0 / kn));
}

double variance_p(double p, double n_total) {
  return p * p * std::expm1(-std::log(p) / n_total);
}

double cramer_rao_bound(double p, double n_total) { return -p * p * std::log(p) / n_total; }

ConfidenceInterval ci_p(double p_hat, double n_total, double alpha) {
  if (!(p_hat > 0.0 && p_hat <= 1.0)) throw InvalidArgument("ci_p: p_hat outside (0, 1]");
  const double z = two_sided_z(alpha);
  const double z2n = z * z / n_total;
  const double t = -std::log(p_hat);
  const double root = std::sqrt(z2n * (t + 0.25 * z2n));
  const double center = p_hat * std::exp(-0.5 * z2n);
  return {center * std::exp(-root), center * std::exp(root)};
}

std::uint64_t ProbEstimate::max_worker_calls() const {
  return per_worker_calls.empty()
             ? 0
             : *std::max_element(per_worker_calls.begin(), per_worker_calls.end());
}

ProbEstimate run_probability(const LimitState& ls, const ProbabilityOptions& o) {
  if (o.workers == 0 || o.n_per_worker == 0) throw ConfigError("workers and N must be positive");
  if (o.workers * o.n_per_worker < 2) throw ConfigError("K * N must be at least 2");
  o.kernel.validate();

  ProbEstimate e;
  e.K = o.workers;
  e.N = o.n_per_worker;
  e.alpha = o.alpha;
  e.seed = o.seed;
  if (o.n_per_worker < 10) {
    e.warnings.push_back("N = " + std::to_string(o.n_per_worker) +
                         " particles per worker; at least 10 is recommended");
  }

  std::optional<HazardView> hazard;
  if (o.mode == SamplerMode::kIdeal) {
    hazard = ls.hazard();
    if (!hazard || !hazard->inverse_lambda) {
      throw UnsupportedError(ls.name() + " has no exact conditional sampler");
    }
  }

  const StopRule stop = StopRule::at_level(ls.level_threshold());
  const WorkerJob job = [&](std::size_t, Rng& rng) -> EventLog {
    if (hazard) {
      IdealDescent d(*hazard, o.n_per_worker, std::move(rng));
      d.run(stop);
      return d.log();
    }
    McmcDescent d(ls, o.n_per_worker, o.kernel, std::move(rng), o.k_batch);
    d.run(stop);
    return d.log();
  };
  const auto logs = run_workers(job, o.workers, o.seed, {o.rep, o.threads});

  for (const auto& log : logs) {
    e.M += log.total_moves;
    e.per_worker_moves.push_back(log.total_moves);
    e.per_worker_calls.push_back(log.calls());
    e.n_calls += log.calls();
  }
  e.p_hat = estimate_p(e.M, e.K, e.N);
  e.ci = ci_p(e.p_hat, static_cast<double>(e.K * e.N), o.alpha);
  return e;
}

nlohmann::json to_json(const ProbEstimate& e) {
  return {{"p_hat", e.p_hat},
          {"ci", {e.ci.lower, e.ci.upper}},
          {"alpha", e.alpha},
          {"M", e.M},
          {"K", e.K},
          {"N", e.N},
          {"n_calls", e.n_calls},
          {"per_worker_calls", e.per_worker_calls},
          {"per_worker_moves", e.per_worker_moves},
          {"seed", e.seed},
          {"warnings", e.warnings}};
}

ProbEstimate prob_estimate_from_json(const nlohmann::json& j) {
  ProbEstimate e;
  e.p_hat = j.at("p_hat").get<double>();
  e.ci = {j.at("ci").at(0).get<double>(), j.at("ci").at(1).get<double>()};
  e.alpha = j.value("alpha", 0.05);
  e.M = j.at("M").get<std::uint64_t>();
  e.K = j.at("K").get<std::uint64_t>();
  e.N = j.at("N").get<std::uint64_t>();
  e.n_calls = j.at("n_calls").get<std::uint64_t>();
  e.per_worker_calls = j.at("per_worker_calls").get<std::vector<std::uint64_t>>();
  e.per_worker_moves = j.value("per_worker_moves", std::vector<std::uint64_t>{});
  e.seed = j.at("seed").get<std::uint64_t>();
  e.warnings = j.value("warnings", std::vector<std::string>{});
  return e;
}

}  // namespace splitmove
