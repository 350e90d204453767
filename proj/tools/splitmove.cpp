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

// splitmove: command-line front end.
//
//   splitmove prob --benchmark watermark --n 100 --workers 10 --seed 1
//   splitmove quantile --mode 2pass --p 4.704e-11 --alpha-risk 0.05
//   splitmove doe --benchmark waarts --n-fail 10
//   splitmove plan --p 1e-6 --delta 0.1 --workers 100 --burn-in 20
//   splitmove replicate --config cfg.json --reps 100

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "splitmove/benchmarks.hpp"
#include "splitmove/cost_model.hpp"
#include "splitmove/doe.hpp"
#include "splitmove/error.hpp"
#include "splitmove/event_log.hpp"
#include "splitmove/experiment.hpp"
#include "splitmove/mover.hpp"
#include "splitmove/probability.hpp"
#include "splitmove/quantile.hpp"
#include "splitmove/workers.hpp"

namespace sm = splitmove;

namespace {

constexpr int kExitShortfall = 2;

struct Common {
  std::string benchmark = "watermark";
  std::size_t n = 100;
  std::size_t workers = 10;
  int burn_in = 20;
  double sigma = 0.3;
  std::string kernel = "direct";
  std::string sampler = "mcmc";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--benchmark", c.benchmark, "Benchmark id")
      ->check(CLI::IsMember(sm::benchmark_ids()))
      ->capture_default_str();
  cmd->add_option("--n", c.n, "Particles per worker")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Number of workers n_c")->capture_default_str();
  cmd->add_option("--burn-in", c.burn_in, "Kernel steps per move (T)")->capture_default_str();
  cmd->add_option("--sigma", c.sigma, "Proposal scale")->capture_default_str();
  cmd->add_option("--kernel", c.kernel, "direct or mh")
      ->check(CLI::IsMember({"direct", "mh"}))
      ->capture_default_str();
  cmd->add_option("--sampler", c.sampler, "mcmc or ideal (exact, toy and watermark only)")
      ->check(CLI::IsMember({"mcmc", "ideal"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

sm::KernelConfig kernel_of(const Common& c) {
  sm::KernelConfig k;
  k.kind = sm::parse_kernel_kind(c.kernel);
  k.sigma = c.sigma;
  k.burn_in = c.burn_in;
  return k;
}

sm::SamplerMode sampler_of(const Common& c) {
  return c.sampler == "ideal" ? sm::SamplerMode::kIdeal : sm::SamplerMode::kMcmc;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw sm::Error("cannot write " + path);
  f << text << '\n';
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_prob(const Common& c, double alpha, std::optional<double> threshold,
             std::size_t k_batch, const std::string& events_out) {
  sm::LimitState ls = sm::make_benchmark(c.benchmark);
  if (threshold) ls = ls.with_threshold(*threshold);
  sm::ProbabilityOptions o;
  o.n_per_worker = c.n;
  o.workers = c.workers;
  o.kernel = kernel_of(c);
  o.alpha = alpha;
  o.seed = c.seed;
  o.mode = sampler_of(c);
  o.k_batch = k_batch;
  o.threads = c.threads;
  const sm::ProbEstimate e = sm::run_probability(ls, o);
  warn(e.warnings);

  if (!events_out.empty()) {
    // Replays the workers on the same streams to dump their merged log.
    const auto stop = sm::StopRule::at_level(ls.level_threshold());
    const auto logs = sm::run_workers(
        [&](std::size_t, sm::Rng& rng) {
          if (o.mode == sm::SamplerMode::kIdeal) return sm::ideal_descend(*ls.hazard(), c.n, stop, rng);
          return k_batch > 1 ? sm::descend_population_kbatch(c.n, k_batch, ls, stop, o.kernel, rng)
                             : sm::descend_population(c.n, ls, stop, o.kernel, rng);
        },
        c.workers, c.seed, {0, c.threads});
    std::ofstream f(events_out);
    if (!f) throw sm::Error("cannot write " + events_out);
    sm::write_csv(f, sm::merge_logs(logs));
  }

  nlohmann::json j = sm::to_json(e);
  j["benchmark"] = c.benchmark;
  if (auto ref = ls.reference_probability()) j["reference_p"] = *ref;
  emit(c.out, j.dump(2));
  return 0;
}

int run_quantile(const Common& c, const std::string& mode, std::optional<double> p,
                 double alpha_risk, double ci_alpha, bool no_top_up,
                 std::optional<std::uint64_t> m0) {
  const sm::LimitState ls = sm::make_benchmark(c.benchmark);
  if (!p) p = ls.reference_probability();
  if (!p) throw sm::ConfigError("--p is required for benchmark " + c.benchmark);
  sm::QuantileOptions o;
  o.n_per_worker = c.n;
  o.workers = c.workers;
  o.kernel = kernel_of(c);
  o.alpha_risk = alpha_risk;
  o.ci_alpha = ci_alpha;
  o.seed = c.seed;
  o.mode = sampler_of(c);
  o.top_up = !no_top_up;
  o.m0_override = m0;
  o.threads = c.threads;
  const sm::QuantileEstimate e = mode == "2pass" ? sm::run_quantile_two_pass(ls, *p, o)
                                                 : sm::run_quantile_sequential(ls, *p, o);
  warn(e.warnings);

  nlohmann::json j = sm::to_json(e);
  j["benchmark"] = c.benchmark;
  j["p"] = *p;
  j["mode"] = mode;
  if (ls.side() == sm::FailureSide::kBelow && std::isfinite(e.q_hat)) {
    j["q_hat_g"] = ls.orient(e.q_hat);
  }
  emit(c.out, j.dump(2));
  return e.shortfall && no_top_up ? kExitShortfall : 0;
}

int run_doe(const Common& c, std::size_t n_fail, const std::string& hyper_out) {
  const sm::LimitState ls = sm::make_benchmark(c.benchmark);
  sm::DoEOptions o;
  o.n_fail = n_fail;
  o.kernel = kernel_of(c);
  o.climb_steps = c.burn_in;
  o.seed = c.seed;
  const sm::DoEResult r = sm::build_doe(ls, o);
  if (!r.complete) std::cerr << "warning: " << r.diagnostics << '\n';

  if (c.out.empty()) {
    sm::write_doe_csv(std::cout, r);
  } else {
    std::ofstream f(c.out);
    if (!f) throw sm::Error("cannot write " + c.out);
    sm::write_doe_csv(f, r);
  }
  nlohmann::json summary{{"benchmark", c.benchmark},
                         {"n_calls", r.n_calls},
                         {"n_fail", r.n_fail},
                         {"per_chain_moves", r.per_chain_moves},
                         {"complete", r.complete},
                         {"hyperparameters", r.hyperparameters}};
  if (auto ref = ls.reference_probability()) {
    summary["expected_calls"] =
        sm::expected_doe_calls(static_cast<double>(ls.dim()), static_cast<double>(n_fail), *ref);
  }
  if (!hyper_out.empty()) {
    emit(hyper_out, summary.dump(2));
  } else {
    std::cerr << summary.dump(2) << '\n';
  }
  return r.complete ? 0 : 1;
}

int run_plan(const sm::CostModel& cm) {
  const double n_total = -std::log(cm.p) / (cm.delta * cm.delta);
  nlohmann::json j{{"p", cm.p},
                   {"delta", cm.delta},
                   {"workers", cm.n_c},
                   {"burn_in", cm.T},
                   {"particles_total", std::ceil(n_total)},
                   {"t_mc", sm::t_mc(cm)},
                   {"t_par_expected", sm::t_par_expected(cm)},
                   {"t_par_sequential", sm::t_par_sequential(cm)},
                   {"t_ms", sm::t_ms(cm)},
                   {"p0", cm.p0}};
  try {
    sm::CostModel at = cm;
    at.p0 = sm::optimal_p0(cm);
    j["optimal_p0"] = at.p0;
    j["t_ms_optimal"] = sm::t_ms(at);
  } catch (const sm::PlannerError& e) {
    j["optimal_p0"] = nullptr;
    std::cerr << "warning: " << e.what() << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_replicate(const std::string& config_path, std::optional<std::size_t> reps,
                  const std::string& out_dir) {
  std::ifstream f(config_path);
  if (!f) throw sm::ConfigError("cannot read " + config_path);
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw sm::ConfigError(config_path + ": " + e.what());
  }
  if (reps) raw["reps"] = *reps;
  const sm::ExperimentConfig cfg = sm::experiment_config_from_json(raw);
  const std::string dir = out_dir.empty() ? cfg.output : out_dir;
  const auto results = sm::replicate(cfg, std::filesystem::path(dir));

  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    warn(r.warnings);
    j.push_back({{"layout", r.layout.label()}, {"summary", sm::to_json(r.summary)}});
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  FLAGS_logtostderr = true;
  FLAGS_minloglevel = google::GLOG_ERROR;
  google::InitGoogleLogging(argv[0]);
  CLI::App app{"Rare-event probabilities, extreme quantiles and first designs of experiments"};
  app.require_subcommand(1);

  Common prob_c;
  double prob_alpha = 0.05;
  std::optional<double> prob_threshold;
  std::size_t k_batch = 1;
  std::string events_out;
  auto* prob = app.add_subcommand("prob", "Estimate a failure probability");
  add_common(prob, prob_c);
  prob->add_option("--alpha", prob_alpha, "Confidence interval level")->capture_default_str();
  prob->add_option("--threshold", prob_threshold, "Override the failure threshold");
  prob->add_option("--k-batch", k_batch, "Lowest particles moved together")->capture_default_str();
  prob->add_option("--events-out", events_out, "Write the merged event log as CSV");

  Common q_c;
  std::string q_mode = "2pass";
  std::optional<double> q_p;
  double alpha_risk = 0.05, ci_alpha = 0.05;
  bool no_top_up = false;
  std::optional<std::uint64_t> m0;
  auto* quant = app.add_subcommand("quantile", "Estimate an extreme quantile");
  add_common(quant, q_c);
  quant->add_option("--mode", q_mode, "2pass or seq")
      ->check(CLI::IsMember({"2pass", "seq"}))
      ->capture_default_str();
  quant->add_option("--p", q_p, "Target exceedance probability");
  quant->add_option("--alpha-risk", alpha_risk, "Accepted shortfall risk")->capture_default_str();
  quant->add_option("--alpha", ci_alpha, "Confidence interval level")->capture_default_str();
  quant->add_flag("--no-top-up", no_top_up, "Report a shortfall instead of running extra moves");
  quant->add_option("--m0", m0, "First-pass moves per worker");

  Common d_c;
  d_c.benchmark = "waarts";
  std::size_t n_fail = 10;
  std::string hyper_out;
  auto* doe = app.add_subcommand("doe", "Build a first design of experiments");
  add_common(doe, d_c);
  doe->add_option("--n-fail", n_fail, "Failing points wanted")->capture_default_str();
  doe->add_option("--hyper-out", hyper_out, "Write run summary and GP hyperparameters as JSON");

  sm::CostModel cm;
  auto* plan = app.add_subcommand("plan", "Compare computing-time models");
  plan->add_option("--p", cm.p, "Target probability")->capture_default_str();
  plan->add_option("--delta", cm.delta, "Target coefficient of variation")->capture_default_str();
  plan->add_option("--workers", cm.n_c, "Cores")->capture_default_str();
  plan->add_option("--burn-in", cm.T, "Kernel steps per move")->capture_default_str();
  plan->add_option("--p0", cm.p0, "Splitting level probability")->capture_default_str();

  std::string config_path, out_dir;
  std::optional<std::size_t> reps;
  auto* rep = app.add_subcommand("replicate", "Run a replicated experiment from a JSON config");
  rep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  rep->add_option("--reps", reps, "Replications (overrides the config)");
  rep->add_option("--out-dir", out_dir, "Directory for per-layout CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*prob) return run_prob(prob_c, prob_alpha, prob_threshold, k_batch, events_out);
    if (*quant) return run_quantile(q_c, q_mode, q_p, alpha_risk, ci_alpha, no_top_up, m0);
    if (*doe) return run_doe(d_c, n_fail, hyper_out);
    if (*plan) return run_plan(cm);
    if (*rep) return run_replicate(config_path, reps, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
