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

#include "splitmove/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "splitmove/benchmarks.hpp"
#include "splitmove/doe.hpp"
#include "splitmove/error.hpp"
#include "splitmove/quantile.hpp"

namespace splitmove {

ExperimentMode parse_experiment_mode(std::string_view s) {
  if (s == "prob") return ExperimentMode::kProb;
  if (s == "quantile2pass") return ExperimentMode::kQuantile2Pass;
  if (s == "quantileseq") return ExperimentMode::kQuantileSeq;
  if (s == "doe") return ExperimentMode::kDoe;
  if (s == "plan") return ExperimentMode::kPlan;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kProb:
      return "prob";
    case ExperimentMode::kQuantile2Pass:
      return "quantile2pass";
    case ExperimentMode::kQuantileSeq:
      return "quantileseq";
    case ExperimentMode::kDoe:
      return "doe";
    case ExperimentMode::kPlan:
      return "plan";
  }
  return "prob";
}

std::string Layout::label() const {
  return std::to_string(workers) + "x" + std::to_string(n_per_worker);
}

namespace {

Layout parse_layout(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("layout '" + s + "' is not of the form n_cxN");
  try {
    std::size_t used = 0;
    Layout l{std::stoul(s.substr(0, x), &used), 0};
    if (used != x) throw ConfigError("bad layout '" + s + "'");
    l.n_per_worker = std::stoul(s.substr(x + 1), &used);
    if (used != s.size() - x - 1) throw ConfigError("bad layout '" + s + "'");
    return l;
  } catch (const std::logic_error&) {
    throw ConfigError("bad layout '" + s + "'");
  }
}

double nan_if_null(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto& ids = benchmark_ids();
  if (std::find(ids.begin(), ids.end(), benchmark) == ids.end()) {
    throw ConfigError("unknown benchmark '" + benchmark + "'");
  }
  if (layouts.empty()) throw ConfigError("at least one layout is required");
  for (const auto& l : layouts) {
    if (l.workers == 0 || l.n_per_worker == 0) throw ConfigError("N and n_c must be positive");
    if (l.workers * l.n_per_worker < 2) throw ConfigError("layout " + l.label() + " has K*N < 2");
  }
  kernel.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(alpha_risk > 0.0 && alpha_risk < 1.0)) throw ConfigError("alpha_risk must lie in (0, 1)");
  if (p && !(*p > 0.0 && *p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  if (reps == 0) throw ConfigError("reps must be positive");
  if (mode == ExperimentMode::kDoe && n_fail == 0) throw ConfigError("n_fail must be positive");
  if (mode == ExperimentMode::kPlan && !(delta > 0.0)) throw ConfigError("delta must be positive");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.benchmark = j.value("benchmark", c.benchmark);
    if (j.contains("mode")) c.mode = parse_experiment_mode(j.at("mode").get<std::string>());
    if (j.contains("layouts")) {
      c.layouts.clear();
      for (const auto& s : j.at("layouts")) c.layouts.push_back(parse_layout(s.get<std::string>()));
    } else {
      c.layouts = {Layout{j.value("n_c", std::size_t{10}), j.value("N", std::size_t{100})}};
    }
    if (j.contains("kernel")) {
      const auto& k = j.at("kernel");
      if (k.contains("kind")) c.kernel.kind = parse_kernel_kind(k.at("kind").get<std::string>());
      c.kernel.sigma = k.value("sigma", c.kernel.sigma);
      c.kernel.burn_in = k.value("burn_in", c.kernel.burn_in);
    }
    if (j.contains("sampler")) {
      const auto s = j.at("sampler").get<std::string>();
      if (s != "mcmc" && s != "ideal") throw ConfigError("sampler must be 'mcmc' or 'ideal'");
      c.sampler = s == "ideal" ? SamplerMode::kIdeal : SamplerMode::kMcmc;
    }
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("p")) c.p = j.at("p").get<double>();
    c.alpha_risk = j.value("alpha_risk", c.alpha_risk);
    c.top_up = j.value("top_up", c.top_up);
    c.n_fail = j.value("n_fail", c.n_fail);
    c.delta = j.value("delta", c.delta);
    c.reps = j.value("reps", c.reps);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  std::vector<std::string> layouts;
  for (const auto& l : c.layouts) layouts.push_back(l.label());
  nlohmann::json j{{"benchmark", c.benchmark},
                   {"mode", to_string(c.mode)},
                   {"layouts", layouts},
                   {"kernel",
                    {{"kind", to_string(c.kernel.kind)},
                     {"sigma", c.kernel.sigma},
                     {"burn_in", c.kernel.burn_in}}},
                   {"sampler", c.sampler == SamplerMode::kIdeal ? "ideal" : "mcmc"},
                   {"alpha", c.alpha},
                   {"alpha_risk", c.alpha_risk},
                   {"top_up", c.top_up},
                   {"n_fail", c.n_fail},
                   {"delta", c.delta},
                   {"reps", c.reps},
                   {"seed", c.seed},
                   {"output", c.output},
                   {"threads", c.threads}};
  if (c.p) j["p"] = *c.p;
  return j;
}

RepRecord run_once(const ExperimentConfig& config, const Layout& layout, std::uint64_t rep) {
  const LimitState ls = make_benchmark(config.benchmark);
  RepRecord r;
  r.rep = rep;
  switch (config.mode) {
    case ExperimentMode::kProb: {
      ProbabilityOptions o;
      o.n_per_worker = layout.n_per_worker;
      o.workers = layout.workers;
      o.kernel = config.kernel;
      o.alpha = config.alpha;
      o.seed = config.seed;
      o.rep = rep;
      o.mode = config.sampler;
      o.threads = config.threads;
      const ProbEstimate e = run_probability(ls, o);
      r.estimate = e.p_hat;
      r.n_calls = e.n_calls;
      r.max_worker_calls = e.max_worker_calls();
      return r;
    }
    case ExperimentMode::kQuantile2Pass:
    case ExperimentMode::kQuantileSeq: {
      const std::optional<double> p = config.p ? config.p : ls.reference_probability();
      if (!p) throw ConfigError("quantile mode needs p for benchmark " + config.benchmark);
      QuantileOptions o;
      o.n_per_worker = layout.n_per_worker;
      o.workers = layout.workers;
      o.kernel = config.kernel;
      o.alpha_risk = config.alpha_risk;
      o.ci_alpha = config.alpha;
      o.seed = config.seed;
      o.rep = rep;
      o.mode = config.sampler;
      o.top_up = config.top_up;
      o.extend_for_ci = false;
      o.threads = config.threads;
      const QuantileEstimate e = config.mode == ExperimentMode::kQuantile2Pass
                                     ? run_quantile_two_pass(ls, *p, o)
                                     : run_quantile_sequential(ls, *p, o);
      r.estimate = ls.orient(e.q_hat);
      r.n_calls = e.n_calls;
      r.max_worker_calls = e.max_worker_calls();
      r.shortfall = e.shortfall;
      return r;
    }
    case ExperimentMode::kDoe: {
      DoEOptions o;
      o.n_fail = config.n_fail;
      o.kernel = config.kernel;
      o.climb_steps = config.kernel.burn_in;
      o.seed = mix64(config.seed ^ mix64(rep + 1));
      const DoEResult d = build_doe(ls, o);
      r.estimate = static_cast<double>(d.n_calls);
      r.n_calls = d.n_calls;
      r.max_worker_calls = d.n_calls;
      r.shortfall = !d.complete;
      return r;
    }
    case ExperimentMode::kPlan:
      break;
  }
  throw ConfigError("plan mode has nothing to replicate");
}

std::vector<LayoutResult> replicate(const ExperimentConfig& config,
                                    const std::optional<std::filesystem::path>& out_dir) {
  config.validate();
  std::vector<LayoutResult> results;
  for (const auto& layout : config.layouts) {
    LayoutResult lr;
    lr.layout = layout;
    if (layout.n_per_worker < 10 && config.mode != ExperimentMode::kDoe) {
      lr.warnings.push_back("layout " + layout.label() +
                            ": fewer than 10 particles per worker");
    }
    std::vector<double> est;
    std::vector<std::uint64_t> calls;
    for (std::uint64_t rep = 0; rep < config.reps; ++rep) {
      lr.records.push_back(run_once(config, layout, rep));
      est.push_back(lr.records.back().estimate);
      calls.push_back(lr.records.back().n_calls);
    }
    lr.summary = boxplot_summary(std::move(est), std::move(calls));
    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      const auto path = *out_dir / (config.benchmark + "_" + std::string(to_string(config.mode)) +
                                    "_" + layout.label() + ".csv");
      std::ofstream out(path);
      if (!out) throw Error("cannot write " + path.string());
      write_records_csv(out, lr.records);
    }
    results.push_back(std::move(lr));
  }
  return results;
}

void write_records_csv(std::ostream& out, const std::vector<RepRecord>& records) {
  out << "rep,estimate,n_calls,max_worker_calls,shortfall\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%llu,%llu,%d\n",
                  static_cast<unsigned long long>(r.rep), r.estimate,
                  static_cast<unsigned long long>(r.n_calls),
                  static_cast<unsigned long long>(r.max_worker_calls), r.shortfall ? 1 : 0);
    out << buf;
  }
}

std::vector<RepRecord> read_records_csv(std::istream& in) {
  std::vector<RepRecord> records;
  std::string line;
  if (!std::getline(in, line) || line != "rep,estimate,n_calls,max_worker_calls,shortfall") {
    throw InvalidArgument("replication CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[5];
    for (auto& s : f) {
      if (!std::getline(row, s, ',')) throw InvalidArgument("replication CSV: short row '" + line + "'");
    }
    RepRecord r;
    r.rep = std::stoull(f[0]);
    r.estimate = std::strtod(f[1].c_str(), nullptr);
    r.n_calls = std::stoull(f[2]);
    r.max_worker_calls = std::stoull(f[3]);
    r.shortfall = f[4] == "1";
    records.push_back(r);
  }
  return records;
}

nlohmann::json to_json(const ReplicationSummary& s) {
  nlohmann::json est = nlohmann::json::array();
  for (double e : s.estimates) est.push_back(std::isnan(e) ? nlohmann::json() : nlohmann::json(e));
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json() : nlohmann::json(v); };
  return {{"estimates", est},   {"q1", num(s.q1)},   {"median", num(s.median)},
          {"q3", num(s.q3)},    {"min", num(s.min)}, {"max", num(s.max)},
          {"per_rep_calls", s.per_rep_calls}};
}

ReplicationSummary replication_summary_from_json(const nlohmann::json& j) {
  ReplicationSummary s;
  for (const auto& e : j.at("estimates")) s.estimates.push_back(nan_if_null(e));
  s.q1 = nan_if_null(j.at("q1"));
  s.median = nan_if_null(j.at("median"));
  s.q3 = nan_if_null(j.at("q3"));
  s.min = nan_if_null(j.at("min"));
  s.max = nan_if_null(j.at("max"));
  s.per_rep_calls = j.at("per_rep_calls").get<std::vector<std::uint64_t>>();
  return s;
}

}  // namespace splitmove
