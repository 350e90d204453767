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

#include "splitmove/kernel.hpp"

#include <cmath>
#include <string>

#include "splitmove/error.hpp"

namespace splitmove {

KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "direct" || s == "direct_gaussian") return KernelKind::kDirectGaussian;
  if (s == "mh" || s == "metropolis_hastings") return KernelKind::kMetropolisHastings;
  throw ConfigError("unknown kernel kind '" + std::string(s) + "'");
}

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::kDirectGaussian ? "direct_gaussian" : "metropolis_hastings";
}

void KernelConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("kernel.sigma must be >= 0");
  if (burn_in < 1) throw ConfigError("kernel.burn_in must be >= 1");
  if (proposal == ProposalShape::kUniform && !(uniform_half_width > 0.0)) {
    throw ConfigError("uniform proposal half-width must be positive");
  }
}

double standard_normal_log_density(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return -0.5 * s;
}

StepResult mh_step(Point& p, double q, const KernelConfig& cfg, const LimitState& ls,
                   const LogDensity& log_density, Rng& rng) {
  std::vector<double> y(p.x.size());
  if (cfg.proposal == ProposalShape::kGaussian) {
    fill_standard_normal(rng, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.x[i] + cfg.sigma * y[i];
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double w = (2.0 * uniform01(rng) - 1.0) * cfg.uniform_half_width;
      y[i] = p.x[i] + cfg.sigma * w;
    }
  }
  const double log_ratio = log_density(y) - log_density(p.x);
  const double u = uniform01(rng);
  if (!(u < std::exp(log_ratio))) return {false, 0};

  const double level = ls.level(y);
  if (level > q) {
    p.x = std::move(y);
    p.level = level;
    return {true, 1};
  }
  return {false, 1};
}

StepResult direct_gaussian_step(Point& p, double q, const KernelConfig& cfg,
                                const LimitState& ls, Rng& rng) {
  std::vector<double> y(p.x.size());
  fill_standard_normal(rng, y);
  const double scale = 1.0 / std::sqrt(1.0 + cfg.sigma * cfg.sigma);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (p.x[i] + cfg.sigma * y[i]) * scale;

  const double level = ls.level(y);
  if (level > q) {
    p.x = std::move(y);
    p.level = level;
    return {true, 1};
  }
  return {false, 1};
}

TransitionResult transition(Point& p, double q, const KernelConfig& cfg, const LimitState& ls,
                            Rng& rng, const LogDensity& log_density) {
  TransitionResult r;
  for (int t = 0; t < cfg.burn_in; ++t) {
    const StepResult s = cfg.kind == KernelKind::kDirectGaussian
                             ? direct_gaussian_step(p, q, cfg, ls, rng)
                             : mh_step(p, q, cfg, ls, log_density, rng);
    r.any_accepted = r.any_accepted || s.accepted;
    r.calls += s.calls;
  }
  return r;
}

bool is_descendant(const Lineage& candidate, const Lineage& mover) {
  const std::uint64_t root = mover.root();
  return candidate.root() == root || candidate.parent == root;
}

SeedChoice select_seed(std::span<const Particle> population, const Particle& mover, Rng& rng,
                       std::span<const std::uint8_t> excluded) {
  auto eligible = [&](std::size_t i) {
    const Particle& c = population[i];
    if (c.lineage.id == mover.lineage.id) return false;
    if (!excluded.empty() && excluded[i]) return false;
    return c.level() > mover.level();
  };

  std::size_t n_all = 0, n_free = 0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!eligible(i)) continue;
    ++n_all;
    if (!is_descendant(population[i].lineage, mover.lineage)) ++n_free;
  }
  if (n_all == 0) throw SeedSelectionError("no particle above the mover's level");

  const bool fallback = n_free == 0;
  std::size_t pick = uniform_index(rng, fallback ? n_all : n_free);
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!eligible(i)) continue;
    if (!fallback && is_descendant(population[i].lineage, mover.lineage)) continue;
    if (pick-- == 0) return {i, fallback};
  }
  throw SeedSelectionError("seed selection out of range");
}

}  // namespace splitmove
