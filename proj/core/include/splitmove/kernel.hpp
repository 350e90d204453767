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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "splitmove/limit_state.hpp"
#include "splitmove/random.hpp"

namespace splitmove {

enum class KernelKind { kMetropolisHastings, kDirectGaussian };
enum class ProposalShape { kGaussian, kUniform };

KernelKind parse_kernel_kind(std::string_view s);
std::string_view to_string(KernelKind kind);

struct KernelConfig {
  KernelKind kind = KernelKind::kDirectGaussian;
  double sigma = 0.3;
  int burn_in = 20;
  /// Metropolis-Hastings only.
  ProposalShape proposal = ProposalShape::kGaussian;
  /// Half-width of the symmetric uniform proposal support, per coordinate.
  double uniform_half_width = 1.0;

  void validate() const;
};

/// log f_X up to an additive constant.
using LogDensity = std::function<double(std::span<const double>)>;
double standard_normal_log_density(std::span<const double> x);

/// A position together with its (oriented) level.
struct Point {
  std::vector<double> x;
  double level = 0.0;
};

struct StepResult {
  bool accepted = false;
  int calls = 0;
};

/// One Metropolis-Hastings step targeting f_X restricted to {level > q}.
/// The density ratio is tested first; g is only evaluated when the ratio
/// does not already reject.
StepResult mh_step(Point& p, double q, const KernelConfig& cfg, const LimitState& ls,
                   const LogDensity& log_density, Rng& rng);

/// One step of the reversible kernel x* = (x + sigma W) / sqrt(1 + sigma^2),
/// exact for the standard Gaussian law. Always costs one call.
StepResult direct_gaussian_step(Point& p, double q, const KernelConfig& cfg,
                                const LimitState& ls, Rng& rng);

struct TransitionResult {
  bool any_accepted = false;
  int calls = 0;
};

/// burn_in successive kernel steps from p, conditioned on level > q.
/// On return p holds the final state; if nothing was accepted p is unchanged.
TransitionResult transition(Point& p, double q, const KernelConfig& cfg, const LimitState& ls,
                            Rng& rng,
                            const LogDensity& log_density = standard_normal_log_density);

/// Genealogy of a particle state. `id` is unique per state. `parent` is the
/// state whose position seeded the chain that produced this one; a replica
/// (all burn-in transitions refused) shares its seed's position, and
/// `replica_of` names the state that position originally belongs to.
struct Lineage {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent;
  std::optional<std::uint64_t> replica_of;

  /// State that owns this position.
  std::uint64_t root() const { return replica_of.value_or(id); }
};

/// True when `candidate` is a son of `mover`'s position, a replica of such
/// a son, or a replica of the mover itself.
bool is_descendant(const Lineage& candidate, const Lineage& mover);

/// One member of a particle population.
struct Particle {
  Point state;
  /// Accepted (counted) moves of this particle.
  std::uint64_t moves = 0;
  Lineage lineage;

  double level() const { return state.level; }
};

struct SeedChoice {
  std::size_t index = 0;
  /// Set when every candidate descends from the mover; the move must then
  /// be counted only if at least one transition is accepted.
  bool count_only_if_accepted = false;
};

/// Picks the starting point for `mover` among the members of `population`
/// strictly above its level (the mover itself and members flagged in
/// `excluded` never qualify). The choice is uniform among candidates that do
/// not descend from the mover, falling back to a uniform choice among all
/// candidates. Throws SeedSelectionError when there is no candidate.
SeedChoice select_seed(std::span<const Particle> population, const Particle& mover, Rng& rng,
                       std::span<const std::uint8_t> excluded = {});

}  // namespace splitmove
