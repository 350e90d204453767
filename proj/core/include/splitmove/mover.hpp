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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "splitmove/event_log.hpp"
#include "splitmove/kernel.hpp"
#include "splitmove/limit_state.hpp"
#include "splitmove/random.hpp"

namespace splitmove {

/// When a descent stops: either the population minimum reaches a level, or
/// a number of counted moves has been performed.
class StopRule {
 public:
  static StopRule at_level(double q);
  static StopRule after_moves(std::uint64_t moves);
  static StopRule immediately() { return after_moves(0); }

  bool reached(double min_level, std::uint64_t moves) const;
  /// Whether a particle at `level` still has to move under this rule.
  bool needs_move(double level) const;
  /// Moves still allowed before the rule is met (unbounded for level rules).
  std::uint64_t remaining_moves(std::uint64_t moves) const;

  bool is_level_rule() const { return kind_ == Kind::kLevel; }
  double level() const { return level_; }
  std::uint64_t moves() const { return moves_; }

 private:
  enum class Kind { kLevel, kMoves };
  Kind kind_ = Kind::kMoves;
  double level_ = std::numeric_limits<double>::infinity();
  std::uint64_t moves_ = 0;
};

/// Resumable N-particle descent: the minimum-level particle is repeatedly
/// resampled conditionally above its own level. Every arrival is logged.
class Descent {
 public:
  virtual ~Descent() = default;

  /// Iterates until `stop` holds. Calling it again with a further rule
  /// resumes where the previous call ended.
  void run(const StopRule& stop);

  virtual double min_level() const = 0;
  virtual std::size_t size() const = 0;

  const EventLog& log() const { return log_; }
  std::uint64_t moves() const { return log_.total_moves; }
  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t calls() const { return calls_; }
  /// Level of the particle consumed by each counted move, in order.
  const std::vector<double>& consumed_levels() const { return consumed_; }

  Rng& rng() { return rng_; }

 protected:
  explicit Descent(Rng rng) : rng_(std::move(rng)) {}
  /// One iteration. Must make progress toward `stop`.
  virtual void advance(const StopRule& stop) = 0;

  Rng rng_;
  EventLog log_;
  std::vector<double> consumed_;
  std::uint64_t attempts_ = 0;
  std::uint64_t calls_ = 0;
};

/// Descent with Markov-chain conditional sampling. With k_batch > 1 the k
/// lowest particles move together, each seeded outside the batch; batch
/// events are logged in order of their resulting level.
class McmcDescent final : public Descent {
 public:
  McmcDescent(const LimitState& ls, std::size_t n_particles, const KernelConfig& cfg, Rng rng,
              std::size_t k_batch = 1, LogDensity log_density = standard_normal_log_density);

  double min_level() const override;
  std::size_t size() const override { return particles_.size(); }
  const std::vector<Particle>& particles() const { return particles_; }

 private:
  void advance(const StopRule& stop) override;
  void advance_one();
  void advance_batch(const StopRule& stop);
  std::size_t argmin();

  const LimitState& ls_;
  KernelConfig cfg_;
  std::size_t k_batch_;
  LogDensity log_density_;
  std::vector<Particle> particles_;
  std::uint64_t next_id_ = 0;
};

/// Exact conditional sampling through the inverse integrated hazard: each
/// move adds an Exp(1) increment to the particle's hazard time.
class IdealDescent final : public Descent {
 public:
  IdealDescent(const HazardView& hazard, std::size_t n_particles, Rng rng);

  double min_level() const override;
  std::size_t size() const override { return heap_.size(); }

 private:
  struct Slot {
    double level;
    double time;
    std::uint64_t key;  // random tie-break
    std::uint32_t mark;
  };
  void advance(const StopRule& stop) override;
  static bool later(const Slot& a, const Slot& b);

  HazardView hazard_;
  std::vector<Slot> heap_;
};

/// Single particle; equivalent to descend_population with N = 1.
EventLog descend_single(const LimitState& ls, const StopRule& stop, const KernelConfig& cfg,
                        Rng& rng);
EventLog descend_population(std::size_t n, const LimitState& ls, const StopRule& stop,
                            const KernelConfig& cfg, Rng& rng);
/// Requires 1 <= k <= n - 1; k == 1 is exactly descend_population.
EventLog descend_population_kbatch(std::size_t n, std::size_t k, const LimitState& ls,
                                   const StopRule& stop, const KernelConfig& cfg, Rng& rng);
/// Throws UnsupportedError when the hazard has no inverse.
EventLog ideal_descend(const HazardView& hazard, std::size_t n, const StopRule& stop, Rng& rng);

}  // namespace splitmove
