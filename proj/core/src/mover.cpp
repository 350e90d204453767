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

#include "splitmove/mover.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "splitmove/error.hpp"

namespace splitmove {

StopRule StopRule::at_level(double q) {
  StopRule r;
  r.kind_ = Kind::kLevel;
  r.level_ = q;
  return r;
}

StopRule StopRule::after_moves(std::uint64_t moves) {
  StopRule r;
  r.kind_ = Kind::kMoves;
  r.moves_ = moves;
  return r;
}

bool StopRule::reached(double min_level, std::uint64_t moves) const {
  // A particle sitting exactly on the threshold counts as arrived.
  return kind_ == Kind::kLevel ? min_level >= level_ : moves >= moves_;
}

bool StopRule::needs_move(double level) const {
  return kind_ == Kind::kLevel ? level < level_ : true;
}

std::uint64_t StopRule::remaining_moves(std::uint64_t moves) const {
  if (kind_ == Kind::kLevel) return std::numeric_limits<std::uint64_t>::max();
  return moves >= moves_ ? 0 : moves_ - moves;
}

void Descent::run(const StopRule& stop) {
  constexpr std::uint64_t kMaxIdleAttempts = 100'000;
  std::uint64_t idle = 0;
  while (!stop.reached(min_level(), moves())) {
    const std::uint64_t before = moves();
    advance(stop);
    idle = moves() == before ? idle + 1 : 0;
    if (idle >= kMaxIdleAttempts) {
      throw NumericalError("descent stalled: " + std::to_string(idle) +
                           " consecutive rejected attempts at level " +
                           std::to_string(min_level()));
    }
  }
}

// ---------------------------------------------------------------------------

McmcDescent::McmcDescent(const LimitState& ls, std::size_t n_particles, const KernelConfig& cfg,
                         Rng rng, std::size_t k_batch, LogDensity log_density)
    : Descent(std::move(rng)),
      ls_(ls),
      cfg_(cfg),
      k_batch_(k_batch),
      log_density_(std::move(log_density)) {
  if (n_particles == 0) throw ConfigError("a descent needs at least one particle");
  if (k_batch_ == 0 || (k_batch_ > 1 && k_batch_ >= n_particles)) {
    throw ConfigError("k-batch size must satisfy 1 <= k <= N - 1");
  }
  cfg_.validate();
  log_.n_particles = n_particles;
  if (k_batch_ > 1) {
    log_.note = "k-batch " + std::to_string(k_batch_) +
                ": simultaneous moves are ordered by resulting level";
  }
  particles_.resize(n_particles);
  for (std::size_t i = 0; i < n_particles; ++i) {
    Particle& p = particles_[i];
    p.state.x.resize(ls_.dim());
    fill_standard_normal(rng_, p.state.x);
    p.state.level = ls_.level(p.state.x);
    p.lineage.id = next_id_++;
    ++calls_;
    log_.events.push_back({0, p.level(), static_cast<std::uint32_t>(i), EventKind::kInitial, calls_});
  }
}

double McmcDescent::min_level() const {
  double m = particles_.front().level();
  for (const auto& p : particles_) m = std::min(m, p.level());
  return m;
}

std::size_t McmcDescent::argmin() {
  const double m = min_level();
  std::size_t ties = 0;
  for (const auto& p : particles_) ties += p.level() == m;
  std::size_t pick = uniform_index(rng_, ties);
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    if (particles_[i].level() == m && pick-- == 0) return i;
  }
  return 0;
}

void McmcDescent::advance(const StopRule& stop) {
  if (k_batch_ == 1) {
    advance_one();
  } else {
    advance_batch(stop);
  }
}

namespace {

struct MoveOutcome {
  Particle next;
  EventKind kind;
};

// Runs one conditional resampling of `mover` from population[seed.index]
// (or from itself when no seed exists) and classifies the outcome.
MoveOutcome resample(const Particle& mover, const Particle& seed, bool fallback,
                     const LimitState& ls, const KernelConfig& cfg,
                     const LogDensity& log_density, Rng& rng, std::uint64_t& next_id,
                     int& calls) {
  Point point = seed.state;
  const TransitionResult tr = transition(point, mover.level(), cfg, ls, rng, log_density);
  calls = tr.calls;
  MoveOutcome out{mover, EventKind::kRejected};
  if (tr.any_accepted) {
    out.next.state = std::move(point);
    out.next.lineage = Lineage{next_id++, seed.lineage.root(), std::nullopt};
    out.kind = EventKind::kMove;
  } else if (!fallback) {
    out.next.state = seed.state;
    out.next.lineage = Lineage{next_id++, seed.lineage.parent, seed.lineage.root()};
    out.kind = EventKind::kReplica;
  }
  if (out.kind != EventKind::kRejected) ++out.next.moves;
  return out;
}

}  // namespace

void McmcDescent::advance_one() {
  const std::size_t i = argmin();
  const Particle& mover = particles_[i];

  SeedChoice choice{i, true};
  if (particles_.size() > 1) {
    try {
      choice = select_seed(particles_, mover, rng_);
    } catch (const SeedSelectionError&) {
      choice = {i, true};
    }
  }

  int calls = 0;
  MoveOutcome out = resample(mover, particles_[choice.index], choice.count_only_if_accepted, ls_,
                             cfg_, log_density_, rng_, next_id_, calls);
  ++attempts_;
  calls_ += static_cast<std::uint64_t>(calls);

  const std::uint64_t m = log_.total_moves + 1;
  if (out.kind == EventKind::kRejected) {
    log_.events.push_back({m, mover.level(), static_cast<std::uint32_t>(i), out.kind, calls_});
    return;
  }
  consumed_.push_back(mover.level());
  log_.total_moves = m;
  particles_[i] = std::move(out.next);
  log_.events.push_back(
      {m, particles_[i].level(), static_cast<std::uint32_t>(i), out.kind, calls_});
}

void McmcDescent::advance_batch(const StopRule& stop) {
  const std::size_t n = particles_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return particles_[a].level() < particles_[b].level();
  });

  std::size_t k = static_cast<std::size_t>(
      std::min<std::uint64_t>(k_batch_, stop.remaining_moves(log_.total_moves)));
  std::vector<std::size_t> batch;
  for (std::size_t r = 0; r < n && batch.size() < k; ++r) {
    if (stop.needs_move(particles_[order[r]].level())) batch.push_back(order[r]);
  }
  if (batch.empty()) batch.push_back(order.front());

  std::vector<std::uint8_t> excluded(n, 0);
  for (std::size_t i : batch) excluded[i] = 1;

  struct Pending {
    std::size_t index;
    double from;
    MoveOutcome out;
    int calls;
  };
  std::vector<Pending> pending;
  pending.reserve(batch.size());
  std::vector<Rng> streams;
  for (std::size_t b = 0; b < batch.size(); ++b) streams.push_back(split(rng_));

  for (std::size_t b = 0; b < batch.size(); ++b) {
    const std::size_t i = batch[b];
    const Particle& mover = particles_[i];
    SeedChoice choice{i, true};
    try {
      choice = select_seed(particles_, mover, streams[b], excluded);
    } catch (const SeedSelectionError&) {
      choice = {i, true};
    }
    int calls = 0;
    MoveOutcome out = resample(mover, particles_[choice.index], choice.count_only_if_accepted,
                               ls_, cfg_, log_density_, streams[b], next_id_, calls);
    pending.push_back({i, mover.level(), std::move(out), calls});
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return a.out.next.level() < b.out.next.level();
  });
  for (auto& pm : pending) {
    ++attempts_;
    calls_ += static_cast<std::uint64_t>(pm.calls);
    const std::uint64_t m = log_.total_moves + 1;
    const auto mark = static_cast<std::uint32_t>(pm.index);
    if (pm.out.kind == EventKind::kRejected) {
      log_.events.push_back({m, pm.from, mark, pm.out.kind, calls_});
      continue;
    }
    log_.total_moves = m;
    particles_[pm.index] = std::move(pm.out.next);
    log_.events.push_back({m, particles_[pm.index].level(), mark, pm.out.kind, calls_});
  }
  // Consumed levels are reported in ascending order of the levels left.
  std::vector<double> from;
  for (const auto& pm : pending) {
    if (pm.out.kind != EventKind::kRejected) from.push_back(pm.from);
  }
  std::sort(from.begin(), from.end());
  consumed_.insert(consumed_.end(), from.begin(), from.end());
}

// ---------------------------------------------------------------------------

IdealDescent::IdealDescent(const HazardView& hazard, std::size_t n_particles, Rng rng)
    : Descent(std::move(rng)), hazard_(hazard) {
  if (!hazard_.inverse_lambda) throw UnsupportedError("ideal mode needs an inverse hazard");
  if (n_particles == 0) throw ConfigError("a descent needs at least one particle");
  log_.n_particles = n_particles;
  heap_.reserve(n_particles);
  for (std::size_t i = 0; i < n_particles; ++i) {
    const double t = standard_exponential(rng_);
    const double level = hazard_.inverse_lambda(t);
    heap_.push_back({level, t, rng_(), static_cast<std::uint32_t>(i)});
    ++calls_;
    log_.events.push_back({0, level, static_cast<std::uint32_t>(i), EventKind::kInitial, calls_});
  }
  std::make_heap(heap_.begin(), heap_.end(), later);
}

bool IdealDescent::later(const Slot& a, const Slot& b) {
  return a.level != b.level ? a.level > b.level : a.key > b.key;
}

double IdealDescent::min_level() const { return heap_.front().level; }

void IdealDescent::advance(const StopRule&) {
  std::pop_heap(heap_.begin(), heap_.end(), later);
  Slot& s = heap_.back();
  consumed_.push_back(s.level);
  s.time += standard_exponential(rng_);
  s.level = hazard_.inverse_lambda(s.time);
  s.key = rng_();
  ++attempts_;
  ++calls_;
  log_.total_moves += 1;
  log_.events.push_back({log_.total_moves, s.level, s.mark, EventKind::kMove, calls_});
  std::push_heap(heap_.begin(), heap_.end(), later);
}

// ---------------------------------------------------------------------------

namespace {

template <class D>
EventLog finish(D& d, const StopRule& stop, Rng& rng) {
  d.run(stop);
  rng = std::move(d.rng());
  return d.log();
}

}  // namespace

EventLog descend_single(const LimitState& ls, const StopRule& stop, const KernelConfig& cfg,
                        Rng& rng) {
  return descend_population(1, ls, stop, cfg, rng);
}

EventLog descend_population(std::size_t n, const LimitState& ls, const StopRule& stop,
                            const KernelConfig& cfg, Rng& rng) {
  McmcDescent d(ls, n, cfg, std::move(rng));
  return finish(d, stop, rng);
}

EventLog descend_population_kbatch(std::size_t n, std::size_t k, const LimitState& ls,
                                   const StopRule& stop, const KernelConfig& cfg, Rng& rng) {
  if (k == 0 || k >= n) throw ConfigError("k-batch size must satisfy 1 <= k <= N - 1");
  McmcDescent d(ls, n, cfg, std::move(rng), k);
  return finish(d, stop, rng);
}

EventLog ideal_descend(const HazardView& hazard, std::size_t n, const StopRule& stop, Rng& rng) {
  IdealDescent d(hazard, n, std::move(rng));
  return finish(d, stop, rng);
}

}  // namespace splitmove
