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

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "splitmove/benchmarks.hpp"
#include "splitmove/error.hpp"
#include "splitmove/event_log.hpp"
#include "splitmove/mover.hpp"
#include "splitmove/stats.hpp"

namespace sm = splitmove;

namespace {

const sm::HazardView& uniform_hazard() {
  static const auto h = *sm::toy_ideal_state(sm::ToyKind::kUniform01).hazard();
  return h;
}

const sm::HazardView& exp_hazard() {
  static const auto h = *sm::toy_ideal_state(sm::ToyKind::kExponential1).hazard();
  return h;
}

double exp_cdf(double t) { return t <= 0 ? 0.0 : -std::expm1(-t); }

void check_per_mark_increasing(const sm::EventLog& log) {
  std::map<std::uint32_t, double> last;
  for (const auto& e : log.events) {
    if (!e.is_counted_move() || e.kind == sm::EventKind::kReplica) {
      if (e.kind == sm::EventKind::kInitial) last[e.mark] = e.level;
      continue;
    }
    EXPECT_GT(e.level, last[e.mark]);
    last[e.mark] = e.level;
  }
}

}  // namespace

TEST(StopRule, Semantics) {
  const auto lv = sm::StopRule::at_level(1.0);
  EXPECT_TRUE(lv.reached(1.0, 0));
  EXPECT_FALSE(lv.reached(0.999, 1000));
  const auto mv = sm::StopRule::after_moves(3);
  EXPECT_FALSE(mv.reached(1e9, 2));
  EXPECT_TRUE(mv.reached(-1e9, 3));
  EXPECT_EQ(mv.remaining_moves(1), 2u);
}

TEST(DescendSingle, ImmediateStopLogsInitialDraw) {
  const auto ls = sm::make_waarts();
  auto rng = sm::derive_stream(1, 0, 0);
  const auto log = sm::descend_single(ls, sm::StopRule::immediately(), {}, rng);
  ASSERT_EQ(log.events.size(), 1u);
  EXPECT_EQ(log.total_moves, 0u);
  EXPECT_EQ(log.events[0].kind, sm::EventKind::kInitial);
  EXPECT_EQ(ls.call_count(), 1u);
}

TEST(DescendSingle, EqualsPopulationOfOne) {
  const auto ls = sm::make_parabolic();
  auto r1 = sm::derive_stream(2, 0, 0), r2 = r1;
  const auto stop = sm::StopRule::after_moves(30);
  const auto a = sm::descend_single(ls, stop, {}, r1);
  const auto b = sm::descend_population(1, ls, stop, {}, r2);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].level, b.events[i].level);
}

TEST(IdealDescend, SingleParticleMovesArePoisson) {
  const double q = 0.99;
  std::vector<std::uint64_t> moves;
  auto rng = sm::derive_stream(3, 0, 0);
  for (int r = 0; r < 10'000; ++r) {
    moves.push_back(sm::ideal_descend(uniform_hazard(), 1, sm::StopRule::at_level(q), rng).total_moves);
  }
  std::vector<double> m(moves.begin(), moves.end());
  EXPECT_NEAR(sm::sample_mean(m), std::log(100.0), 3 * std::sqrt(std::log(100.0) / 1e4));
  const auto t = sm::chi2_poisson_test(moves, std::log(100.0));
  ASSERT_TRUE(t.has_value());
  EXPECT_GT(t->p_value, 0.01);
}

TEST(IdealDescend, HazardGapsAreUnitExponential) {
  auto rng = sm::derive_stream(4, 0, 0);
  const auto log = sm::ideal_descend(exp_hazard(), 1, sm::StopRule::after_moves(10'000), rng);
  std::vector<double> gaps;
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    gaps.push_back(log.events[i].level - log.events[i - 1].level);
  }
  EXPECT_GT(sm::ks_test(gaps, exp_cdf).p_value, 0.01);
}

TEST(IdealDescend, PopulationGapsAreExponentialOverN) {
  auto rng = sm::derive_stream(5, 0, 0);
  const std::size_t n = 20;
  sm::IdealDescent d(exp_hazard(), n, rng);
  d.run(sm::StopRule::after_moves(5'000));
  const auto& c = d.consumed_levels();
  std::vector<double> gaps;
  for (std::size_t i = 1; i < c.size(); ++i) gaps.push_back(n * (c[i] - c[i - 1]));
  EXPECT_GT(sm::ks_test(gaps, exp_cdf).p_value, 0.01);
}

TEST(IdealDescend, PopulationMeanMoves) {
  auto rng = sm::derive_stream(6, 0, 0);
  std::vector<double> m;
  for (int r = 0; r < 2000; ++r) {
    m.push_back(double(sm::ideal_descend(exp_hazard(), 10, sm::StopRule::at_level(9.21), rng).total_moves));
  }
  EXPECT_NEAR(sm::sample_mean(m), 92.1, 3 * std::sqrt(92.1 / 2000));
}

TEST(IdealDescend, ImmediateStop) {
  auto rng = sm::derive_stream(7, 0, 0);
  const auto log = sm::ideal_descend(exp_hazard(), 8, sm::StopRule::immediately(), rng);
  EXPECT_EQ(log.events.size(), 8u);
  EXPECT_EQ(log.total_moves, 0u);
}

TEST(IdealDescend, NeedsInverseHazard) {
  sm::HazardView h{[](double y) { return y; }, {}};
  auto rng = sm::derive_stream(8, 0, 0);
  EXPECT_THROW(sm::ideal_descend(h, 3, sm::StopRule::immediately(), rng), sm::UnsupportedError);
}

TEST(IdealDescend, AdditivityAcrossFactorizations) {
  const double t = std::log(1e4);
  std::vector<double> one, many;
  auto rng = sm::derive_stream(9, 0, 0);
  for (int r = 0; r < 300; ++r) {
    one.push_back(double(sm::ideal_descend(exp_hazard(), 100, sm::StopRule::at_level(t), rng).total_moves));
    std::uint64_t sum = 0;
    for (int k = 0; k < 100; ++k) {
      sum += sm::ideal_descend(exp_hazard(), 1, sm::StopRule::at_level(t), rng).total_moves;
    }
    many.push_back(double(sum));
  }
  EXPECT_GT(sm::ks_two_sample(one, many).p_value, 0.01);
}

TEST(DescendPopulation, MinimumLevelNeverDecreases) {
  const auto ls = sm::make_watermark(5, 0.8);
  auto rng = sm::derive_stream(10, 0, 0);
  sm::McmcDescent d(ls, 10, {}, rng);
  double prev = d.min_level();
  for (int i = 0; i < 200; ++i) {
    d.run(sm::StopRule::after_moves(d.moves() + 1));
    EXPECT_GE(d.min_level(), prev);
    prev = d.min_level();
  }
  check_per_mark_increasing(d.log());
}

TEST(DescendPopulation, CallAccountingDirectKernel) {
  const auto ls = sm::make_watermark(5, 0.8);
  auto rng = sm::derive_stream(11, 0, 0);
  sm::KernelConfig cfg;
  cfg.burn_in = 7;
  sm::McmcDescent d(ls, 12, cfg, rng);
  d.run(sm::StopRule::at_level(ls.level_threshold()));
  EXPECT_EQ(d.calls(), 12 + 7 * d.attempts());
  EXPECT_EQ(ls.call_count(), d.calls());
  EXPECT_EQ(d.log().calls(), d.calls());
  EXPECT_GE(d.min_level(), ls.level_threshold());
}

TEST(DescendPopulation, ReplicasAreCountedRejectsAreNot) {
  // Tiny sigma on a narrow target makes refusals frequent.
  const auto ls = sm::make_watermark(20, 0.9);
  sm::KernelConfig cfg;
  cfg.sigma = 3.0;
  cfg.burn_in = 1;
  auto rng = sm::derive_stream(12, 0, 0);
  sm::McmcDescent d(ls, 5, cfg, rng);
  d.run(sm::StopRule::after_moves(60));
  std::uint64_t counted = 0, replicas = 0;
  for (const auto& e : d.log().events) {
    counted += e.is_counted_move();
    replicas += e.kind == sm::EventKind::kReplica;
  }
  EXPECT_EQ(counted, d.moves());
  EXPECT_GT(replicas, 0u);
  EXPECT_EQ(d.consumed_levels().size(), d.moves());
}

TEST(DescendPopulation, StallThrows) {
  // A single particle whose every proposal is infeasible never moves.
  const auto ls = sm::make_watermark(20, 0.9);
  sm::KernelConfig cfg;
  cfg.kind = sm::KernelKind::kMetropolisHastings;
  cfg.sigma = 50.0;
  cfg.burn_in = 1;
  auto rng = sm::derive_stream(13, 0, 0);
  sm::McmcDescent d(ls, 1, cfg, rng);
  EXPECT_THROW(d.run(sm::StopRule::after_moves(1'000'000)), sm::NumericalError);
}

TEST(DescendPopulation, Deterministic) {
  const auto ls = sm::make_parabolic();
  auto r1 = sm::derive_stream(13, 0, 0), r2 = r1;
  const auto a = sm::descend_population(20, ls, sm::StopRule::at_level(0.0), {}, r1);
  const auto b = sm::descend_population(20, ls, sm::StopRule::at_level(0.0), {}, r2);
  std::ostringstream sa, sb;
  sm::write_csv(sa, a);
  sm::write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(KBatch, ContractOnK) {
  const auto ls = sm::make_waarts();
  auto rng = sm::derive_stream(14, 0, 0);
  EXPECT_NO_THROW(sm::descend_population_kbatch(10, 9, ls, sm::StopRule::after_moves(20), {}, rng));
  EXPECT_THROW(sm::descend_population_kbatch(10, 10, ls, sm::StopRule::after_moves(20), {}, rng),
               sm::ConfigError);
  EXPECT_THROW(sm::descend_population_kbatch(10, 0, ls, sm::StopRule::after_moves(20), {}, rng),
               sm::ConfigError);
}

TEST(KBatch, KOneEqualsPlainDescent) {
  const auto ls = sm::make_parabolic();
  auto r1 = sm::derive_stream(15, 0, 0), r2 = r1;
  const auto a = sm::descend_population_kbatch(10, 1, ls, sm::StopRule::after_moves(50), {}, r1);
  const auto b = sm::descend_population(10, ls, sm::StopRule::after_moves(50), {}, r2);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].level, b.events[i].level);
}

TEST(KBatch, NoteAndOrdering) {
  const auto ls = sm::make_parabolic();
  auto rng = sm::derive_stream(16, 0, 0);
  const auto log = sm::descend_population_kbatch(10, 3, ls, sm::StopRule::after_moves(60), {}, rng);
  EXPECT_NE(log.note.find("ordered by resulting level"), std::string::npos);
  EXPECT_EQ(log.total_moves, 60u);
}

TEST(KBatch, MoveCountIsPoisson) {
  auto ls = sm::toy_ideal_state(sm::ToyKind::kExponential1).with_threshold(std::log(100.0));
  const std::size_t n = 50;
  std::vector<std::uint64_t> moves;
  sm::KernelConfig cfg;
  cfg.sigma = 1.0;
  cfg.burn_in = 50;
  auto rng = sm::derive_stream(17, 0, 0);
  for (int r = 0; r < 300; ++r) {
    moves.push_back(sm::descend_population_kbatch(n, 5, ls, sm::StopRule::at_level(ls.level_threshold()),
                                                  cfg, rng).total_moves);
  }
  const auto t = sm::chi2_poisson_test(moves, n * std::log(100.0));
  ASSERT_TRUE(t.has_value());
  EXPECT_GT(t->p_value, 0.01);
}

TEST(EventLog, CsvRoundTrip) {
  const auto ls = sm::make_watermark(20, 0.9);
  sm::KernelConfig cfg;
  cfg.sigma = 1.0;
  cfg.burn_in = 5;
  auto rng = sm::derive_stream(18, 0, 0);
  const auto log = sm::descend_population(6, ls, sm::StopRule::after_moves(100), cfg, rng);
  std::stringstream ss;
  sm::write_csv(ss, log);
  const auto back = sm::read_csv(ss);
  EXPECT_EQ(back.n_particles, log.n_particles);
  EXPECT_EQ(back.total_moves, log.total_moves);
  ASSERT_EQ(back.events.size(), log.events.size());
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    EXPECT_EQ(back.events[i].level, log.events[i].level);
    EXPECT_EQ(back.events[i].kind, log.events[i].kind);
    EXPECT_EQ(back.events[i].m, log.events[i].m);
    EXPECT_EQ(back.events[i].calls_so_far, log.events[i].calls_so_far);
  }
  std::stringstream bad("m,level,mark,accepted,calls_so_far\n1,abc,0,1,3\n");
  EXPECT_THROW(sm::read_csv(bad), sm::InvalidArgument);
}

TEST(MergeLogs, CountsAdd) {
  auto rng = sm::derive_stream(19, 0, 0);
  std::vector<sm::EventLog> logs;
  for (int k = 0; k < 4; ++k) {
    logs.push_back(sm::ideal_descend(exp_hazard(), 3 + k, sm::StopRule::after_moves(10 + 5 * k), rng));
  }
  const auto merged = sm::merge_logs(logs);
  std::uint64_t moves = 0;
  std::size_t n = 0;
  for (const auto& l : logs) {
    moves += l.total_moves;
    n += l.n_particles;
  }
  EXPECT_EQ(merged.total_moves, moves);
  EXPECT_EQ(merged.n_particles, n);
  EXPECT_TRUE(std::is_sorted(merged.events.begin(), merged.events.end(),
                             [](const auto& a, const auto& b) { return a.level < b.level; }));
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 50.0}) {
    std::size_t sum = 0;
    for (const auto& l : logs) sum += l.count_arrivals_at_or_below(t);
    EXPECT_EQ(merged.count_arrivals_at_or_below(t), sum);
  }
}

TEST(MergeLogs, SingleAndDisjoint) {
  sm::EventLog a, b;
  a.n_particles = b.n_particles = 1;
  a.events = {{0, 0.3, 0, sm::EventKind::kInitial, 1}, {1, 0.1, 0, sm::EventKind::kMove, 2}};
  b.events = {{0, 5.0, 0, sm::EventKind::kInitial, 1}, {1, 6.0, 0, sm::EventKind::kMove, 2}};
  const auto one = sm::merge_logs(std::vector<sm::EventLog>{a});
  EXPECT_EQ(one.events[0].level, 0.1);
  EXPECT_EQ(one.events[1].level, 0.3);
  const auto two = sm::merge_logs(std::vector<sm::EventLog>{a, b});
  const std::vector<double> want{0.1, 0.3, 5.0, 6.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(two.events[i].level, want[i]);
  EXPECT_NE(two.events[2].mark, two.events[0].mark);
}
