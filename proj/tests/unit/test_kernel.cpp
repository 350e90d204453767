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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "splitmove/error.hpp"
#include "splitmove/kernel.hpp"
#include "splitmove/special.hpp"
#include "splitmove/stats.hpp"

namespace sm = splitmove;

namespace {

constexpr double kNoConstraint = -std::numeric_limits<double>::infinity();

sm::LimitState identity_state(std::size_t d = 1) {
  return sm::LimitState("x1", d, [](std::span<const double> x) { return x[0]; },
                        sm::FailureSide::kAbove, 0.0);
}

sm::KernelConfig config(sm::KernelKind kind, double sigma, int burn_in = 1) {
  sm::KernelConfig c;
  c.kind = kind;
  c.sigma = sigma;
  c.burn_in = burn_in;
  return c;
}

double mh_acceptance(std::size_t d) {
  const auto ls = identity_state(d);
  const auto cfg = config(sm::KernelKind::kMetropolisHastings, 0.3);
  auto rng = sm::derive_stream(1, d, 0);
  sm::Point p{std::vector<double>(d, 0.0), 0.0};
  int acc = 0;
  for (int i = 0; i < 100'000; ++i) {
    acc += sm::mh_step(p, kNoConstraint, cfg, ls, sm::standard_normal_log_density, rng).accepted;
  }
  return acc / 1e5;
}

}  // namespace

TEST(KernelConfig, Validation) {
  EXPECT_NO_THROW(sm::KernelConfig{}.validate());
  auto c = sm::KernelConfig{};
  c.burn_in = 0;
  EXPECT_THROW(c.validate(), sm::ConfigError);
  c = {};
  c.sigma = -0.1;
  EXPECT_THROW(c.validate(), sm::ConfigError);
  EXPECT_EQ(sm::parse_kernel_kind("mh"), sm::KernelKind::kMetropolisHastings);
  EXPECT_EQ(sm::parse_kernel_kind("direct"), sm::KernelKind::kDirectGaussian);
  EXPECT_THROW(sm::parse_kernel_kind("gibbs"), sm::ConfigError);
}

TEST(MhStep, InfeasibleProposalKeepsState) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kMetropolisHastings, 0.3);
  auto rng = sm::derive_stream(2, 0, 0);
  sm::Point p{{0.5}, 0.5};
  // Every proposal lands below q = 100.
  const auto r = sm::mh_step(p, 100.0, cfg, ls, sm::standard_normal_log_density, rng);
  EXPECT_FALSE(r.accepted);
  EXPECT_DOUBLE_EQ(p.x[0], 0.5);
}

TEST(MhStep, ZeroScaleAccepts) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kMetropolisHastings, 0.0);
  auto rng = sm::derive_stream(3, 0, 0);
  sm::Point p{{0.5}, 0.5};
  const auto r = sm::mh_step(p, 0.0, cfg, ls, sm::standard_normal_log_density, rng);
  EXPECT_TRUE(r.accepted);
  EXPECT_DOUBLE_EQ(p.x[0], 0.5);
}

TEST(MhStep, UnconstrainedAcceptanceRate) {
  EXPECT_NEAR(mh_acceptance(1), 0.906, 0.01);
  EXPECT_NEAR(mh_acceptance(2), 0.853, 0.01);
  EXPECT_NEAR(mh_acceptance(5), 0.749, 0.01);
}

TEST(MhStep, PreRejectionSkipsCall) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kMetropolisHastings, 0.3, 1000);
  auto rng = sm::derive_stream(4, 0, 0);
  sm::Point p{{0.0}, 0.0};
  const auto r = sm::transition(p, kNoConstraint, cfg, ls, rng);
  EXPECT_LT(r.calls, 1000);
  EXPECT_EQ(static_cast<std::uint64_t>(r.calls), ls.call_count());
}

TEST(DirectStep, ZeroScaleKeepsPoint) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kDirectGaussian, 0.0);
  auto rng = sm::derive_stream(5, 0, 0);
  sm::Point p{{1.25}, 1.25};
  EXPECT_TRUE(sm::direct_gaussian_step(p, 0.0, cfg, ls, rng).accepted);
  EXPECT_DOUBLE_EQ(p.x[0], 1.25);
}

TEST(DirectStep, PreservesStandardNormal) {
  const auto ls = identity_state(2);
  const auto cfg = config(sm::KernelKind::kDirectGaussian, 0.3);
  auto rng = sm::derive_stream(6, 0, 0);
  sm::Point p{{0.0, 0.0}, 0.0};
  std::vector<double> a, b;
  for (int i = 0; i < 100'000; ++i) {
    sm::direct_gaussian_step(p, kNoConstraint, cfg, ls, rng);
    // Thinned: the chain's lag-1 correlation is 1/sqrt(1.09).
    if (i % 100 == 99) {
      a.push_back(p.x[0]);
      b.push_back(p.x[1]);
    }
  }
  EXPECT_GT(sm::ks_test(a, sm::normal_cdf).p_value, 0.01);
  EXPECT_GT(sm::ks_test(b, sm::normal_cdf).p_value, 0.01);
}

TEST(DirectStep, StaysInHalfLine) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kDirectGaussian, 0.8, 50);
  auto rng = sm::derive_stream(7, 0, 0);
  sm::Point p{{2.5}, 2.5};
  for (int i = 0; i < 200; ++i) {
    const auto r = sm::transition(p, 2.0, cfg, ls, rng);
    EXPECT_EQ(r.calls, 50);
    EXPECT_GT(p.x[0], 2.0);
    EXPECT_DOUBLE_EQ(p.level, p.x[0]);
  }
}

TEST(Transition, AllRejectedLeavesInputUnchanged) {
  const auto ls = identity_state(3);
  const auto cfg = config(sm::KernelKind::kDirectGaussian, 0.3, 5);
  auto rng = sm::derive_stream(8, 0, 0);
  sm::Point p{{50.0, 1.0, -1.0}, 50.0};
  const auto before = p.x;
  const auto r = sm::transition(p, 50.0 - 1e-9, cfg, ls, rng);
  ASSERT_FALSE(r.any_accepted);
  EXPECT_EQ(p.x, before);
}

TEST(Transition, SingleStepEqualsStep) {
  const auto ls = identity_state();
  const auto cfg = config(sm::KernelKind::kDirectGaussian, 0.3, 1);
  auto r1 = sm::derive_stream(9, 0, 0), r2 = r1;
  sm::Point a{{0.3}, 0.3}, b = a;
  sm::transition(a, 0.0, cfg, ls, r1);
  sm::direct_gaussian_step(b, 0.0, cfg, ls, r2);
  EXPECT_EQ(a.x, b.x);
}

TEST(Transition, TruncatedNormalTarget) {
  const auto ls = identity_state();
  const double q = sm::normal_quantile(0.9);
  for (auto kind : {sm::KernelKind::kDirectGaussian, sm::KernelKind::kMetropolisHastings}) {
    const auto cfg = config(kind, 0.3, 20);
    auto rng = sm::derive_stream(10, static_cast<int>(kind), 0);
    std::vector<double> out;
    for (int i = 0; i < 10'000; ++i) {
      const double x0 = sm::normal_quantile(0.9 + 0.1 * sm::uniform01(rng));
      sm::Point p{{x0}, x0};
      sm::transition(p, q, cfg, ls, rng);
      out.push_back(p.x[0]);
    }
    const auto cdf = [q](double x) {
      return x <= q ? 0.0 : 1.0 - sm::normal_sf(x) / sm::normal_sf(q);
    };
    EXPECT_GT(sm::ks_test(out, cdf).p_value, 0.01) << sm::to_string(kind);
  }
}

namespace {

sm::Particle particle(std::uint64_t id, double level, std::optional<std::uint64_t> parent = {},
                      std::optional<std::uint64_t> replica_of = {}) {
  sm::Particle p;
  p.state.x = {level};
  p.state.level = level;
  p.lineage = {id, parent, replica_of};
  return p;
}

}  // namespace

TEST(SelectSeed, SingleCandidate) {
  std::vector<sm::Particle> pop{particle(0, 0.0), particle(1, 1.0)};
  auto rng = sm::derive_stream(11, 0, 0);
  const auto c = sm::select_seed(pop, pop[0], rng);
  EXPECT_EQ(c.index, 1u);
  EXPECT_FALSE(c.count_only_if_accepted);
}

TEST(SelectSeed, AvoidsSonsAndReplicas) {
  // 0 is the mover; 1 is its son, 2 a replica of its son, 3 unrelated.
  std::vector<sm::Particle> pop{particle(0, 0.0), particle(1, 1.0, 0), particle(2, 1.0, 0, 1),
                                particle(3, 2.0)};
  auto rng = sm::derive_stream(12, 0, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sm::select_seed(pop, pop[0], rng).index, 3u);
}

TEST(SelectSeed, FallsBackWhenAllAreSons) {
  std::vector<sm::Particle> pop{particle(0, 0.0), particle(1, 1.0, 0), particle(2, 1.5, 0)};
  auto rng = sm::derive_stream(13, 0, 0);
  const auto c = sm::select_seed(pop, pop[0], rng);
  EXPECT_TRUE(c.count_only_if_accepted);
  EXPECT_TRUE(c.index == 1 || c.index == 2);
}

TEST(SelectSeed, EmptyIsAnError) {
  std::vector<sm::Particle> pop{particle(0, 0.0)};
  auto rng = sm::derive_stream(14, 0, 0);
  EXPECT_THROW(sm::select_seed(pop, pop[0], rng), sm::SeedSelectionError);
}

TEST(SelectSeed, UniformOverEligible) {
  std::vector<sm::Particle> pop{particle(0, 0.0)};
  for (std::uint64_t i = 1; i <= 5; ++i) pop.push_back(particle(i, double(i)));
  auto rng = sm::derive_stream(15, 0, 0);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 100'000; ++i) ++hits[sm::select_seed(pop, pop[0], rng).index];
  EXPECT_EQ(hits[0], 0);
  for (int i = 1; i <= 5; ++i) EXPECT_NEAR(hits[i] / 1e5, 0.2, 0.01);
}
