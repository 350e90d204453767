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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "splitmove/benchmarks.hpp"
#include "splitmove/doe.hpp"
#include "splitmove/error.hpp"
#include "splitmove/stats.hpp"

namespace sm = splitmove;

TEST(ExpectedDoeCalls, ClosedForm) {
  EXPECT_NEAR(sm::expected_doe_calls(20, 10, 4.704e-11), 258.8002, 1e-3);
  EXPECT_NEAR(sm::expected_doe_calls(2, 10, 2.275e-3), 63.8578, 1e-3);
  EXPECT_DOUBLE_EQ(sm::expected_doe_calls(7, 0, 0.3), 8.0);
  const double a = sm::expected_doe_calls(3, 5, 1e-3), b = sm::expected_doe_calls(4, 5, 1e-3);
  EXPECT_DOUBLE_EQ(sm::expected_doe_calls(5, 5, 1e-3) - b, b - a);
}

namespace {

sm::GPModel linear_model(double slope, int d) {
  // Dense grid on a linear function: the surrogate is exact enough.
  Eigen::MatrixXd x(25, d);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) {
    for (int k = 0; k < d; ++k) x(i, k) = -2.0 + 4.0 * ((i * (k + 3)) % 25) / 24.0;
    y(i) = slope * x(i, 0);
  }
  return sm::GPModel::fit(x, y, 0.0);
}

}  // namespace

TEST(SurrogateClimb, ConstantSurrogateLeavesPoint) {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  const auto m = sm::GPModel::fit(x, Eigen::VectorXd::Constant(3, 2.0), 2.0);
  auto rng = sm::derive_stream(1, 0, 0);
  const std::vector<double> start{0.3, -0.2};
  EXPECT_EQ(sm::surrogate_climb(start, m.predict(start), m, {}, 20, rng), start);
}

TEST(SurrogateClimb, NeverLowersPrediction) {
  const auto m = linear_model(1.0, 2);
  auto rng = sm::derive_stream(2, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> start{sm::uniform01(rng) - 0.5, sm::uniform01(rng) - 0.5};
    const double y0 = m.predict(start);
    const auto out = sm::surrogate_climb(start, y0, m, {}, 20, rng);
    EXPECT_GE(m.predict(out), y0);
  }
}

TEST(SurrogateClimb, MovesFurtherWithMoreSteps) {
  // Linear trend along x1 with nothing else known: the climb drifts away.
  const auto m = linear_model(1.0, 2);
  auto rng = sm::derive_stream(3, 0, 0);
  sm::KernelConfig cfg;
  cfg.kind = sm::KernelKind::kMetropolisHastings;
  double short_run = 0, long_run = 0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> start{0.0, 0.0};
    const auto a = sm::surrogate_climb(start, m.predict(start), m, cfg, 5, rng);
    const auto b = sm::surrogate_climb(start, m.predict(start), m, cfg, 50, rng);
    short_run += std::hypot(a[0], a[1]);
    long_run += std::hypot(b[0], b[1]);
  }
  EXPECT_GT(long_run, short_run);
}

TEST(SurrogateClimb, MakesNoTrueCalls) {
  const auto ls = sm::make_waarts();
  const auto m = linear_model(1.0, 2);
  auto rng = sm::derive_stream(4, 0, 0);
  sm::surrogate_climb(std::vector<double>{0.0, 0.0}, 0.0, m, {}, 20, rng);
  EXPECT_EQ(ls.call_count(), 0u);
}

TEST(BuildDoe, WaartsInvariants) {
  const auto ls = sm::make_waarts();
  sm::DoEOptions o;
  o.n_fail = 4;
  o.seed = 11;
  const auto r = sm::build_doe(ls, o);
  ASSERT_TRUE(r.complete) << r.diagnostics;
  EXPECT_EQ(r.n_calls, ls.call_count());
  EXPECT_EQ(r.design.size(), r.n_calls);
  EXPECT_GE(r.n_fail, 4u);
  std::uint64_t sum = 0;
  for (auto m : r.per_chain_moves) sum += m;
  EXPECT_EQ(r.n_calls, 3 + sum);
  EXPECT_EQ(r.fit_count, r.design.size() - 3 + 1);
  EXPECT_EQ(r.per_chain_moves.size(), 4u);

  // Each chain ends on a failure and its best level never decreases.
  std::map<int, double> best;
  std::map<int, bool> ended;
  for (const auto& p : r.design) {
    if (p.chain_id < 0) continue;
    if (p.move_index == 0) best[p.chain_id] = p.level;
    best[p.chain_id] = std::max(best[p.chain_id], p.level);
    ended[p.chain_id] = p.is_failure;
    EXPECT_EQ(p.is_failure, p.level > ls.level_threshold());
  }
  for (const auto& [c, e] : ended) EXPECT_TRUE(e) << "chain " << c;
}

TEST(BuildDoe, Deterministic) {
  sm::DoEOptions o;
  o.n_fail = 2;
  o.seed = 5;
  std::ostringstream a, b;
  sm::write_doe_csv(a, sm::build_doe(sm::make_parabolic(), o));
  sm::write_doe_csv(b, sm::build_doe(sm::make_parabolic(), o));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "x1,x2,g,is_failure,chain_id,move_index");
}

TEST(BuildDoe, MoveCapReportsPartialResult) {
  sm::DoEOptions o;
  o.n_fail = 3;
  o.move_cap = 2;
  o.seed = 1;
  const auto r = sm::build_doe(sm::make_oscillator(27.5), o);
  EXPECT_FALSE(r.complete);
  EXPECT_NE(r.diagnostics.find("move cap"), std::string::npos);
}

TEST(BuildDoe, RejectsZeroFailures) {
  sm::DoEOptions o;
  o.n_fail = 0;
  EXPECT_THROW(sm::build_doe(sm::make_waarts(), o), sm::ConfigError);
}
