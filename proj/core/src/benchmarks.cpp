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

#include "splitmove/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "splitmove/error.hpp"
#include "splitmove/special.hpp"

namespace splitmove {

namespace bm = boost::math;

double watermark_phi(std::span<const double> x) {
  const double norm2 = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  return std::abs(x[0]) / std::sqrt(norm2);
}

namespace {

double watermark_tail(double a, double q) {
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return 0.0;
  return bm::ibeta(a, 0.5, (1.0 - q) * (1.0 + q));
}

}  // namespace

double watermark_analytic_p(int d, double q) {
  if (d < 2) throw InvalidArgument("watermark needs d >= 2");
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("watermark threshold must lie in (0, 1)");
  return watermark_tail(0.5 * (d - 1), q);
}

LevelLaw watermark_law(int d) {
  if (d < 2) throw InvalidArgument("watermark needs d >= 2");
  const double a = 0.5 * (d - 1);
  LevelLaw law;
  law.tail = [a](double q) { return watermark_tail(a, q); };
  law.cdf = [a](double q) {
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    return bm::ibetac(a, 0.5, (1.0 - q) * (1.0 + q));
  };
  law.pdf = [a](double q) {
    if (q <= 0.0 || q >= 1.0) return 0.0;
    return 2.0 * q * bm::ibeta_derivative(a, 0.5, (1.0 - q) * (1.0 + q));
  };
  law.inverse_lambda = [a](double t) {
    if (t <= 0.0) return 0.0;
    const double x = bm::ibeta_inv(a, 0.5, std::exp(-t));
    return std::sqrt(1.0 - x);
  };
  return law;
}

LimitState make_watermark(int d, double q) {
  if (d < 2) throw InvalidArgument("watermark needs d >= 2");
  LimitState ls("watermark", static_cast<std::size_t>(d), watermark_phi, FailureSide::kAbove, q);
  ls.set_law(watermark_law(d));
  return ls;
}

std::array<LognormalSpec, kOscillatorDim> oscillator_marginals(double fs_mean) {
  return {{{1.5, 0.1},
           {0.01, 0.1},
           {1.0, 0.2},
           {0.01, 0.2},
           {0.05, 0.4},
           {0.02, 0.5},
           {fs_mean, 0.1},
           {100.0, 0.1}}};
}

double oscillator_mean_square_displacement(double mp, double ms, double kp, double ks,
                                           double zeta_p, double zeta_s, double s0) {
  const double wp = std::sqrt(kp / mp);
  const double ws = std::sqrt(ks / ms);
  const double gamma = ms / mp;
  const double wa = 0.5 * (wp + ws);
  const double za = 0.5 * (zeta_p + zeta_s);
  const double theta = (wp - ws) / wa;
  return std::numbers::pi * s0 / (4.0 * zeta_s * ws * ws * ws) * za * zeta_s /
         (zeta_p * zeta_s * (4.0 * za * za + theta * theta) + gamma * za * za) *
         (zeta_p * wp * wp * wp + zeta_s * ws * ws * ws) * wp / (4.0 * za * std::pow(wa, 4));
}

double oscillator_g(std::span<const double> u, double fs_mean) {
  if (u.size() != kOscillatorDim) throw InvalidArgument("oscillator needs 8 inputs");
  const auto specs = oscillator_marginals(fs_mean);
  std::array<double, kOscillatorDim> v{};
  for (std::size_t i = 0; i < kOscillatorDim; ++i) v[i] = std_to_lognormal(u[i], specs[i]);
  const double ms2 = oscillator_mean_square_displacement(v[0], v[1], v[2], v[3], v[4], v[5], v[7]);
  const double g = v[6] - 3.0 * v[3] * std::sqrt(ms2);
  if (!std::isfinite(g)) throw EvaluationError("oscillator: non-finite response");
  return g;
}

LimitState make_oscillator(double fs_mean) {
  if (!(fs_mean > 0.0)) throw InvalidArgument("oscillator force capacity must be positive");
  char buf[32];
  std::snprintf(buf, sizeof buf, "oscillator%g", fs_mean);
  LimitState ls(
      buf, kOscillatorDim, [fs_mean](std::span<const double> u) { return oscillator_g(u, fs_mean); },
      FailureSide::kBelow, 0.0);
  if (fs_mean == 15.0) ls.set_reference_probability(4.8015e-3);
  if (fs_mean == 21.5) ls.set_reference_probability(4.34e-5);
  if (fs_mean == 27.5) ls.set_reference_probability(3.745e-7);
  return ls;
}

double waarts_g(std::span<const double> x) {
  const double a = 3.0 + 0.1 * (x[0] - x[1]) * (x[0] - x[1]) -
                   std::abs(x[0] + x[1]) / std::numbers::sqrt2;
  const double b = 7.0 / std::numbers::sqrt2 - std::abs(x[0] - x[1]);
  return std::min(a, b);
}

LimitState make_waarts() {
  LimitState ls("waarts", 2, waarts_g, FailureSide::kBelow, 0.0);
  ls.set_reference_probability(2.275e-3);
  return ls;
}

double parabolic_g(std::span<const double> x) {
  constexpr double b = 5.0, kappa = 0.5, eps = 0.1;
  return b - x[1] - kappa * (x[0] - eps) * (x[0] - eps);
}

LimitState make_parabolic() {
  LimitState ls("parabolic", 2, parabolic_g, FailureSide::kBelow, 0.0);
  ls.set_reference_probability(2.946e-3);
  return ls;
}

double concave_g(std::span<const double> u, double a, double sigma) {
  const auto d = static_cast<double>(u.size());
  const LognormalSpec spec{1.0, sigma};
  double sum = 0.0;
  for (double ui : u) sum += std_to_lognormal(ui, spec);
  return d + a * sigma * std::sqrt(d) - sum;
}

LimitState make_concave(int d) {
  if (d < 1) throw InvalidArgument("concave needs d >= 1");
  LimitState ls("concave" + std::to_string(d), static_cast<std::size_t>(d),
                [](std::span<const double> u) { return concave_g(u); }, FailureSide::kBelow, 0.0);
  if (d == 2) ls.set_reference_probability(4.821e-3);
  if (d == 20) ls.set_reference_probability(2.273e-3);
  if (d == 50) ls.set_reference_probability(1.861e-3);
  return ls;
}

LimitState toy_ideal_state(ToyKind kind) {
  LevelLaw law;
  if (kind == ToyKind::kUniform01) {
    law.cdf = [](double y) { return std::clamp(y, 0.0, 1.0); };
    law.tail = [](double y) { return 1.0 - std::clamp(y, 0.0, 1.0); };
    law.pdf = [](double y) { return y > 0.0 && y < 1.0 ? 1.0 : 0.0; };
    law.inverse_lambda = [](double t) { return -std::expm1(-t); };
    LimitState ls("toy-uniform", 1, [](std::span<const double> u) { return normal_cdf(u[0]); },
                  FailureSide::kAbove, 0.99);
    ls.set_law(std::move(law));
    return ls;
  }
  law.cdf = [](double y) { return y > 0.0 ? -std::expm1(-y) : 0.0; };
  law.tail = [](double y) { return y > 0.0 ? std::exp(-y) : 1.0; };
  law.pdf = [](double y) { return y > 0.0 ? std::exp(-y) : 0.0; };
  law.inverse_lambda = [](double t) { return t; };
  LimitState ls("toy-exp", 1, [](std::span<const double> u) { return -std::log(normal_sf(u[0])); },
                FailureSide::kAbove, -std::log(1e-6));
  ls.set_law(std::move(law));
  return ls;
}

LimitState make_benchmark(std::string_view id) {
  if (id == "watermark") return make_watermark();
  if (id == "oscillator15") return make_oscillator(15.0);
  if (id == "oscillator21.5") return make_oscillator(21.5);
  if (id == "oscillator27.5") return make_oscillator(27.5);
  if (id == "waarts") return make_waarts();
  if (id == "parabolic") return make_parabolic();
  if (id == "concave2") return make_concave(2);
  if (id == "concave20") return make_concave(20);
  if (id == "concave50") return make_concave(50);
  if (id == "toy-uniform") return toy_ideal_state(ToyKind::kUniform01);
  if (id == "toy-exp") return toy_ideal_state(ToyKind::kExponential1);
  throw InvalidArgument("unknown benchmark '" + std::string(id) + "'");
}

const std::vector<std::string>& benchmark_ids() {
  static const std::vector<std::string> ids{
      "watermark", "oscillator15", "oscillator21.5", "oscillator27.5", "waarts", "parabolic",
      "concave2",  "concave20",    "concave50",      "toy-uniform",    "toy-exp"};
  return ids;
}

}  // namespace splitmove
