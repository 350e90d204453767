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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitmove/limit_state.hpp"

namespace splitmove {

// Watermarking detection: Phi(x) = |x.u| / |x| with u the first axis vector.
// Failure is Phi > q.
double watermark_phi(std::span<const double> x);
/// Exact P(Phi(X) > q) through the Fisher(1, d-1) tail.
double watermark_analytic_p(int d, double q);
LevelLaw watermark_law(int d);
LimitState make_watermark(int d = 20, double q = 0.95);

// Two-dof damped oscillator. Coordinates of u, in order:
// m_p, m_s, k_p, k_s, zeta_p, zeta_s, F_s, S_0 (all lognormal).
inline constexpr std::size_t kOscillatorDim = 8;
std::array<LognormalSpec, kOscillatorDim> oscillator_marginals(double fs_mean);
/// Mean-squared relative displacement of the secondary spring.
double oscillator_mean_square_displacement(double mp, double ms, double kp, double ks,
                                           double zeta_p, double zeta_s, double s0);
/// g = F_s - 3 k_s sqrt(E[x_s^2]); failure is g < 0.
double oscillator_g(std::span<const double> u, double fs_mean);
LimitState make_oscillator(double fs_mean);

/// Four-branch serial system; failure is g < 0.
double waarts_g(std::span<const double> x);
LimitState make_waarts();

/// b - x2 - kappa (x1 - eps)^2 with b = 5, kappa = 0.5, eps = 0.1; failure is g < 0.
double parabolic_g(std::span<const double> x);
LimitState make_parabolic();

/// Sum of lognormal inputs against d + a sigma sqrt(d); failure is g < 0.
double concave_g(std::span<const double> u, double a = 3.0, double sigma = 0.2);
LimitState make_concave(int d);

enum class ToyKind { kUniform01, kExponential1 };

/// 1-D states whose level is exactly Uniform(0,1) or Exp(1) under X ~ N(0,1),
/// with closed-form cdf, pdf, hazard and inverse hazard. Default thresholds:
/// 0.99 for the uniform toy, -log(1e-6) for the exponential one.
LimitState toy_ideal_state(ToyKind kind);

/// Builds a benchmark from its id: watermark, oscillator15, oscillator21.5,
/// oscillator27.5, waarts, parabolic, concave2, concave20, concave50,
/// toy-uniform, toy-exp.
LimitState make_benchmark(std::string_view id);
const std::vector<std::string>& benchmark_ids();

}  // namespace splitmove
