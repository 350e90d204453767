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

#include "splitmove/limit_state.hpp"

#include <cmath>
#include <string>

#include "splitmove/error.hpp"

namespace splitmove {

HazardView LevelLaw::hazard() const {
  HazardView h;
  if (tail) {
    auto t = tail;
    h.lambda = [t](double y) { return -std::log(t(y)); };
  } else {
    auto c = cdf;
    h.lambda = [c](double y) { return -std::log1p(-c(y)); };
  }
  h.inverse_lambda = inverse_lambda;
  return h;
}

double LognormalSpec::sigma_log() const { return std::sqrt(std::log1p(cv * cv)); }

double LognormalSpec::mu_log() const {
  const double s = sigma_log();
  return std::log(mean) - 0.5 * s * s;
}

void LognormalSpec::validate() const {
  if (!(mean > 0.0) || !(cv >= 0.0) || !std::isfinite(mean) || !std::isfinite(cv)) {
    throw InvalidArgument("lognormal spec needs mean > 0 and cv >= 0");
  }
}

double std_to_lognormal(double u, const LognormalSpec& spec) {
  return std::exp(spec.mu_log() + u * spec.sigma_log());
}

LimitState::LimitState(std::string name, std::size_t dim, Function g, FailureSide side,
                       double threshold)
    : name_(std::move(name)), dim_(dim), g_(std::move(g)), side_(side), threshold_(threshold) {
  if (dim_ == 0) throw InvalidArgument("limit-state dimension must be positive");
  if (!g_) throw InvalidArgument("limit-state function is empty");
}

LimitState::LimitState(const LimitState& other)
    : name_(other.name_),
      dim_(other.dim_),
      g_(other.g_),
      side_(other.side_),
      threshold_(other.threshold_),
      law_(other.law_),
      reference_p_(other.reference_p_),
      calls_(other.call_count()) {}

LimitState& LimitState::operator=(const LimitState& other) {
  if (this != &other) {
    name_ = other.name_;
    dim_ = other.dim_;
    g_ = other.g_;
    side_ = other.side_;
    threshold_ = other.threshold_;
    law_ = other.law_;
    reference_p_ = other.reference_p_;
    calls_.store(other.call_count(), std::memory_order_relaxed);
  }
  return *this;
}

LimitState LimitState::with_threshold(double threshold) const {
  LimitState copy(*this);
  copy.threshold_ = threshold;
  copy.reset_calls();
  if (threshold != threshold_) copy.reference_p_.reset();
  return copy;
}

double LimitState::eval(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw InvalidArgument(name_ + ": expected " + std::to_string(dim_) + " inputs, got " +
                          std::to_string(x.size()));
  }
  calls_.fetch_add(1, std::memory_order_relaxed);
  const double g = g_(x);
  if (!std::isfinite(g)) throw EvaluationError(name_ + ": non-finite limit-state value");
  return g;
}

std::optional<HazardView> LimitState::hazard() const {
  if (!law_) return std::nullopt;
  return law_->hazard();
}

std::optional<double> LimitState::reference_probability() const {
  if (law_ && law_->tail) return law_->tail(level_threshold());
  return reference_p_;
}

}  // namespace splitmove
