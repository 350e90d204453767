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

#include "splitmove/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splitmove/error.hpp"

namespace splitmove {

void CostModel::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("cost model: p must lie in (0, 1)");
  if (!(delta > 0.0)) throw ConfigError("cost model: delta must be positive");
  if (!(n_c >= 1.0)) throw ConfigError("cost model: n_c must be >= 1");
  if (!(T >= 1.0)) throw ConfigError("cost model: T must be >= 1");
  if (!(p0 > 0.0 && p0 < 1.0)) throw ConfigError("cost model: p0 must lie in (0, 1)");
}

double delta2_ms(double p, double p0, double n) {
  return std::log(p) / std::log(p0) * (1.0 - p0) / (n * p0);
}

double delta_ms(double p, double p0, double n) { return std::sqrt(delta2_ms(p, p0, n)); }

double t_mc(const CostModel& cm) {
  cm.validate();
  return std::ceil(1.0 / (cm.n_c * cm.delta * cm.delta * cm.p));
}

double t_ms(const CostModel& cm) {
  cm.validate();
  const double levels = std::log(cm.p) / std::log(cm.p0);
  const double n = levels * (1.0 - cm.p0) / (cm.delta * cm.delta * cm.p0);
  return n / cm.n_c + std::floor(levels) * cm.T * std::max(n * (1.0 - cm.p0) / cm.n_c, 1.0);
}

double t_par_expected(const CostModel& cm) {
  cm.validate();
  const double t = -std::log(cm.p);
  const double per_core = t * t / (cm.n_c * cm.delta * cm.delta);
  return cm.T * per_core + cm.T * std::sqrt(per_core) * std::sqrt(2.0 * std::log(cm.n_c)) +
         t / (cm.n_c * cm.delta * cm.delta);
}

double t_par_sequential(const CostModel& cm) {
  cm.validate();
  const double lp = std::log(cm.p);
  return cm.T * lp * lp / (cm.n_c * cm.delta * cm.delta);
}

double optimal_p0(const CostModel& cm) {
  cm.validate();
  const double lp = std::log(cm.p);
  auto h = [&](double p0) {
    return lp / std::log(p0) * (1.0 - p0) * (1.0 - p0) / (cm.n_c * cm.delta * cm.delta * p0) -
           1.0;
  };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (!(h(lo) > 0.0) || !(h(hi) < 0.0)) {
    std::ostringstream msg;
    msg << "optimal_p0: no sign change on (0, 1); h(" << lo << ") = " << h(lo) << ", h(" << hi
        << ") = " << h(hi);
    throw PlannerError(msg.str());
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double expected_total_calls(double p, double workers, double n_per_worker, double T) {
  return -T * workers * n_per_worker * std::log(p);
}

}  // namespace splitmove
