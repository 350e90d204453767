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

namespace splitmove {

double normal_pdf(double x);
double normal_cdf(double x);
/// 1 - Phi(x), accurate in the far upper tail.
double normal_sf(double x);
double normal_quantile(double p);
/// Z_{1-alpha/2}: two-sided standard normal critical value.
double two_sided_z(double alpha);

}  // namespace splitmove
