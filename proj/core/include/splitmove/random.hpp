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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace splitmove {

/// Engine used by every sampler in the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream derivation: the stream for cell (master, a, b) is a
/// pure function of its coordinates, so any single cell of a replicated
/// experiment can be rerun in isolation.
Rng derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Draws a fresh 64-bit seed from `rng` and builds an independent engine.
Rng split(Rng& rng);

/// Fills `out` with iid standard normal variates.
void fill_standard_normal(Rng& rng, std::span<double> out);

double uniform01(Rng& rng);

/// Uniform index in [0, n). Always consumes exactly one engine draw.
std::size_t uniform_index(Rng& rng, std::size_t n);

double standard_exponential(Rng& rng);

}  // namespace splitmove
