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

#include "splitmove/random.hpp"

#include <array>

namespace splitmove {

Rng derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t k0 = mix64(master);
  const std::uint64_t k1 = mix64(k0 ^ mix64(a + 0x632be59bd9b4e019ULL));
  const std::uint64_t k2 = mix64(k1 ^ mix64(b + 0x85157af5a3c7b1e3ULL));
  std::array<std::uint32_t, 8> words{};
  std::uint64_t z = k2;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    z = mix64(z);
    words[i] = static_cast<std::uint32_t>(z);
    words[i + 1] = static_cast<std::uint32_t>(z >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

Rng split(Rng& rng) {
  const std::uint64_t s = rng();
  return derive_stream(s, 0x73706c6974ULL);
}

void fill_standard_normal(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> normal;
  for (auto& v : out) v = normal(rng);
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

__extension__ typedef unsigned __int128 u128;

std::size_t uniform_index(Rng& rng, std::size_t n) {
  const u128 wide = static_cast<u128>(rng()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

double standard_exponential(Rng& rng) {
  std::exponential_distribution<double> exp1;
  return exp1(rng);
}

}  // namespace splitmove
