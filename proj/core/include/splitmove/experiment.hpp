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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitmove/kernel.hpp"
#include "splitmove/probability.hpp"
#include "splitmove/stats.hpp"

namespace splitmove {

enum class ExperimentMode { kProb, kQuantile2Pass, kQuantileSeq, kDoe, kPlan };

ExperimentMode parse_experiment_mode(std::string_view s);
std::string_view to_string(ExperimentMode mode);

/// One workers x particles layout, written "n_cxN".
struct Layout {
  std::size_t workers = 10;
  std::size_t n_per_worker = 100;

  std::string label() const;
};

struct ExperimentConfig {
  std::string benchmark = "watermark";
  ExperimentMode mode = ExperimentMode::kProb;
  /// Layouts to replicate; a single entry when N and n_c are given directly.
  std::vector<Layout> layouts{Layout{}};
  KernelConfig kernel;
  SamplerMode sampler = SamplerMode::kMcmc;
  double alpha = 0.05;
  /// Quantile modes: target probability and shortfall risk.
  std::optional<double> p;
  double alpha_risk = 0.05;
  bool top_up = true;
  /// DoE mode.
  std::size_t n_fail = 10;
  /// Plan mode.
  double delta = 0.1;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::string output = ".";
  std::size_t threads = 0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Accepts either "N"/"n_c" or a "layouts" list of "n_cxN" strings, plus
/// a nested "kernel" object with kind, sigma and burn_in.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

struct RepRecord {
  std::uint64_t rep = 0;
  double estimate = 0.0;
  std::uint64_t n_calls = 0;
  std::uint64_t max_worker_calls = 0;
  bool shortfall = false;

  bool operator==(const RepRecord&) const = default;
};

struct LayoutResult {
  Layout layout;
  std::vector<RepRecord> records;
  ReplicationSummary summary;
  std::vector<std::string> warnings;
};

/// One full experiment (rep index `rep`) of a probability, quantile or
/// DoE configuration with a single layout.
RepRecord run_once(const ExperimentConfig& config, const Layout& layout, std::uint64_t rep);

/// Runs config.reps experiments per layout. When `out_dir` is set, writes
/// one CSV per layout named <benchmark>_<mode>_<n_cxN>.csv there.
std::vector<LayoutResult> replicate(const ExperimentConfig& config,
                                    const std::optional<std::filesystem::path>& out_dir = {});

/// Columns rep,estimate,n_calls,max_worker_calls,shortfall; values are
/// written with round-trip precision.
void write_records_csv(std::ostream& out, const std::vector<RepRecord>& records);
std::vector<RepRecord> read_records_csv(std::istream& in);

nlohmann::json to_json(const ReplicationSummary& s);
ReplicationSummary replication_summary_from_json(const nlohmann::json& j);

}  // namespace splitmove
