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
#include <functional>
#include <string>
#include <vector>

#include "splitmove/error.hpp"
#include "splitmove/event_log.hpp"
#include "splitmove/random.hpp"

namespace splitmove {

/// Runs fn(0..n-1) on up to `threads` threads (0 picks the hardware
/// concurrency). The first exception is rethrown after all tasks finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Stream owned by worker `worker` of replication `rep`.
inline Rng worker_stream(std::uint64_t master_seed, std::uint64_t rep, std::uint64_t worker) {
  return derive_stream(master_seed, rep, worker);
}

struct WorkerOptions {
  std::uint64_t rep = 0;
  /// 0 = hardware concurrency, 1 = serial.
  std::size_t threads = 0;
};

using WorkerJob = std::function<EventLog(std::size_t worker, Rng& rng)>;

/// Raised when at least one worker failed. Carries the logs of the workers
/// that finished (empty logs for the failed ones) and one message per failure.
class WorkerError : public Error {
 public:
  WorkerError(const std::string& what, std::vector<EventLog> partial,
              std::vector<std::string> failures)
      : Error(what), partial_(std::move(partial)), failures_(std::move(failures)) {}

  const std::vector<EventLog>& partial_logs() const { return partial_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<EventLog> partial_;
  std::vector<std::string> failures_;
};

/// n_c independent jobs on streams derived from master_seed. The result is
/// in worker-index order whatever the completion order.
std::vector<EventLog> run_workers(const WorkerJob& job, std::size_t n_c,
                                  std::uint64_t master_seed, const WorkerOptions& options = {});

}  // namespace splitmove
