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

#include "splitmove/workers.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace splitmove {

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    std::exception_ptr first;
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<EventLog> run_workers(const WorkerJob& job, std::size_t n_c,
                                  std::uint64_t master_seed, const WorkerOptions& options) {
  if (n_c == 0) throw ConfigError("at least one worker is required");
  std::vector<EventLog> logs(n_c);
  std::vector<std::string> failures(n_c);
  parallel_for(n_c, options.threads, [&](std::size_t w) {
    Rng rng = worker_stream(master_seed, options.rep, w);
    try {
      logs[w] = job(w, rng);
    } catch (const std::exception& e) {
      failures[w] = "worker " + std::to_string(w) + ": " + e.what();
    }
  });

  std::vector<std::string> failed;
  for (auto& f : failures) {
    if (!f.empty()) failed.push_back(std::move(f));
  }
  if (!failed.empty()) {
    std::string what = std::to_string(failed.size()) + " of " + std::to_string(n_c) +
                       " workers failed; first: " + failed.front();
    throw WorkerError(what, std::move(logs), std::move(failed));
  }
  return logs;
}

}  // namespace splitmove
