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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace splitmove {

enum class EventKind : std::uint8_t {
  kInitial,   ///< iid draw at initialization
  kMove,      ///< counted move with at least one accepted transition
  kReplica,   ///< counted move where every transition was refused
  kRejected,  ///< attempt not counted (fallback seed, nothing accepted)
};

struct Event {
  /// Counted-move index: 0 for initial draws, k for the k-th counted move.
  /// A rejected attempt carries the index the move would have had.
  std::uint64_t m = 0;
  double level = 0.0;
  std::uint32_t mark = 0;
  EventKind kind = EventKind::kInitial;
  std::uint64_t calls_so_far = 0;

  /// Whether the event is an arrival of the marked point process.
  bool is_arrival() const { return kind != EventKind::kRejected; }
  bool is_counted_move() const { return kind == EventKind::kMove || kind == EventKind::kReplica; }
};

/// Empirical marked point process produced by a descent.
struct EventLog {
  std::vector<Event> events;
  std::size_t n_particles = 0;
  std::uint64_t total_moves = 0;
  /// Free-form header, written as a leading '#' line in CSV.
  std::string note;

  /// Sorted levels of every arrival (initial draws and counted moves).
  std::vector<double> arrival_levels() const;
  std::size_t count_arrivals_at_or_below(double level) const;
  std::uint64_t calls() const { return events.empty() ? 0 : events.back().calls_so_far; }
};

/// Concatenates logs, offsets marks so they stay distinct, and sorts by
/// level (stable, so per-log order is kept among ties). calls_so_far keeps
/// each source log's own count.
EventLog merge_logs(std::span<const EventLog> logs);

/// CSV with columns m,level,mark,accepted,calls_so_far. `accepted` is 1 for
/// initial draws and accepted moves, 2 for replicas (counted, nothing
/// accepted) and 0 for uncounted attempts.
void write_csv(std::ostream& out, const EventLog& log);
/// Reads what write_csv wrote. n_particles is recovered from the initial
/// events and total_moves from the counted ones. Throws InvalidArgument on
/// malformed rows.
EventLog read_csv(std::istream& in);

}  // namespace splitmove
