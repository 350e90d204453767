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

#include "splitmove/event_log.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "splitmove/error.hpp"

namespace splitmove {

std::vector<double> EventLog::arrival_levels() const {
  std::vector<double> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (e.is_arrival()) out.push_back(e.level);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t EventLog::count_arrivals_at_or_below(double level) const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const Event& e) {
    return e.is_arrival() && e.level <= level;
  }));
}

EventLog merge_logs(std::span<const EventLog> logs) {
  EventLog merged;
  std::size_t total = 0;
  for (const auto& log : logs) total += log.events.size();
  merged.events.reserve(total);
  std::uint32_t offset = 0;
  for (const auto& log : logs) {
    for (Event e : log.events) {
      e.mark += offset;
      merged.events.push_back(e);
    }
    offset += static_cast<std::uint32_t>(log.n_particles);
    merged.n_particles += log.n_particles;
    merged.total_moves += log.total_moves;
  }
  std::stable_sort(merged.events.begin(), merged.events.end(),
                   [](const Event& a, const Event& b) { return a.level < b.level; });
  if (logs.size() == 1) merged.note = logs[0].note;
  return merged;
}

namespace {

int accepted_code(EventKind k) {
  switch (k) {
    case EventKind::kInitial:
    case EventKind::kMove:
      return 1;
    case EventKind::kReplica:
      return 2;
    case EventKind::kRejected:
      return 0;
  }
  return 0;
}

}  // namespace

void write_csv(std::ostream& out, const EventLog& log) {
  if (!log.note.empty()) out << "# " << log.note << '\n';
  out << "m,level,mark,accepted,calls_so_far\n";
  char buf[128];
  for (const auto& e : log.events) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%u,%d,%llu\n",
                  static_cast<unsigned long long>(e.m), e.level, e.mark, accepted_code(e.kind),
                  static_cast<unsigned long long>(e.calls_so_far));
    out << buf;
  }
}

EventLog read_csv(std::istream& in) {
  EventLog log;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      log.note = line.size() > 2 ? line.substr(2) : "";
      continue;
    }
    if (!header) {
      if (line != "m,level,mark,accepted,calls_so_far") {
        throw InvalidArgument("event CSV: unexpected header '" + line + "'");
      }
      header = true;
      continue;
    }
    unsigned long long m = 0, calls = 0;
    unsigned mark = 0;
    int acc = 0;
    double level = 0.0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%u,%d,%llu", &m, &level, &mark, &acc, &calls) != 5) {
      throw InvalidArgument("event CSV: malformed row '" + line + "'");
    }
    Event e{m, level, mark, EventKind::kRejected, calls};
    if (acc == 1) {
      e.kind = m == 0 ? EventKind::kInitial : EventKind::kMove;
    } else if (acc == 2) {
      e.kind = EventKind::kReplica;
    } else if (acc != 0) {
      throw InvalidArgument("event CSV: bad accepted flag in '" + line + "'");
    }
    if (e.kind == EventKind::kInitial) ++log.n_particles;
    if (e.is_counted_move()) ++log.total_moves;
    log.events.push_back(e);
  }
  if (!header) throw InvalidArgument("event CSV: missing header");
  return log;
}

}  // namespace splitmove
