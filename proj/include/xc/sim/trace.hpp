#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xc/eval.hpp"
#include "xc/tree.hpp"
#include "xc/value.hpp"

namespace xc::sim {

using EventId = std::int64_t;

struct Event {
  EventId id = 0;
  DeviceId device = 0;
  double time = 0.0;
  int round = 0;
};

// A finished run: the augmented event structure plus the recorded space-time
// value. Sensors are kept per event so the structure can be re-evaluated
// without the scheduler; trees are kept only when requested.
struct Trace {
  int device_count = 0;
  std::vector<Event> events;
  std::vector<std::optional<NValue>> results;  // nullopt: the round failed
  std::vector<SensorState> sensors;
  std::vector<TreePtr> trees;                  // empty unless record_trees
  std::vector<std::pair<EventId, EventId>> edges;  // src ~> dst

  // Predecessor event ids per event, in edge insertion order.
  std::vector<std::vector<EventId>> predecessors() const;
};

std::string render_summary(const std::optional<NValue>& result);

// Line-oriented export:
//   #trace v1
//   <event_id> <device> <time> <round> <result_summary>
//   #edges
//   <src> <dst>
void write_trace(const Trace& t, std::ostream& out);

// The structural part read back from the file format.
struct TraceFile {
  std::vector<Event> events;
  std::vector<std::string> summaries;
  std::vector<std::pair<EventId, EventId>> edges;
};

struct TraceReadResult {
  TraceFile file;
  std::vector<std::string> errors;
};
TraceReadResult read_trace(std::istream& in);

// Event-structure well-formedness: unique ids, per-device strictly
// increasing times, edge targets valid, at most one predecessor per device,
// and an acyclic (hence finitely-founded) messaging relation.
std::vector<std::string> validate_structure(const std::vector<Event>& events,
                                            const std::vector<std::pair<EventId, EventId>>& edges);

inline std::vector<std::string> validate_structure(const Trace& t) {
  return validate_structure(t.events, t.edges);
}
inline std::vector<std::string> validate_structure(const TraceFile& t) {
  return validate_structure(t.events, t.edges);
}

}  // namespace xc::sim
