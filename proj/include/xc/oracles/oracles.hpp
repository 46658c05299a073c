#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "xc/eval.hpp"
#include "xc/sim/trace.hpp"

namespace xc::oracles {

// ---- process membership -----------------------------------------------

// Literal transcription of the membership recursion: an instance is active
// at an event if it is generated there, or some supplier ran it and its
// status nvalue maps this event's device to true. Evaluated by induction
// over the messaging relation; statuses of inactive events are never
// consulted. Throws std::invalid_argument on cyclic structures.
struct MembershipTable {
  // key -> per-event activity, indexed by position in the event vector
  std::map<Local, std::vector<char>> active;

  bool is_active(const Local& key, size_t event_index) const {
    auto it = active.find(key);
    return it != active.end() && it->second[event_index];
  }
};

using GenerationFn = std::function<Local::SetRep(const sim::Event&)>;
using StatusFn = std::function<NValue(const Local& key, const sim::Event&)>;

MembershipTable oracle_membership(const std::vector<sim::Event>& events,
                                  const std::vector<std::pair<sim::EventId, sim::EventId>>& edges,
                                  const GenerationFn& generation, const StatusFn& status);

// ---- shortest paths ----------------------------------------------------

// Multi-source Dijkstra over an undirected weighted graph; unreachable
// vertices get +infinity.
std::vector<double> oracle_shortest_paths(
    int vertex_count, const std::vector<std::tuple<int, int, double>>& undirected_edges,
    const std::vector<int>& sources);

// ---- denotational evaluation -------------------------------------------

// Direct induction over the event structure: each event is evaluated with
// the environment assembled from its suppliers' trees, using the recorded
// sensor snapshots. No scheduler and no message store are involved.
struct DenotationalResult {
  std::vector<std::optional<NValue>> results;
};

DenotationalResult oracle_denotational(const sim::Trace& structure, const ExprPtr& program,
                                       const EvalOptions& opts = {});

// Event ids whose recorded result differs from the oracle's (exact equality,
// failed events must match as failed).
std::vector<sim::EventId> denotational_disagreements(const sim::Trace& structure,
                                                     const DenotationalResult& oracle);

}  // namespace xc::oracles
