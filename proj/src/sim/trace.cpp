#include "xc/sim/trace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace xc::sim {

std::vector<std::vector<EventId>> Trace::predecessors() const {
  std::vector<std::vector<EventId>> preds(events.size());
  for (const auto& [src, dst] : edges) preds[static_cast<size_t>(dst)].push_back(src);
  return preds;
}

std::string render_summary(const std::optional<NValue>& result) {
  return result ? result->show() : "!failed";
}

void write_trace(const Trace& t, std::ostream& out) {
  out << "#trace v1\n";
  for (const auto& e : t.events) {
    out << e.id << ' ' << e.device << ' ' << fmt::format("{}", e.time) << ' ' << e.round << ' '
        << render_summary(t.results[static_cast<size_t>(e.id)]) << '\n';
  }
  out << "#edges\n";
  for (const auto& [src, dst] : t.edges) out << src << ' ' << dst << '\n';
}

TraceReadResult read_trace(std::istream& in) {
  TraceReadResult out;
  std::string line;
  if (!std::getline(in, line) || line != "#trace v1") {
    out.errors.push_back("missing '#trace v1' header");
    return out;
  }
  bool in_edges = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == "#edges") {
      in_edges = true;
      continue;
    }
    std::istringstream ls(line);
    if (in_edges) {
      EventId src = 0, dst = 0;
      if (!(ls >> src >> dst)) {
        out.errors.push_back(fmt::format("line {}: malformed edge", lineno));
        continue;
      }
      out.file.edges.emplace_back(src, dst);
    } else {
      Event e;
      if (!(ls >> e.id >> e.device >> e.time >> e.round)) {
        out.errors.push_back(fmt::format("line {}: malformed event", lineno));
        continue;
      }
      std::string summary;
      std::getline(ls, summary);
      if (!summary.empty() && summary.front() == ' ') summary.erase(0, 1);
      out.file.events.push_back(e);
      out.file.summaries.push_back(summary);
    }
  }
  return out;
}

std::vector<std::string> validate_structure(
    const std::vector<Event>& events, const std::vector<std::pair<EventId, EventId>>& edges) {
  std::vector<std::string> errs;
  std::map<EventId, const Event*> by_id;
  for (const auto& e : events) {
    if (!by_id.emplace(e.id, &e).second) errs.push_back(fmt::format("duplicate event id {}", e.id));
  }

  // per-device times strictly increase with rounds
  std::map<DeviceId, std::vector<const Event*>> by_dev;
  for (const auto& e : events) by_dev[e.device].push_back(&e);
  for (auto& [d, evs] : by_dev) {
    std::sort(evs.begin(), evs.end(),
              [](const Event* a, const Event* b) { return a->round < b->round; });
    for (size_t i = 1; i < evs.size(); ++i)
      if (evs[i]->time <= evs[i - 1]->time) {
        errs.push_back(fmt::format("device {} times not strictly increasing", d));
        break;
      }
  }

  // edges reference known events; at most one predecessor per device
  std::map<EventId, std::map<DeviceId, int>> pred_devices;
  for (const auto& [src, dst] : edges) {
    auto s = by_id.find(src);
    auto t = by_id.find(dst);
    if (s == by_id.end() || t == by_id.end()) {
      errs.push_back(fmt::format("edge {} -> {} references unknown event", src, dst));
      continue;
    }
    if (++pred_devices[dst][s->second->device] == 2)
      errs.push_back(
          fmt::format("event {} has two predecessors on device {}", dst, s->second->device));
  }

  // acyclicity (Kahn); well-founded finite pasts follow on a finite structure
  std::map<EventId, int> indeg;
  std::map<EventId, std::vector<EventId>> adj;
  for (const auto& e : events) indeg[e.id] = 0;
  for (const auto& [src, dst] : edges) {
    if (!by_id.count(src) || !by_id.count(dst)) continue;
    adj[src].push_back(dst);
    ++indeg[dst];
  }
  std::vector<EventId> queue;
  for (const auto& [id, deg] : indeg)
    if (deg == 0) queue.push_back(id);
  size_t seen = 0;
  while (!queue.empty()) {
    EventId id = queue.back();
    queue.pop_back();
    ++seen;
    for (EventId nxt : adj[id])
      if (--indeg[nxt] == 0) queue.push_back(nxt);
  }
  if (seen != by_id.size()) errs.push_back("messaging relation contains a cycle");
  return errs;
}

}  // namespace xc::sim
