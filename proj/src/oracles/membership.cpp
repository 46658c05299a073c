#include <algorithm>
#include <map>
#include <stdexcept>

#include "xc/oracles/oracles.hpp"

namespace xc::oracles {

namespace {

// Topological order by Kahn's algorithm, smallest event id first for
// determinism. Throws when the relation is cyclic (not a valid structure).
std::vector<size_t> topo_order(const std::vector<sim::Event>& events,
                               const std::vector<std::pair<sim::EventId, sim::EventId>>& edges) {
  std::map<sim::EventId, size_t> index;
  for (size_t i = 0; i < events.size(); ++i) index[events[i].id] = i;
  std::vector<int> indeg(events.size(), 0);
  std::vector<std::vector<size_t>> out(events.size());
  for (const auto& [src, dst] : edges) {
    auto s = index.find(src);
    auto t = index.find(dst);
    if (s == index.end() || t == index.end())
      throw std::invalid_argument("edge references an unknown event");
    out[s->second].push_back(t->second);
    ++indeg[t->second];
  }
  std::vector<size_t> ready, order;
  for (size_t i = 0; i < events.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    size_t cur = ready.back();
    ready.pop_back();
    order.push_back(cur);
    for (size_t nxt : out[cur])
      if (--indeg[nxt] == 0) {
        ready.push_back(nxt);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
  }
  if (order.size() != events.size())
    throw std::invalid_argument("cyclic messaging relation is not a valid event structure");
  return order;
}

}  // namespace

MembershipTable oracle_membership(const std::vector<sim::Event>& events,
                                  const std::vector<std::pair<sim::EventId, sim::EventId>>& edges,
                                  const GenerationFn& generation, const StatusFn& status) {
  std::vector<size_t> order = topo_order(events, edges);  // validates the structure
  std::map<sim::EventId, size_t> index;
  for (size_t i = 0; i < events.size(); ++i) index[events[i].id] = i;
  std::vector<std::vector<size_t>> preds(events.size());
  for (const auto& [src, dst] : edges) preds[index.at(dst)].push_back(index.at(src));

  MembershipTable table;
  auto row = [&](const Local& key) -> std::vector<char>& {
    auto [it, fresh] = table.active.emplace(key, std::vector<char>());
    if (fresh) it->second.assign(events.size(), 0);
    return it->second;
  };

  for (size_t i : order) {
    const sim::Event& ev = events[i];
    for (const Local& k : generation(ev)) row(k)[i] = 1;
    for (size_t p : preds[i]) {
      for (auto& [key, act] : table.active) {
        if (act[i] || !act[p]) continue;
        const Local& b = status(key, events[p]).get(ev.device);
        if (b.kind() == Kind::Bool && b.as_bool()) act[i] = 1;
      }
    }
  }
  return table;
}

}  // namespace xc::oracles
