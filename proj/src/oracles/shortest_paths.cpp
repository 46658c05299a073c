#include <limits>
#include <queue>

#include "xc/oracles/oracles.hpp"

namespace xc::oracles {

std::vector<double> oracle_shortest_paths(
    int vertex_count, const std::vector<std::tuple<int, int, double>>& undirected_edges,
    const std::vector<int>& sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(vertex_count));
  for (const auto& [a, b, w] : undirected_edges) {
    adj[static_cast<size_t>(a)].emplace_back(b, w);
    adj[static_cast<size_t>(b)].emplace_back(a, w);
  }
  std::vector<double> dist(static_cast<size_t>(vertex_count), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int s : sources) {
    dist[static_cast<size_t>(s)] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<size_t>(v)]) continue;
    for (const auto& [u, w] : adj[static_cast<size_t>(v)]) {
      double nd = d + w;
      if (nd < dist[static_cast<size_t>(u)]) {
        dist[static_cast<size_t>(u)] = nd;
        heap.emplace(nd, u);
      }
    }
  }
  return dist;
}

}  // namespace xc::oracles
