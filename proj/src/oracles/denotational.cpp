#include <algorithm>
#include <map>
#include <stdexcept>

#include "xc/oracles/oracles.hpp"

namespace xc::oracles {

DenotationalResult oracle_denotational(const sim::Trace& structure, const ExprPtr& program,
                                       const EvalOptions& opts) {
  const auto& events = structure.events;
  std::map<sim::EventId, size_t> index;
  for (size_t i = 0; i < events.size(); ++i) index[events[i].id] = i;
  std::vector<std::vector<size_t>> preds(events.size());
  std::vector<int> indeg(events.size(), 0);
  std::vector<std::vector<size_t>> out(events.size());
  for (const auto& [src, dst] : structure.edges) {
    auto s = index.find(src);
    auto t = index.find(dst);
    if (s == index.end() || t == index.end())
      throw std::invalid_argument("edge references an unknown event");
    preds[t->second].push_back(s->second);
    out[s->second].push_back(t->second);
    ++indeg[t->second];
  }

  std::vector<size_t> ready;
  for (size_t i = 0; i < events.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());

  DenotationalResult res;
  res.results.resize(events.size());
  std::vector<TreePtr> trees(events.size());
  size_t done = 0;
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    size_t i = ready.back();
    ready.pop_back();
    ++done;

    TreeEnv::Items items;
    for (size_t p : preds[i])
      if (trees[p]) items.emplace_back(events[p].device, trees[p]);
    TreeEnv env(std::move(items));
    try {
      EvalResult r = evaluate(events[i].device, env, structure.sensors[i], program, opts);
      trees[i] = r.tree;
      res.results[i] = std::move(r.value);
    } catch (const EvalError&) {
      res.results[i] = std::nullopt;
    }

    for (size_t nxt : out[i])
      if (--indeg[nxt] == 0) {
        ready.push_back(nxt);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
  }
  if (done != events.size())
    throw std::invalid_argument("cyclic messaging relation is not a valid event structure");
  return res;
}

std::vector<sim::EventId> denotational_disagreements(const sim::Trace& structure,
                                                     const DenotationalResult& oracle) {
  std::vector<sim::EventId> bad;
  for (size_t i = 0; i < structure.events.size(); ++i) {
    const auto& got = structure.results[i];
    const auto& want = oracle.results[i];
    bool same = got.has_value() == want.has_value() && (!got || *got == *want);
    if (!same) bad.push_back(structure.events[i].id);
  }
  return bad;
}

}  // namespace xc::oracles
