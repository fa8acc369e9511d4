#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "clawham/finite_graph.hpp"
#include "clawham/oracle.hpp"

namespace testing {

using namespace clawham;

inline NamedGraph cycle_graph(int n, const std::string& prefix = "c") {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  for (int i = 0; i < n; ++i) e.emplace_back(v[i], v[(i + 1) % n]);
  return make_named_graph(v, e);
}

inline NamedGraph complete_graph(int n) {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i) v.push_back("k" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(v[i], v[j]);
  return make_named_graph(v, e);
}

/// Plain breadth-first distances from x, up to depth.
inline std::map<VertexId, std::size_t> bfs(const GraphOracle& o, const VertexSet& x, std::size_t depth) {
  std::map<VertexId, std::size_t> dist;
  std::deque<VertexId> q;
  for (const auto& v : x) {
    dist[v] = 0;
    q.push_back(v);
  }
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    if (dist[v] == depth) continue;
    for (const auto& w : o.neighbors(v))
      if (dist.emplace(w, dist[v] + 1).second) q.push_back(w);
  }
  return dist;
}

inline bool adjacent(const GraphOracle& o, const VertexId& a, const VertexId& b) {
  const auto nb = o.neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

inline nlohmann::json blowup_spec(const std::string& kind, int n, int k = 2) {
  return {{"base", {{"kind", kind}, {"n", n}}},
          {"transforms", nlohmann::json::array({{{"op", "line_graph"}}, {{"op", "blow_up"}, {"k", k}}})}};
}

}  // namespace testing
