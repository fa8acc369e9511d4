#include "clawham/finite_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>

#include "clawham/errors.hpp"

namespace clawham {

FiniteGraph::FiniteGraph(const VertexSet& vertices, const std::vector<Edge>& edges,
                         const VertexSet& clipped)
    : vertices_(vertices.begin(), vertices.end()) {
  build(edges, clipped);
}

FiniteGraph::FiniteGraph(std::vector<VertexId> vertices, const std::vector<Edge>& edges,
                         const VertexSet& clipped)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  build(edges, clipped);
}

void FiniteGraph::build(const std::vector<Edge>& edges, const VertexSet& clipped) {
  adj_.assign(vertices_.size(), {});
  for (const Edge& e : edges) {
    const Index i = index_of(e.a);
    const Index j = index_of(e.b);
    if (i == j) throw InputError("loop at vertex " + plain_token(e.a));
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  if (!clipped.empty()) {
    clipped_.assign(vertices_.size(), false);
    for (const VertexId& v : clipped) clipped_[index_of(v)] = true;
  }
}

std::size_t FiniteGraph::size() const {
  std::size_t twice = 0;
  for (const auto& list : adj_) twice += list.size();
  return twice / 2;
}

bool FiniteGraph::has_clipped() const {
  return std::find(clipped_.begin(), clipped_.end(), true) != clipped_.end();
}

std::optional<FiniteGraph::Index> FiniteGraph::find(const VertexId& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<Index>(it - vertices_.begin());
}

FiniteGraph::Index FiniteGraph::index_of(const VertexId& v) const {
  if (auto i = find(v)) return *i;
  throw InputError("unknown vertex " + plain_token(v));
}

bool FiniteGraph::adjacent_index(Index i, Index j) const {
  const auto& list = adj_[i];
  return std::binary_search(list.begin(), list.end(), j);
}

bool FiniteGraph::adjacent(const VertexId& u, const VertexId& v) const {
  return adjacent_index(index_of(u), index_of(v));
}

std::vector<VertexId> FiniteGraph::neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  for (Index j : adj_[index_of(v)]) out.push_back(vertices_[j]);
  return out;
}

std::vector<Edge> FiniteGraph::edges() const {
  std::vector<Edge> out;
  for (Index i = 0; i < adj_.size(); ++i)
    for (Index j : adj_[i])
      if (i < j) out.emplace_back(vertices_[i], vertices_[j]);
  return out;
}

FiniteGraph induced_subgraph(const FiniteGraph& g, const VertexSet& x) {
  std::vector<bool> keep(g.order(), false);
  for (const VertexId& v : x) keep[g.index_of(v)] = true;
  std::vector<Edge> edges;
  for (FiniteGraph::Index i = 0; i < g.order(); ++i) {
    if (!keep[i]) continue;
    for (FiniteGraph::Index j : g.adjacency(i))
      if (i < j && keep[j]) edges.emplace_back(g.vertex(i), g.vertex(j));
  }
  return FiniteGraph(x, edges);
}

VertexSet neighborhood(const FiniteGraph& g, const VertexSet& x, std::size_t i) {
  std::vector<std::size_t> dist(g.order(), SIZE_MAX);
  std::deque<FiniteGraph::Index> queue;
  for (const VertexId& v : x) {
    const auto idx = g.index_of(v);
    dist[idx] = 0;
    queue.push_back(idx);
  }
  VertexSet out = x;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (dist[u] == i) continue;
    for (auto w : g.adjacency(u)) {
      if (dist[w] != SIZE_MAX) continue;
      dist[w] = dist[u] + 1;
      out.insert(g.vertex(w));
      queue.push_back(w);
    }
  }
  return out;
}

EdgeSet cut(const FiniteGraph& g, const VertexSet& m) {
  std::vector<bool> in(g.order(), false);
  for (const VertexId& v : m) in[g.index_of(v)] = true;
  EdgeSet out;
  for (FiniteGraph::Index i = 0; i < g.order(); ++i) {
    if (!in[i]) continue;
    for (auto j : g.adjacency(i))
      if (!in[j]) out.emplace(g.vertex(i), g.vertex(j));
  }
  return out;
}

VertexSet boundary(const FiniteGraph& g, const VertexSet& x) {
  std::vector<bool> in(g.order(), false);
  for (const VertexId& v : x) in[g.index_of(v)] = true;
  VertexSet out;
  for (const VertexId& v : x) {
    const auto i = g.index_of(v);
    for (auto j : g.adjacency(i)) {
      if (!in[j]) {
        out.insert(v);
        break;
      }
    }
  }
  return out;
}

std::vector<VertexSet> components(const FiniteGraph& g) {
  std::vector<VertexSet> out;
  std::vector<bool> seen(g.order(), false);
  for (FiniteGraph::Index s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    VertexSet part;
    std::deque<FiniteGraph::Index> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      part.insert(g.vertex(u));
      for (auto w : g.adjacency(u)) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    out.push_back(std::move(part));
  }
  // Vertices are sorted, so the first unseen vertex is each part's minimum.
  return out;
}

bool is_connected(const FiniteGraph& g) { return components(g).size() <= 1; }

std::vector<VertexId> articulation_points(const FiniteGraph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> disc(n, 0), low(n, 0);
  std::vector<bool> is_cut(n, false);
  std::size_t timer = 0;
  // Iterative DFS (Hopcroft-Tarjan lowpoints).
  struct Frame {
    FiniteGraph::Index v;
    FiniteGraph::Index parent;
    std::size_t next;
    std::size_t children;
  };
  for (FiniteGraph::Index root = 0; root < n; ++root) {
    if (disc[root]) continue;
    std::vector<Frame> stack{{root, root, 0, 0}};
    disc[root] = low[root] = ++timer;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& adj = g.adjacency(f.v);
      if (f.next < adj.size()) {
        const auto w = adj[f.next++];
        if (!disc[w]) {
          ++f.children;
          disc[w] = low[w] = ++timer;
          stack.push_back({w, f.v, 0, 0});
        } else if (w != f.parent) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children > 1) is_cut[done.v] = true;
      } else {
        Frame& parent = stack.back();
        low[parent.v] = std::min(low[parent.v], low[done.v]);
        if (parent.v != root && low[done.v] >= disc[parent.v]) is_cut[parent.v] = true;
      }
    }
  }
  std::vector<VertexId> out;
  for (FiniteGraph::Index i = 0; i < n; ++i)
    if (is_cut[i]) out.push_back(g.vertex(i));
  return out;
}

bool is_two_connected(const FiniteGraph& g) {
  return g.order() >= 3 && is_connected(g) && articulation_points(g).empty();
}

nlohmann::json to_json(const FiniteGraph& g, const Namer& namer) {
  std::vector<std::string> vertices;
  for (const auto& v : g.vertices()) vertices.push_back(namer(v));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const Edge& e : g.edges()) {
    auto a = namer(e.a), b = namer(e.b);
    if (b < a) std::swap(a, b);
    edges.emplace_back(std::move(a), std::move(b));
  }
  std::sort(vertices.begin(), vertices.end());
  std::sort(edges.begin(), edges.end());
  nlohmann::json doc;
  doc["vertices"] = vertices;
  doc["edges"] = nlohmann::json::array();
  for (auto& [a, b] : edges) doc["edges"].push_back({a, b});
  return doc;
}

Namer NamedGraph::namer() const {
  auto table = std::make_shared<const std::vector<std::string>>(names);
  return [table](const VertexId& v) {
    if (v.size() != 1 || v.word(0) >= table->size()) return plain_token(v);
    return (*table)[v.word(0)];
  };
}

VertexId NamedGraph::id(const std::string& token) const {
  auto it = std::lower_bound(names.begin(), names.end(), token);
  if (it == names.end() || *it != token) throw InputError("unknown vertex token '" + token + "'");
  return VertexId(static_cast<std::uint64_t>(it - names.begin()));
}

NamedGraph make_named_graph(const std::vector<std::string>& vertices,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
  NamedGraph out;
  out.names = vertices;
  std::sort(out.names.begin(), out.names.end());
  if (std::adjacent_find(out.names.begin(), out.names.end()) != out.names.end())
    throw InputError("duplicate vertex token");
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < out.names.size(); ++i) ids.emplace_back(i);
  std::vector<Edge> list;
  for (const auto& [a, b] : edges) {
    if (a == b) throw InputError("loop at vertex '" + a + "'");
    list.emplace_back(out.id(a), out.id(b));
  }
  out.graph = FiniteGraph(std::move(ids), list);
  return out;
}

NamedGraph named_graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
      !doc["vertices"].is_array() || !doc["edges"].is_array())
    throw InputError("graph JSON needs 'vertices' and 'edges' arrays");
  std::vector<std::string> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw InputError("vertex tokens must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw InputError("edges must be pairs of vertex tokens");
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return make_named_graph(vertices, edges);
}

}  // namespace clawham
