#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "clawham/vertex.hpp"

namespace clawham {

/// Explicit simple undirected graph. Immutable once built.
///
/// Vertices are kept sorted; adjacency lists hold local indices in ascending
/// vertex order, so every traversal in the library is deterministic.
/// A graph cut out of a larger host (a ball) may mark vertices as clipped:
/// their neighbourhood in the host is not fully present here.
class FiniteGraph {
 public:
  using Index = std::uint32_t;

  FiniteGraph() = default;

  /// Builds from a vertex set and an edge list. Throws InputError on loops
  /// or endpoints outside the vertex set; parallel edges collapse.
  FiniteGraph(const VertexSet& vertices, const std::vector<Edge>& edges,
              const VertexSet& clipped = {});
  FiniteGraph(std::vector<VertexId> vertices, const std::vector<Edge>& edges,
              const VertexSet& clipped = {});

  std::size_t order() const { return vertices_.size(); }
  std::size_t size() const;  // number of edges
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const VertexId& vertex(Index i) const { return vertices_[i]; }
  const std::vector<Index>& adjacency(Index i) const { return adj_[i]; }
  bool clipped(Index i) const { return !clipped_.empty() && clipped_[i]; }
  bool has_clipped() const;

  std::optional<Index> find(const VertexId& v) const;
  Index index_of(const VertexId& v) const;  // throws InputError naming the vertex
  bool contains(const VertexId& v) const { return find(v).has_value(); }
  bool adjacent(const VertexId& u, const VertexId& v) const;
  bool adjacent_index(Index i, Index j) const;
  std::vector<VertexId> neighbors(const VertexId& v) const;
  std::size_t degree(const VertexId& v) const { return adj_[index_of(v)].size(); }
  std::vector<Edge> edges() const;

  VertexSet vertex_set() const { return {vertices_.begin(), vertices_.end()}; }

 private:
  void build(const std::vector<Edge>& edges, const VertexSet& clipped);

  std::vector<VertexId> vertices_;
  std::vector<std::vector<Index>> adj_;
  std::vector<bool> clipped_;
};

/// G[X]. Throws InputError for a vertex of x outside g.
FiniteGraph induced_subgraph(const FiniteGraph& g, const VertexSet& x);

/// N_i(X): vertices at distance at most i from x (x included).
VertexSet neighborhood(const FiniteGraph& g, const VertexSet& x, std::size_t i);

/// delta(M): edges with exactly one endpoint in m.
EdgeSet cut(const FiniteGraph& g, const VertexSet& m);

/// Vertices of x with a neighbour outside x.
VertexSet boundary(const FiniteGraph& g, const VertexSet& x);

/// Connected components ordered by their smallest vertex.
std::vector<VertexSet> components(const FiniteGraph& g);

bool is_connected(const FiniteGraph& g);

/// Cut vertices, ascending.
std::vector<VertexId> articulation_points(const FiniteGraph& g);

/// At least three vertices, connected, no cut vertex.
bool is_two_connected(const FiniteGraph& g);

/// {"vertices": [...], "edges": [[a,b],...]}, tokens via namer, arrays sorted.
nlohmann::json to_json(const FiniteGraph& g, const Namer& namer = plain_token);

/// Finite graph read from JSON together with its token table: vertex i of the
/// graph is VertexId(i) and carries the i-th smallest token.
struct NamedGraph {
  FiniteGraph graph;
  std::vector<std::string> names;

  Namer namer() const;
  VertexId id(const std::string& token) const;  // throws InputError
};

NamedGraph named_graph_from_json(const nlohmann::json& doc);

/// Convenience for tests and tools: vertices named by the given tokens.
NamedGraph make_named_graph(const std::vector<std::string>& vertices,
                            const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace clawham
