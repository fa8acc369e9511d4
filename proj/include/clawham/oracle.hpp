#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "clawham/finite_graph.hpp"
#include "clawham/vertex.hpp"
#include "json.hpp"

namespace clawham {

/// Lazy presentation of a locally finite graph.
///
/// Every oracle also carries a level function with two properties that the
/// infinity certificate relies on: each level class is finite, and (for
/// infinite oracles) every vertex has a neighbour of strictly larger level.
/// Trees use the depth below their root; transforms derive their levels from
/// the base.
class GraphOracle {
 public:
  virtual ~GraphOracle() = default;

  /// Appends the neighbours of v in ascending VertexId order.
  virtual void neighbors_into(const VertexId& v, std::vector<VertexId>& out) const = 0;
  std::vector<VertexId> neighbors(const VertexId& v) const;

  virtual std::vector<VertexId> roots() const = 0;
  virtual bool is_finite() const = 0;
  virtual std::uint32_t level(const VertexId& v) const = 0;
  virtual std::string token(const VertexId& v) const = 0;
  /// Throws InputError for malformed tokens or vertices not in the graph.
  virtual VertexId parse_token(std::string_view token) const = 0;
  virtual bool valid(const VertexId& v) const = 0;
  /// Number of coordinate words in every vertex identifier.
  virtual std::size_t word_count() const = 0;
  /// 0 for a tree, 1 for the line graph of a tree, 2 for anything else.
  /// Blow-ups inherit the class of their base.
  virtual int tree_class() const = 0;
  /// True when 2-connectivity holds by construction (blow-ups with k >= 2 of
  /// connected graphs), not only inside a sampled ball.
  virtual bool analytic_two_connected() const = 0;
  virtual std::string description() const = 0;

  /// Vertices in the same component of G - F are joined inside G - F by a
  /// path whose levels stay below the larger endpoint level. Holds for trees,
  /// their line graphs and blow-ups of both.
  bool tree_like() const { return !is_finite() && tree_class() <= 1; }

  Namer namer() const {
    return [this](const VertexId& v) { return token(v); };
  }
};

using OraclePtr = std::shared_ptr<const GraphOracle>;

/// Non-owning handle for APIs that take an oracle by reference.
OraclePtr borrow(const GraphOracle& o);

/// n rays glued at a centre.
OraclePtr tree_S(int n);
/// Spine double ray; every spine vertex carries n-2 pendant rays.
OraclePtr tree_D(int n);
/// n-regular tree.
OraclePtr tree_T(int n);
OraclePtr line_graph(OraclePtr base);
OraclePtr blow_up(OraclePtr base, int k);
OraclePtr finite_as_oracle(NamedGraph g);
OraclePtr finite_as_oracle(const FiniteGraph& g);

/// Builds an oracle from graph-spec JSON:
/// {"base":{"kind":"S"|"D"|"T","n":int} or {"kind":"finite","graph":{...}},
///  "transforms":[{"op":"line_graph"} | {"op":"blow_up","k":int}, ...]}
OraclePtr oracle_from_spec(const nlohmann::json& spec);

/// Induced subgraph on N_r(x). Vertices whose neighbourhood leaves the ball
/// are marked clipped.
FiniteGraph ball(const GraphOracle& o, const VertexSet& x, std::size_t r);

/// Exact test whether the component of v in G - s is infinite.
bool is_infinite_component(const GraphOracle& o, const VertexSet& s, const VertexId& v);

/// One infinite component of G - separator, named by its smallest vertex
/// adjacent to the separator.
struct EndDescriptor {
  std::shared_ptr<const VertexSet> separator;
  VertexId anchor;

  /// Descriptors of G - bigger lying inside this component.
  std::vector<EndDescriptor> refine(const GraphOracle& o, const VertexSet& bigger) const;
};

/// All infinite components of G - s, ordered by anchor.
std::vector<EndDescriptor> end_descriptors(const GraphOracle& o, const VertexSet& s);

/// Maps the anchor of every descriptor of G - s_bigger to the anchor of the
/// descriptor of G - s containing it. Throws InputError unless s is a subset
/// of s_bigger.
std::map<VertexId, VertexId> end_refinement(const GraphOracle& o, const VertexSet& s,
                                            const VertexSet& s_bigger);

}  // namespace clawham
