#pragma once

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clawham/finite_graph.hpp"
#include "clawham/vertex.hpp"

namespace clawham {

/// Cycle of at least three distinct vertices with a fixed orientation.
/// u+ is the next vertex in sequence order, u- the previous one.
class OrientedCycle {
 public:
  OrientedCycle() = default;
  /// Throws InputError for fewer than three vertices or a repeated vertex.
  explicit OrientedCycle(std::vector<VertexId> sequence);

  std::size_t length() const { return seq_.size(); }
  const std::vector<VertexId>& sequence() const { return seq_; }
  bool contains(const VertexId& v) const { return pos_.contains(v); }
  VertexSet vertex_set() const { return {seq_.begin(), seq_.end()}; }
  std::vector<Edge> edges() const;

  const VertexId& successor(const VertexId& u) const;
  const VertexId& predecessor(const VertexId& u) const;

  /// vCw: the v-w path following the orientation, both ends included.
  std::vector<VertexId> segment(const VertexId& v, const VertexId& w) const;

  /// Same cycle rotated to start at its smallest vertex (orientation kept).
  OrientedCycle canonical_rotation() const;

  friend bool operator==(const OrientedCycle& a, const OrientedCycle& b) { return a.seq_ == b.seq_; }

 private:
  std::size_t position(const VertexId& u) const;

  std::vector<VertexId> seq_;
  std::unordered_map<VertexId, std::size_t> pos_;
};

struct CycleCheck {
  bool ok = true;
  /// Offending consecutive pair (non-edge), or the repeated vertex twice.
  std::optional<std::pair<VertexId, VertexId>> witness;
  std::string reason;
};

/// Checks a raw vertex sequence against g: distinct vertices, length >= 3,
/// consecutive pairs (cyclically) adjacent.
CycleCheck validate_cycle(const FiniteGraph& g, const std::vector<VertexId>& sequence);
CycleCheck validate_cycle(const FiniteGraph& g, const OrientedCycle& c);

}  // namespace clawham
