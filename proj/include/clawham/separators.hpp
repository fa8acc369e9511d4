#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clawham/oracle.hpp"
#include "clawham/workspace.hpp"
#include "json.hpp"

namespace clawham {

/// Infinite component of G - blocker, seen through the blocker vertices it
/// touches.
struct InfiniteComponentHandle {
  VertexId anchor;
  /// Neighbours of the part inside the component.
  VertexSet attached;
  bool certified_infinite = false;
};

struct UmbrellaPart {
  VertexSet s;
  InfiniteComponentHandle k;
};

/// An X-umbrella with its decomposition: blocker, the finite component K0
/// containing X, and parts (S_i, K_i) ordered by the smallest vertex of S_i.
struct Umbrella {
  VertexSet base;
  VertexSet blocker;
  VertexSet k0;
  std::vector<UmbrellaPart> parts;
  /// False when components were grouped by bounded search (graphs that are
  /// not tree-like).
  bool exact_grouping = true;
};

/// r_0 ... r_length with r_i at distance exactly i from x.
std::vector<VertexId> distance_increasing_ray(const GraphOracle& o, const VertexSet& x, std::size_t length);

/// Throws InputError when G[x] is disconnected or o is finite, and
/// InvariantViolation when the decomposition is inconsistent.
Umbrella compute_umbrella(const GraphOracle& o, const VertexSet& x);

struct SeparatorReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::size_t parts_checked = 0;
  std::size_t blocker_checked = 0;
  nlohmann::json to_json() const;
};

/// Minimality, K0 structure, exclusive adjacency, two components per S_i and
/// complete neighbourhoods of every blocker vertex on both sides.
SeparatorReport check_separator_facts(const GraphOracle& o, const Umbrella& u, std::size_t working_radius);

/// For each part i, N_radius(S_i) intersected with K_i.
std::vector<VertexSet> three_neighborhood_targets(const GraphOracle& o, const Umbrella& u, std::size_t radius = 3);

// Dense forms used by the staged construction.

struct DenseUmbrella {
  struct Part {
    std::vector<Vid> s;         // canonical order
    std::vector<Vid> attached;  // neighbours in K_i, canonical order
    Vid anchor = kNoVid;        // smallest attached vertex
  };
  std::vector<Vid> base;
  std::vector<Vid> blocker;  // canonical order
  std::vector<Vid> k0;       // canonical order
  std::vector<Part> parts;
  bool exact_grouping = true;
};

/// Growable per-vertex byte marks.
class Marks {
 public:
  std::uint8_t get(Vid v) const { return v < m_.size() ? m_[v] : 0; }
  void set(Vid v, std::uint8_t x) {
    if (v >= m_.size()) m_.resize(std::max<std::size_t>(static_cast<std::size_t>(v) + 1, m_.size() * 3 / 2 + 64), 0);
    m_[v] = x;
  }
  void clear() { m_.clear(); }

 private:
  std::vector<std::uint8_t> m_;
};

/// Exact certificate over a workspace: the component of v in G - forbidden is
/// infinite. forbidden_level is the largest level of a forbidden vertex.
bool certify_infinite(Workspace& ws, Vid v, const Marks& forbidden, std::uint32_t forbidden_level);

DenseUmbrella compute_umbrella_dense(Workspace& ws, std::span<const Vid> x);

/// Block labels relative to one umbrella, computed lazily:
/// -1 for K0, 2j for S_j, 2j+1 for K_j.
class BlockLabels {
 public:
  static constexpr std::int32_t kK0 = -1;

  BlockLabels(Workspace& ws, const DenseUmbrella& u);

  std::int32_t label(Vid v);
  /// Part index of S_j or K_j, or -1 for K0.
  std::int32_t part(Vid v) {
    const auto l = label(v);
    return l < 0 ? -1 : l / 2;
  }
  bool in_blocker(Vid v) {
    const auto l = label(v);
    return l >= 0 && l % 2 == 0;
  }
  std::size_t part_count() const { return parts_; }

 private:
  static constexpr std::int32_t kUnknown = INT32_MIN;
  std::int32_t get(Vid v) const { return v < labels_.size() ? labels_[v] : kUnknown; }
  void put(Vid v, std::int32_t l);
  std::int32_t resolve_by_search(Vid v);

  Workspace& ws_;
  std::vector<std::int32_t> labels_;
  std::size_t parts_ = 0;
};

/// Vertices of K_part within distance radius of S_part, in breadth-first
/// order from S_part.
std::vector<Vid> neighborhood_in_component(Workspace& ws, BlockLabels& labels, const DenseUmbrella& u,
                                           std::size_t part, std::size_t radius);

SeparatorReport check_separator_facts_dense(Workspace& ws, const DenseUmbrella& u);

/// Converters between the two forms.
Umbrella to_umbrella(const Workspace& ws, const DenseUmbrella& u);
DenseUmbrella to_dense(Workspace& ws, const Umbrella& u);

}  // namespace clawham
