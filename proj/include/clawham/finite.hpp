#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "clawham/cycle.hpp"
#include "clawham/finite_graph.hpp"
#include "json.hpp"

namespace clawham {

enum class GraphClass { Cycle, Clique, CliqueMinusMatching, Other };
std::string_view graph_class_name(GraphClass c);

/// Graph on 0..n-1 as adjacency bitmasks.
struct MaskGraph {
  static constexpr int kMaxOrder = 32;

  int n = 0;
  std::array<std::uint32_t, kMaxOrder> adj{};

  bool has(int i, int j) const { return (adj[i] >> j) & 1u; }
  void add(int i, int j) {
    adj[i] |= 1u << j;
    adj[j] |= 1u << i;
  }
  std::uint32_t all() const { return n == 32 ? ~0u : (1u << n) - 1; }
  int edge_count() const;

  /// Vertex i is the i-th vertex of g. Throws InputError above kMaxOrder.
  static MaskGraph from(const FiniteGraph& g);
  /// Vertex i becomes VertexId(i).
  FiniteGraph to_graph() const;
};

bool is_connected(const MaskGraph& g);
bool is_two_connected(const MaskGraph& g);
bool is_claw_free(const MaskGraph& g);
bool is_paw_free(const MaskGraph& g);
/// Every induced paw a0{a1,b1,b2} has a common neighbour of a1 and some b_i
/// outside the paw.
bool paws_satisfy_phi(const MaskGraph& g);
/// 2-connected, claw-free and every paw satisfies phi.
bool admitted(const MaskGraph& g);

/// Backtracking from vertex 0 in ascending neighbour order, pruning vertices
/// left with fewer than two usable neighbours.
std::optional<std::vector<int>> hamilton_cycle(const MaskGraph& g);
/// Bit l is set when g has a cycle of length l. Subset dynamic programme over
/// paths anchored at their smallest vertex.
std::uint64_t cycle_length_bits(const MaskGraph& g);
GraphClass classify(const MaskGraph& g);

std::optional<OrientedCycle> brute_force_hamilton(const FiniteGraph& g);
/// Throws InputError when g has more than cap vertices.
std::set<int> cycle_length_spectrum(const FiniteGraph& g, std::size_t cap = 12);
GraphClass classify_paw_free(const FiniteGraph& g);

/// Every labelled graph on n vertices passing filter, in increasing order of
/// the edge bitmask over pairs (0,1), (0,2), ..., (n-2,n-1). Throws
/// InputError for n > 7.
void enumerate_small_graphs(int n, const std::function<bool(const MaskGraph&)>& filter,
                            const std::function<void(const MaskGraph&)>& visit);

struct SampleStats {
  std::size_t drawn = 0;
  std::size_t accepted = 0;
};

/// `count` labelled graphs passing filter, drawn by rejection from G(n, p)
/// with p uniform in [p_low, p_high] per draw and n uniform in [n_low,
/// n_high]. Deterministic in the seed.
std::vector<MaskGraph> sample_graphs(int n_low, int n_high, std::size_t count, std::uint64_t seed,
                                     const std::function<bool(const MaskGraph&)>& filter,
                                     SampleStats* stats = nullptr, double p_low = 0.5, double p_high = 0.95);

/// Hamilton cycle grown by extensions from the shortest cycle through the
/// smallest vertex. Throws HypothesisViolation when g is not 2-connected,
/// has a claw or a paw without phi, and InvariantViolation when no extension
/// exists for the smallest vertex next to the cycle.
OrientedCycle finite_hamilton_by_extension(const FiniteGraph& g);

}  // namespace clawham
