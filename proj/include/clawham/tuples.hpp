#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clawham/cycle.hpp"
#include "clawham/extension.hpp"
#include "clawham/separators.hpp"
#include "json.hpp"

namespace clawham {

struct TupleOptions {
  /// Largest search radius inside a component (path searches and grow-in).
  std::size_t cap = 16;
};

enum class Phase : std::uint8_t { K0, Promising, GrowIn, Good, Bootstrap };
std::string_view phase_name(Phase p);

/// One cycle operation, handed to the step sink as it happens.
struct TraceStep {
  enum class Op : std::uint8_t { Extension, PathReplacement, Reroute };
  Phase phase = Phase::K0;
  Op op = Op::Extension;
  DenseRecord rec;
  /// Path replacement: the cycle edge a-b gets the interior `inner`.
  /// Reroute: a is the removed S-vertex r, b the kept one s; `removed` lists
  /// the dropped interior, `inner` the new w-s interior.
  Vid a = kNoVid, b = kNoVid;
  std::vector<Vid> removed;
  std::vector<Vid> inner;
  /// Good phase: part memberships of v and w after the update.
  const std::vector<std::uint32_t>* parts_v = nullptr;
  const std::vector<std::uint32_t>* parts_w = nullptr;
};
using StepSink = std::function<void(const TraceStep&)>;

struct TupleStats {
  std::array<std::size_t, 4> steps{};         // per phase
  std::array<std::size_t, 3> kinds{};         // per extension kind
  std::size_t case1 = 0, subcase21 = 0, subcase222 = 0, case3 = 0;
  std::size_t vprime_steps = 0;
  std::size_t converted_to_type1 = 0;
  std::size_t vertices_removed = 0;
  std::size_t grow_radius = 3;
  std::vector<std::string> notes;
  nlohmann::json to_json() const;
};

using CutPair = std::array<std::pair<Vid, Vid>, 2>;

/// Vid-indexed values with O(1) reset.
class StampMap {
 public:
  void reset();
  bool has(Vid v) const { return v < gen_.size() && gen_[v] == cur_; }
  std::uint32_t get(Vid v) const { return val_[v]; }
  void set(Vid v, std::uint32_t x);

 private:
  std::vector<std::uint32_t> gen_, val_;
  std::uint32_t cur_ = 1;
};

/// Working state of the three constructions for one umbrella. The cycle is
/// modified in place.
class TupleBuilder {
 public:
  /// `reference` is the cycle whose far edges must survive; the current
  /// cycle when empty.
  TupleBuilder(Workspace& ws, const DenseUmbrella& u, BlockLabels& labels, CycleBuilder& cycle, TupleOptions opt,
               StepSink sink = {}, std::span<const Vid> reference = {});

  void extend_to_k0();
  void build_promising();
  void build_good();

  /// Part indices whose M-set contains v.
  std::vector<std::uint32_t> parts_of(Vid v);
  const std::unordered_map<Vid, std::vector<std::uint32_t>>& overrides() const { return overrides_; }
  /// The two cycle edges crossing each delta(M_j), recomputed from scratch.
  /// Throws InvariantViolation when a cut is not met exactly twice.
  std::vector<CutPair> crossing_edges();
  const TupleStats& stats() const { return stats_; }

 private:
  void parts_into(Vid v, std::vector<std::uint32_t>& out);
  void set_parts(Vid v, std::vector<std::uint32_t> parts);
  void reset_counters();
  void count_edge(Vid a, Vid b, int delta);
  void count_vertex(Vid v, int delta);
  void mark_dirty(std::uint32_t r);
  EdgeChange apply(const DenseRecord& rec);
  void emit_extension(const DenseRecord& rec);
  void insert_path(Vid a, Vid b, const std::vector<Vid>& inner);
  void remove_vertex(Vid z);
  std::vector<Vid> shortest_inner_path(Vid from, Vid to, std::int32_t label);
  DenseRecord must_find(Vid v, const DenseFilters& f, const char* context);

  void process_part(std::uint32_t j);
  void vprime_step(std::uint32_t j, Vid v);
  void grow_in(std::uint32_t i);
  void check_dirty(const char* context);
  void check_edge_stability(const char* context);
  [[noreturn]] void fail(const std::string& msg);

  Workspace& ws_;
  const DenseUmbrella& u_;
  BlockLabels& labels_;
  CycleBuilder& c_;
  TupleOptions opt_;
  StepSink sink_;
  Phase phase_ = Phase::K0;
  TupleStats stats_;

  std::vector<std::pair<Vid, Vid>> stable_edges_;
  std::vector<std::uint8_t> in_i_;
  std::vector<std::int32_t> cross_, s_on_, k_on_, s_edges_;
  std::vector<std::uint32_t> dirty_;
  std::vector<std::uint8_t> dirty_flag_;
  std::unordered_map<Vid, std::vector<std::uint32_t>> overrides_;
  std::array<std::vector<std::uint32_t>, 2> edge_parts_;
  StampMap dist_, parent_, need_;
};

// Public forms over VertexIds.

struct PromisingTuple {
  OrientedCycle d;
  /// S_j per part; M_j = S_j plus the component K_j of the umbrella.
  std::vector<VertexSet> s;
};

struct PartDelta {
  VertexSet added;
  VertexSet removed;
};

struct GoodTuple {
  OrientedCycle d;
  /// N_j relative to the baseline S_j plus V(K_j).
  std::vector<PartDelta> delta;
};

OrientedCycle extend_to_k0(const GraphOracle& o, const OrientedCycle& c, const Umbrella& u,
                           const TupleOptions& opt = {});
PromisingTuple build_promising(const GraphOracle& o, const OrientedCycle& c, const Umbrella& u,
                               const TupleOptions& opt = {});
GoodTuple build_good(const GraphOracle& o, const PromisingTuple& p, const Umbrella& u, const OrientedCycle& c_orig,
                     const TupleOptions& opt = {});

}  // namespace clawham
