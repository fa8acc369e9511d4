#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "clawham/extension.hpp"
#include "clawham/separators.hpp"
#include "clawham/tuples.hpp"
#include "clawham/workspace.hpp"
#include "json.hpp"

namespace clawham {

/// One recorded cycle operation with owned data.
struct StepRecord {
  Phase phase = Phase::Bootstrap;
  TraceStep::Op op = TraceStep::Op::Extension;
  DenseRecord rec;
  Vid a = kNoVid, b = kNoVid;
  std::vector<Vid> removed, inner;
  bool has_parts = false;
  std::vector<std::uint32_t> parts_v, parts_w;

  static StepRecord from(const TraceStep& st);
};

struct PartRecord {
  std::vector<Vid> s;  // canonical order
  Vid anchor = kNoVid;
  std::vector<Vid> add, remove;
  CutPair cut{};
};

/// Everything a stage contributes to the trace, over workspace ids.
struct StageData {
  std::size_t index = 0;
  /// Stage 0: the starting cycle A.
  std::vector<Vid> initial;
  bool steps_recorded = true;
  std::size_t step_count = 0;
  std::vector<StepRecord> steps;
  /// Rotated to start at the smallest vertex; orientation as constructed.
  std::vector<Vid> cycle;
  std::size_t k0_size = 0;
  /// Umbrella sizes as recorded; SIZE_MAX when absent.
  std::size_t recorded_k = SIZE_MAX, blocker_size = SIZE_MAX, base_size = SIZE_MAX;
  std::vector<PartRecord> parts;
  nlohmann::json stats;
};

/// Rotation of a builder's cycle starting at its smallest vertex.
std::vector<Vid> canonical_sequence(const Workspace& ws, const CycleBuilder& c);

/// Stage-by-stage verification of the finite conditions on a sequence of
/// stages. Holds the history it needs; feed stages in order.
class StageChecker {
 public:
  StageChecker(Workspace& ws, std::size_t sampled_ends);
  ~StageChecker();

  nlohmann::json check(const StageData& d);
  bool all_ok() const { return all_ok_; }
  const std::vector<std::size_t>& k_series() const { return k_; }
  /// Sampled ends with the part chosen at every stage from 1 on.
  nlohmann::json ends_json() const;
  std::size_t sampled_end_count() const { return ends_.size(); }

 private:
  struct History;
  struct Report;

  void check_cycle(const StageData& d, Report& r);
  void replay(const StageData& d, Report& r);
  void check_stage_zero(const StageData& d, Report& r);
  void check_umbrella_stage(const StageData& d, Report& r);
  void check_cuts(const StageData& d, Report& r);
  void check_edge_stability(const StageData& d, Report& r);
  void check_ends(const StageData& d, Report& r);

  Workspace& ws_;
  std::size_t sampled_;
  std::vector<std::unique_ptr<History>> hist_;
  std::vector<Vid> prev_cycle_;
  std::vector<std::size_t> k_;
  std::vector<std::vector<std::uint32_t>> ends_;
  bool all_ok_ = true;
  bool broken_ = false;
};

/// Streams a trace document. Vertices are listed once per stage in a vertex
/// table, as a token or as [p, k] (the k-th neighbour of table entry p), and
/// referenced by table position everywhere else.
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, Workspace& ws);

  void begin(const nlohmann::json& spec, const nlohmann::json& params);
  void stage(const StageData& d, const nlohmann::json& umbrella, const nlohmann::json& verification);
  void end(const nlohmann::json& ends, const nlohmann::json& summary);

 private:
  std::uint32_t id(Vid v) const;
  void assign(const std::vector<Vid>& order, std::string& table);
  void put_id(std::string& s, Vid v) const;
  void put_ids(std::string& s, const std::vector<Vid>& v) const;
  void put_step(std::string& s, const StepRecord& st) const;

  std::ostream& out_;
  Workspace& ws_;
  std::vector<std::uint32_t> ids_;
  std::uint32_t next_ = 0;
  bool first_stage_ = true;
};

/// Callbacks for a streamed trace. `on_spec` must return the workspace the
/// remaining vertices are interned into.
struct TraceHandlers {
  std::function<Workspace&(const nlohmann::json& spec)> on_spec;
  std::function<void(const nlohmann::json& params)> on_params;
  std::function<void(StageData&& d, const nlohmann::json& umbrella, const nlohmann::json& verification)> on_stage;
  std::function<void(const std::string& key, const nlohmann::json& value)> on_tail;
};

/// Parses a trace without materializing it. Throws InputError on malformed
/// documents.
void read_trace(std::istream& in, TraceHandlers& h);

}  // namespace clawham
