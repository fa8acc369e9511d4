#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "clawham/cycle.hpp"
#include "clawham/oracle.hpp"
#include "clawham/tuples.hpp"
#include "clawham/workspace.hpp"
#include "json.hpp"

namespace clawham {

struct RunParams {
  std::size_t stages = 4;
  /// Search radius cap for the starting cycle and inside components.
  std::size_t cap = 16;
  /// Ends followed for the nesting checks, taken from the first stage.
  std::size_t sampled_ends = 8;
  /// Stages with more steps record only their count.
  std::size_t step_limit = 1'000'000;

  /// Throws InputError when stages or cap are out of range.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Shortest cycle through the root, smallest such cycle in canonical order.
/// Throws ResourceCapExceeded when none is found within distance cap of the
/// root and HypothesisViolation when the graph has no cycle through it.
std::vector<Vid> initial_cycle_dense(Workspace& ws, std::size_t cap);
OrientedCycle initial_cycle(const GraphOracle& o, std::size_t cap = 16);

/// Extends cb until it contains N_3 of the vertices of `a`, absorbing
/// vertices in breadth-first order.
void bootstrap_dense(Workspace& ws, CycleBuilder& cb, std::span<const Vid> a, const StepSink& sink = {});
OrientedCycle bootstrap(const GraphOracle& o, const OrientedCycle& a);

struct RunSummary {
  bool ok = false;
  int exit_code = 1;
  std::size_t stages_completed = 0;
  std::vector<std::size_t> k;
  std::vector<std::size_t> cycle_lengths;
  std::size_t sampled_ends = 0;
  std::string error;
  /// Per stage: index, ok, the named checks and the separator report.
  nlohmann::json stage_reports = nlohmann::json::array();
  nlohmann::json to_json() const;
};

/// Runs the staged construction, verifies each stage as it is produced and
/// streams the trace. A failing stage ends the run; the trace is closed with
/// the stages completed so far.
RunSummary run(OraclePtr o, const nlohmann::json& spec, const RunParams& p, std::ostream& trace,
               std::ostream* log = nullptr);

struct VerifySummary {
  bool ok = true;
  std::size_t stages = 0;
  std::vector<std::size_t> k;
  std::vector<std::size_t> cycle_lengths;
  std::size_t sampled_ends = 0;
  nlohmann::json ends = nlohmann::json::array();
  /// Stage index and failure lines for every failing stage.
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json to_json() const;
};

/// Re-checks every stage of a trace from the recorded data alone. Throws
/// InputError for malformed documents.
VerifySummary verify_trace(std::istream& in);

}  // namespace clawham
