#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clawham/dot.hpp"
#include "clawham/driver.hpp"
#include "clawham/errors.hpp"
#include "clawham/finite.hpp"
#include "clawham/forbidden.hpp"
#include "clawham/trace.hpp"
#include "json.hpp"

using namespace clawham;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kCap = 3 };

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

int cmd_check(const std::string& spec_path, std::size_t radius) {
  const json spec = read_json_file(spec_path);
  const auto o = oracle_from_spec(spec);
  const auto r = check_preconditions(*o, radius);
  json report = r.to_json(o->namer());
  report["ok"] = r.ok();
  emit(report);
  std::cerr << o->description() << ": " << (r.ok() ? "all checks pass" : "checks FAILED") << " within radius "
            << radius << "\n";
  return r.ok() ? kPass : kFail;
}

struct RunOptions {
  std::string spec, out = "-";
  RunParams params;
  std::size_t radius = 4;
  bool force = false;
};

int cmd_run(const RunOptions& ro) {
  ro.params.validate();
  const json spec = read_json_file(ro.spec);
  const auto o = oracle_from_spec(spec);
  if (!ro.force) {
    const auto r = check_preconditions(*o, ro.radius);
    if (!r.ok()) {
      json report = {{"ok", false}, {"preconditions", r.to_json(o->namer())}};
      emit(report);
      std::cerr << "preconditions fail; use --force to run anyway\n";
      return kFail;
    }
  }
  RunSummary s;
  if (ro.out == "-") {
    s = run(o, spec, ro.params, std::cout, &std::cerr);
  } else {
    std::ofstream out(ro.out, std::ios::binary);
    if (!out) throw InputError("cannot write " + ro.out);
    s = run(o, spec, ro.params, out, &std::cerr);
    out.close();
    if (!out) throw InputError("failed writing " + ro.out);
    emit(s.to_json());
  }
  std::cerr << (s.ok ? "run complete" : "run stopped: " + s.error) << "\n";
  return s.exit_code;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  const auto v = verify_trace(in);
  emit(v.to_json());
  std::cerr << v.stages << " stages " << (v.ok ? "verified" : "FAILED verification") << "\n";
  return v.ok ? kPass : kFail;
}

int cmd_finite(const std::string& path, const std::string& mode) {
  const NamedGraph ng = named_graph_from_json(read_json_file(path));
  const auto& g = ng.graph;
  const auto namer = ng.namer();
  auto tokens = [&](const OrientedCycle& c) {
    json a = json::array();
    for (const auto& v : c.sequence()) a.push_back(namer(v));
    return a;
  };
  json report = {{"order", g.order()}, {"size", g.size()}, {"mode", mode}};
  const auto m = MaskGraph::from(g);
  report["two_connected"] = is_two_connected(m);
  report["claw_free"] = is_claw_free(m);
  report["paw_free"] = is_paw_free(m);
  report["paws_satisfy_phi"] = paws_satisfy_phi(m);
  report["class"] = graph_class_name(classify(m));
  if (g.order() <= 12) report["spectrum"] = cycle_length_spectrum(g);

  int code = kPass;
  std::optional<bool> brute_verdict;
  if (mode != "extension") {
    const auto c = brute_force_hamilton(g);
    brute_verdict = c.has_value();
    report["hamiltonian"] = *brute_verdict;
    report["brute_cycle"] = c ? tokens(*c) : json(nullptr);
  }
  if (mode != "brute") {
    try {
      const auto c = finite_hamilton_by_extension(g);
      const auto check = validate_cycle(g, c);
      const bool spans = c.length() == g.order();
      report["extension_cycle"] = tokens(c);
      report["extension_valid"] = check.ok && spans;
      if (!check.ok || !spans) code = kFail;
      if (brute_verdict && !*brute_verdict) code = kFail;
    } catch (const HypothesisViolation& e) {
      report["extension_error"] = e.what();
      code = kFail;
    } catch (const InvariantViolation& e) {
      report["extension_error"] = std::string("engine dead end: ") + e.what();
      code = kFail;
    }
  }
  if (mode == "both") report["agree"] = code == kPass;
  emit(report);
  std::cerr << "finite " << mode << ": " << (code == kPass ? "ok" : "failure or hypothesis violation") << "\n";
  return code;
}

int cmd_export_dot(const std::string& spec_path, const std::string& trace_path, std::size_t radius) {
  OraclePtr o;
  std::vector<VertexId> cycle;
  if (!trace_path.empty()) {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw InputError("cannot open " + trace_path);
    std::unique_ptr<Workspace> ws;
    TraceHandlers h;
    h.on_spec = [&](const json& spec) -> Workspace& {
      o = oracle_from_spec(spec);
      ws = std::make_unique<Workspace>(o);
      return *ws;
    };
    h.on_params = [](const json&) {};
    h.on_stage = [&](StageData&& d, const json&, const json&) {
      cycle.clear();
      for (Vid v : d.cycle) cycle.push_back(ws->id(v));
    };
    h.on_tail = [](const std::string&, const json&) {};
    read_trace(in, h);
    if (!o) throw InputError("trace has no graph spec");
  } else {
    o = oracle_from_spec(read_json_file(spec_path));
  }
  std::cout << export_dot(*o, radius, cycle, cycle);
  std::cerr << "exported radius " << radius << (cycle.empty() ? "" : " around the last cycle") << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton cycles and circles in claw-free graphs"};
  app.require_subcommand(1);

  std::string spec, trace, graph, mode = "both";
  std::size_t radius = 4;
  auto* check = app.add_subcommand("check", "Check claw-freeness, the paw condition and 2-connectivity");
  check->add_option("--spec", spec, "graph spec JSON file")->required();
  check->add_option("--radius", radius, "ball radius")->capture_default_str();

  RunOptions ro;
  auto* runc = app.add_subcommand("run", "Run the staged construction and write a trace");
  runc->add_option("--spec", ro.spec, "graph spec JSON file")->required();
  runc->add_option("--stages", ro.params.stages, "number of umbrella stages after the first cycle")
      ->capture_default_str();
  runc->add_option("--cap", ro.params.cap, "search radius cap (at least 4)")->capture_default_str();
  runc->add_option("--out", ro.out, "trace file, - for standard output")->capture_default_str();
  runc->add_option("--radius", ro.radius, "radius of the precondition check")->capture_default_str();
  runc->add_option("--sampled-ends", ro.params.sampled_ends, "ends followed by the nesting checks")
      ->capture_default_str();
  runc->add_option("--step-limit", ro.params.step_limit, "steps recorded per stage")->capture_default_str();
  runc->add_flag("--force", ro.force, "skip the precondition check");

  auto* verify = app.add_subcommand("verify", "Re-check every stage of a trace");
  verify->add_option("--trace", trace, "trace JSON file")->required();

  auto* finite = app.add_subcommand("finite", "Hamilton cycle of a finite graph");
  finite->add_option("--graph", graph, "graph JSON file")->required();
  finite->add_option("--mode", mode, "brute, extension or both")
      ->check(CLI::IsMember({"brute", "extension", "both"}))
      ->capture_default_str();

  std::string dot_spec, dot_trace;
  std::size_t dot_radius = 2;
  auto* dot = app.add_subcommand("export-dot", "Render a ball of the graph as DOT");
  auto* dot_spec_opt = dot->add_option("--spec", dot_spec, "graph spec JSON file");
  auto* dot_trace_opt = dot->add_option("--trace", dot_trace, "trace whose last cycle is drawn");
  dot_spec_opt->excludes(dot_trace_opt);
  dot->add_option("--radius", dot_radius, "ball radius")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInput;
  }

  auto fail = [](const char* kind, const std::exception& e, int code) {
    emit({{"ok", false}, {"error", e.what()}, {"kind", kind}});
    std::cerr << kind << " error: " << e.what() << "\n";
    return code;
  };
  try {
    if (*check) return cmd_check(spec, radius);
    if (*runc) return cmd_run(ro);
    if (*verify) return cmd_verify(trace);
    if (*finite) return cmd_finite(graph, mode);
    if (*dot) {
      if (dot_spec.empty() && dot_trace.empty()) throw InputError("export-dot needs --spec or --trace");
      return cmd_export_dot(dot_spec, dot_trace, dot_radius);
    }
  } catch (const InputError& e) {
    return fail("input", e, kInput);
  } catch (const json::exception& e) {
    return fail("input", e, kInput);
  } catch (const ResourceCapExceeded& e) {
    return fail("resource cap", e, kCap);
  } catch (const std::exception& e) {
    return fail("semantic", e, kFail);
  }
  return kFail;
}
