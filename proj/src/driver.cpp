#include "clawham/driver.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <memory>

#include "clawham/errors.hpp"
#include "clawham/separators.hpp"
#include "clawham/trace.hpp"

namespace clawham {

void RunParams::validate() const {
  if (cap < 4) throw InputError("cap must be at least 4");
  if (step_limit == 0) throw InputError("step limit must be positive");
}

nlohmann::json RunParams::to_json() const {
  return {{"stages", stages}, {"cap", cap}, {"sampled_ends", sampled_ends}, {"step_limit", step_limit}};
}

std::vector<Vid> initial_cycle_dense(Workspace& ws, std::size_t cap) {
  const auto roots = ws.oracle().roots();
  if (roots.empty()) throw HypothesisViolation("graph has no vertices");
  const Vid r = ws.intern(*std::min_element(roots.begin(), roots.end()));

  // Breadth-first search labelling every vertex with the root neighbour its
  // tree path starts with. An edge between two branches closes a cycle
  // through r of length dist(a) + dist(b) + 1.
  StampMap dist, branch, parent;
  dist.set(r, 0);
  std::deque<Vid> queue{r};
  std::vector<Vid> best;
  auto path_to_root = [&](Vid v) {
    std::vector<Vid> p;
    for (; v != r; v = parent.get(v)) p.push_back(v);
    return p;
  };
  auto lex_less = [&](const std::vector<Vid>& x, const std::vector<Vid>& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                        [&](Vid a, Vid b) { return ws.less(a, b); });
  };
  while (!queue.empty()) {
    const Vid a = queue.front();
    queue.pop_front();
    const auto da = dist.get(a);
    if (!best.empty() && da > best.size() / 2) break;
    if (da > cap) throw ResourceCapExceeded("no cycle through the root within distance " + std::to_string(cap));
    for (Vid b : ws.neighbors(a)) {
      if (!dist.has(b)) {
        dist.set(b, da + 1);
        parent.set(b, a);
        branch.set(b, a == r ? b : branch.get(a));
        queue.push_back(b);
        continue;
      }
      if (a == r || b == r || branch.get(a) == branch.get(b)) continue;
      const std::size_t len = da + dist.get(b) + 1;
      if (!best.empty() && len > best.size()) continue;
      auto pa = path_to_root(a), pb = path_to_root(b);
      std::vector<Vid> cand{r};
      cand.insert(cand.end(), pa.rbegin(), pa.rend());
      cand.insert(cand.end(), pb.begin(), pb.end());
      if (ws.less(cand.back(), cand[1])) std::reverse(cand.begin() + 1, cand.end());
      if (best.empty() || len < best.size() || lex_less(cand, best)) best = std::move(cand);
    }
  }
  if (best.empty()) throw HypothesisViolation("the graph has no cycle through the root");
  return best;
}

OrientedCycle initial_cycle(const GraphOracle& o, std::size_t cap) {
  Workspace ws(borrow(o));
  std::vector<VertexId> seq;
  for (Vid v : initial_cycle_dense(ws, cap)) seq.push_back(ws.id(v));
  return OrientedCycle(std::move(seq));
}

void bootstrap_dense(Workspace& ws, CycleBuilder& cb, std::span<const Vid> a, const StepSink& sink) {
  StampMap dist;
  std::vector<Vid> order;
  for (Vid v : a) {
    dist.set(v, 0);
    order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vid v = order[head];
    if (dist.get(v) == 3) continue;
    for (Vid w : ws.neighbors(v))
      if (!dist.has(w)) {
        dist.set(w, dist.get(v) + 1);
        order.push_back(w);
      }
  }
  std::vector<Vid> pending;
  for (Vid v : order)
    if (!cb.contains(v)) pending.push_back(v);
  const DenseFilters all;
  TraceStep st;
  st.phase = Phase::Bootstrap;
  while (!pending.empty()) {
    std::vector<Vid> left;
    for (Vid v : pending) {
      if (cb.contains(v)) continue;
      auto rec = search_extension(ws, cb, v, all);
      if (!rec) {
        left.push_back(v);
        continue;
      }
      apply_extension(cb, *rec);
      if (sink) {
        st.rec = *rec;
        sink(st);
      }
    }
    if (left.size() == pending.size())
      throw HypothesisViolation("no extension absorbs " + ws.token(left.front()) + " into the starting cycle");
    pending = std::move(left);
  }
}

OrientedCycle bootstrap(const GraphOracle& o, const OrientedCycle& a) {
  Workspace ws(borrow(o));
  std::vector<Vid> seq;
  for (const auto& v : a.sequence()) seq.push_back(ws.intern_checked(v));
  CycleBuilder cb(seq);
  bootstrap_dense(ws, cb, seq);
  std::vector<VertexId> out;
  for (Vid v : cb.sequence_from(seq.front())) out.push_back(ws.id(v));
  return OrientedCycle(std::move(out));
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json j = {{"ok", ok},
                      {"exit_code", exit_code},
                      {"stages_completed", stages_completed},
                      {"k", k},
                      {"cycle_lengths", cycle_lengths},
                      {"sampled_ends", sampled_ends},
                      {"stages", stage_reports}};
  if (!error.empty()) j["error"] = error;
  return j;
}

namespace {

StepSink recording_sink(StageData& d, std::size_t limit) {
  return [&d, limit](const TraceStep& st) {
    ++d.step_count;
    if (!d.steps_recorded) return;
    if (d.steps.size() == limit) {
      d.steps_recorded = false;
      d.steps.clear();
      d.steps.shrink_to_fit();
      return;
    }
    d.steps.push_back(StepRecord::from(st));
  };
}

}  // namespace

RunSummary run(OraclePtr o, const nlohmann::json& spec, const RunParams& p, std::ostream& trace, std::ostream* log) {
  p.validate();
  Workspace ws(o);
  StageChecker checker(ws, p.sampled_ends);
  TraceWriter writer(trace, ws);
  writer.begin(spec, p.to_json());
  RunSummary s;
  auto t0 = std::chrono::steady_clock::now();

  auto emit = [&](StageData& d, const nlohmann::json& umbrella) {
    auto verification = checker.check(d);
    const bool ok = verification["ok"].get<bool>();
    writer.stage(d, umbrella, verification);
    nlohmann::json brief = {{"index", d.index}, {"ok", ok}, {"checks", verification["checks"]}};
    if (verification.contains("separators")) brief["separators"] = verification["separators"];
    s.stage_reports.push_back(std::move(brief));
    s.k.push_back(d.parts.size());
    s.cycle_lengths.push_back(d.cycle.size());
    if (log) {
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      *log << "stage " << d.index << ": cycle length " << d.cycle.size() << ", k " << d.parts.size()
           << (ok ? ", verified" : ", verification FAILED") << " (" << t << "s)\n";
    }
    if (!ok) {
      s.error = "stage " + std::to_string(d.index) + " failed verification";
      for (const auto& f : verification["failures"]) s.error += "; " + f.get<std::string>();
      return false;
    }
    s.stages_completed = d.index + 1;
    return true;
  };

  try {
    std::vector<Vid> prev;
    CycleBuilder cb;
    {
      StageData d;
      d.initial = initial_cycle_dense(ws, p.cap);
      cb.assign(d.initial);
      bootstrap_dense(ws, cb, d.initial, recording_sink(d, p.step_limit));
      d.cycle = canonical_sequence(ws, cb);
      d.stats = {{"steps", d.step_count}};
      if (!emit(d, nullptr)) throw HypothesisViolation(s.error);
      prev = std::move(d.cycle);
    }
    for (std::size_t i = 1; i <= p.stages; ++i) {
      StageData d;
      d.index = i;
      const DenseUmbrella u = compute_umbrella_dense(ws, prev);
      BlockLabels labels(ws, u);
      TupleBuilder tb(ws, u, labels, cb, TupleOptions{p.cap}, recording_sink(d, p.step_limit), prev);
      tb.extend_to_k0();
      tb.build_promising();
      tb.build_good();
      const auto cuts = tb.crossing_edges();
      d.cycle = canonical_sequence(ws, cb);
      d.k0_size = u.k0.size();
      d.recorded_k = u.parts.size();
      d.blocker_size = u.blocker.size();
      d.base_size = u.base.size();
      d.parts.resize(u.parts.size());
      for (std::size_t j = 0; j < u.parts.size(); ++j) {
        d.parts[j].s = u.parts[j].s;
        d.parts[j].anchor = u.parts[j].anchor;
        d.parts[j].cut = cuts[j];
      }
      for (const auto& [z, parts] : tb.overrides()) {
        const auto base = labels.part(z);
        for (auto j : parts)
          if (static_cast<std::int32_t>(j) != base) d.parts[j].add.push_back(z);
        if (base >= 0 && !std::binary_search(parts.begin(), parts.end(), static_cast<std::uint32_t>(base)))
          d.parts[base].remove.push_back(z);
      }
      for (auto& part : d.parts) {
        ws.sort(part.add);
        ws.sort(part.remove);
      }
      d.stats = tb.stats().to_json();
      d.stats["steps_total"] = d.step_count;
      const nlohmann::json umbrella = {{"k", u.parts.size()},
                                       {"k0_size", u.k0.size()},
                                       {"blocker_size", u.blocker.size()},
                                       {"base_size", u.base.size()},
                                       {"exact_grouping", u.exact_grouping}};
      if (!emit(d, umbrella)) throw HypothesisViolation(s.error);
      prev = std::move(d.cycle);
    }
    s.ok = true;
    s.exit_code = 0;
  } catch (const ResourceCapExceeded& e) {
    s.error = e.what();
    s.exit_code = 3;
  } catch (const InputError& e) {
    s.error = e.what();
    s.exit_code = 2;
  } catch (const std::exception& e) {
    if (s.error.empty()) s.error = e.what();
    s.exit_code = 1;
  }
  s.sampled_ends = checker.sampled_end_count();
  writer.end(checker.ends_json(), s.to_json());
  return s;
}

nlohmann::json VerifySummary::to_json() const {
  return {{"ok", ok},       {"stages", stages},        {"k", k},         {"cycle_lengths", cycle_lengths},
          {"ends", ends},   {"sampled_ends", sampled_ends}, {"failures", failures}};
}

VerifySummary verify_trace(std::istream& in) {
  VerifySummary v;
  in >> std::ws;
  if (in.peek() == std::char_traits<char>::eof()) return v;

  OraclePtr oracle;
  std::unique_ptr<Workspace> ws;
  std::unique_ptr<StageChecker> checker;
  std::size_t sampled = RunParams{}.sampled_ends;
  nlohmann::json recorded_ends;
  bool have_ends = false;

  TraceHandlers h;
  h.on_spec = [&](const nlohmann::json& spec) -> Workspace& {
    oracle = oracle_from_spec(spec);
    ws = std::make_unique<Workspace>(oracle);
    return *ws;
  };
  h.on_params = [&](const nlohmann::json& params) {
    if (!params.is_object()) throw InputError("params must be an object");
    sampled = params.value("sampled_ends", sampled);
  };
  h.on_stage = [&](StageData&& d, const nlohmann::json&, const nlohmann::json&) {
    if (!ws) throw InputError("stages precede the graph spec");
    if (!checker) checker = std::make_unique<StageChecker>(*ws, sampled);
    auto rep = checker->check(d);
    ++v.stages;
    v.k.push_back(d.parts.size());
    v.cycle_lengths.push_back(d.cycle.size());
    if (!rep["ok"].get<bool>()) {
      v.ok = false;
      v.failures.push_back({{"stage", d.index}, {"failures", rep["failures"]}});
    }
  };
  h.on_tail = [&](const std::string& key, const nlohmann::json& value) {
    if (key == "ends") {
      recorded_ends = value;
      have_ends = true;
    }
  };
  read_trace(in, h);
  if (checker) {
    v.ends = checker->ends_json();
    v.sampled_ends = checker->sampled_end_count();
  }
  if (have_ends && recorded_ends != v.ends) {
    v.ok = false;
    v.failures.push_back({{"stage", nullptr}, {"failures", {"recorded end descriptors differ from the recomputed ones"}}});
  }
  return v;
}

}  // namespace clawham
