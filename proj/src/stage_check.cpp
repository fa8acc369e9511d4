#include <algorithm>
#include <deque>

#include "clawham/errors.hpp"
#include "clawham/trace.hpp"

namespace clawham {

namespace {

constexpr std::size_t kMaxFailures = 32;

bool contains_sorted(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::pair<Vid, Vid> ordered(const Workspace& ws, Vid a, Vid b) { return ws.less(a, b) ? std::pair{a, b} : std::pair{b, a}; }

CutPair canonical_cut(const Workspace& ws, CutPair c) {
  for (auto& e : c) e = ordered(ws, e.first, e.second);
  auto lt = [&](const std::pair<Vid, Vid>& x, const std::pair<Vid, Vid>& y) {
    if (x.first != y.first) return ws.less(x.first, y.first);
    return ws.less(x.second, y.second);
  };
  if (lt(c[1], c[0])) std::swap(c[0], c[1]);
  return c;
}

}  // namespace

struct StageChecker::History {
  std::vector<Vid> succ;
  std::unique_ptr<BlockLabels> labels;
  std::unordered_map<Vid, std::vector<std::uint32_t>> overrides;
  std::vector<CutPair> cuts;
  std::vector<Vid> anchors;
  std::vector<Vid> removed;

  bool on(Vid a) const { return a < succ.size() && succ[a] != kNoVid; }
  bool has(Vid a, Vid b) const { return (a < succ.size() && succ[a] == b) || (b < succ.size() && succ[b] == a); }
  void parts_of(Vid v, std::vector<std::uint32_t>& out) const {
    out.clear();
    if (!overrides.empty())
      if (auto it = overrides.find(v); it != overrides.end()) {
        out = it->second;
        return;
      }
    const auto l = labels->label(v);
    if (l >= 0) out.push_back(static_cast<std::uint32_t>(l / 2));
  }
};

struct StageChecker::Report {
  nlohmann::json checks = nlohmann::json::object();
  std::vector<std::string> failures;
  std::size_t count = 0;
  nlohmann::json separators;
  std::size_t lost_edges = 0;

  void fail(const char* check, const std::string& msg) {
    checks[check] = false;
    ++count;
    if (failures.size() < kMaxFailures) failures.push_back(std::string(check) + ": " + msg);
  }
  void pass(const char* check) {
    if (!checks.contains(check)) checks[check] = true;
  }
};

StageChecker::StageChecker(Workspace& ws, std::size_t sampled_ends) : ws_(ws), sampled_(sampled_ends) {}
StageChecker::~StageChecker() = default;

nlohmann::json StageChecker::ends_json() const {
  auto out = nlohmann::json::array();
  for (const auto& e : ends_) out.push_back({{"origin", e.front()}, {"parts", e}});
  return out;
}

void StageChecker::check_cycle(const StageData& d, Report& r) {
  const auto& c = d.cycle;
  if (c.size() < 3) {
    r.fail("cycle", "fewer than three vertices");
    return;
  }
  StampMap seen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (seen.has(c[i])) {
      r.fail("cycle", "vertex " + ws_.token(c[i]) + " repeats");
      return;
    }
    seen.set(c[i], 1);
    const Vid next = c[(i + 1) % c.size()];
    if (!ws_.adjacent(c[i], next)) {
      r.fail("cycle", ws_.token(c[i]) + " and " + ws_.token(next) + " are not adjacent");
      return;
    }
  }
  for (std::size_t i = 1; i < c.size(); ++i)
    if (ws_.less(c[i], c[0])) {
      r.fail("cycle", "listing does not start at the smallest vertex");
      return;
    }
  r.pass("cycle");
}

void StageChecker::replay(const StageData& d, Report& r) {
  if (!d.steps_recorded) {
    r.checks["replay"] = "omitted";
    return;
  }
  CycleBuilder cb;
  cb.assign(d.index == 0 ? d.initial : prev_cycle_);
  History* h = d.index == 0 ? nullptr : hist_.back().get();
  std::unordered_map<Vid, std::vector<std::uint32_t>> moved;
  std::vector<std::uint32_t> pu, px;
  auto parts_now = [&](Vid v, std::vector<std::uint32_t>& out) {
    if (auto it = moved.find(v); it != moved.end()) {
      out = it->second;
    } else {
      h->parts_of(v, out);
    }
  };
  auto base_parts = [&](Vid v) {
    std::vector<std::uint32_t> out;
    const auto l = h->labels->label(v);
    if (l >= 0) out.push_back(static_cast<std::uint32_t>(l / 2));
    return out;
  };
  auto insert_path = [&](Vid a, Vid b, const std::vector<Vid>& inner) -> std::string {
    Vid prev = a;
    for (Vid z : inner) {
      if (cb.contains(z)) return "path vertex " + ws_.token(z) + " is already on the cycle";
      if (!ws_.adjacent(prev, z)) return "path is broken at " + ws_.token(z);
      prev = z;
    }
    if (!ws_.adjacent(prev, b)) return "path does not reach " + ws_.token(b);
    if (cb.succ(a) == b) {
      Vid at = a;
      for (Vid z : inner) {
        cb.insert_after(at, z);
        at = z;
      }
    } else if (cb.succ(b) == a) {
      Vid at = b;
      for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
        cb.insert_after(at, *it);
        at = *it;
      }
    } else {
      return "path ends are not consecutive";
    }
    return {};
  };

  std::size_t k = 0;
  for (const auto& st : d.steps) {
    ++k;
    std::string err;
    if ((d.index == 0) != (st.phase == Phase::Bootstrap)) err = "phase does not belong to this stage";
    if (err.empty()) {
      switch (st.op) {
        case TraceStep::Op::Extension: {
          err = check_extension(ws_, cb, st.rec);
          if (!err.empty()) break;
          if (st.has_parts != (st.phase == Phase::Good)) {
            err = "membership lists must accompany exactly the good-phase steps";
            break;
          }
          if (st.has_parts) {
            parts_now(st.rec.u, pu);
            parts_now(st.rec.x, px);
            std::vector<std::uint32_t> want_v = pu;
            if (st.rec.kind == ExtensionKind::Type1) {
              want_v.clear();
              std::set_union(pu.begin(), pu.end(), px.begin(), px.end(), std::back_inserter(want_v));
            }
            const std::vector<std::uint32_t> want_w =
                st.rec.kind == ExtensionKind::Type1 ? std::vector<std::uint32_t>{} : px;
            if (st.parts_v != want_v || st.parts_w != want_w) {
              err = "membership update does not follow the table rule";
              break;
            }
            auto set = [&](Vid z, const std::vector<std::uint32_t>& p) {
              if (p == base_parts(z)) {
                moved.erase(z);
              } else {
                moved[z] = p;
              }
            };
            set(st.rec.v, want_v);
            if (st.rec.kind != ExtensionKind::Type1) set(st.rec.w, want_w);
          }
          apply_extension(cb, st.rec);
          break;
        }
        case TraceStep::Op::PathReplacement:
          if (!cb.contains(st.a) || !cb.contains(st.b)) {
            err = "path ends are off the cycle";
            break;
          }
          err = insert_path(st.a, st.b, st.inner);
          break;
        case TraceStep::Op::Reroute: {
          const Vid rr = st.a, s = st.b;
          if (!cb.contains(rr) || !cb.contains(s) || st.removed.empty()) {
            err = "reroute ends are off the cycle";
            break;
          }
          const bool fwd = cb.succ(rr) == st.removed.front();
          if (!fwd && cb.pred(rr) != st.removed.front()) {
            err = "removed segment does not start next to r";
            break;
          }
          Vid z = rr;
          for (Vid q : st.removed) {
            if ((fwd ? cb.succ(z) : cb.pred(z)) != q) {
              err = "removed vertices are not consecutive";
              break;
            }
            z = q;
          }
          if (!err.empty()) break;
          if ((fwd ? cb.succ(z) : cb.pred(z)) != s) {
            err = "removed segment does not end next to s";
            break;
          }
          const Vid w = fwd ? cb.pred(rr) : cb.succ(rr);
          cb.unlink(rr);
          for (Vid q : st.removed) cb.unlink(q);
          err = insert_path(w, s, st.inner);
          break;
        }
      }
    }
    if (!err.empty()) {
      r.fail("replay", "step " + std::to_string(k) + ": " + err);
      return;
    }
  }
  if (canonical_sequence(ws_, cb) != d.cycle) {
    r.fail("replay", "replayed steps do not produce the recorded cycle");
    return;
  }
  if (h && moved != hist_.back()->overrides) {
    r.fail("replay", "replayed memberships differ from the recorded M_delta");
    return;
  }
  r.pass("replay");
}

void StageChecker::check_stage_zero(const StageData& d, Report& r) {
  const auto& a = d.initial;
  bool ok = a.size() >= 3;
  StampMap seen;
  for (std::size_t i = 0; ok && i < a.size(); ++i) {
    ok = !seen.has(a[i]) && ws_.adjacent(a[i], a[(i + 1) % a.size()]);
    seen.set(a[i], 1);
  }
  if (!ok) {
    r.fail("initial", "starting cycle is not a cycle of the graph");
    return;
  }
  r.pass("initial");
  replay(d, r);
  // N_3(V(A)) must lie on C^0.
  const History& h = *hist_.back();
  StampMap dist;
  std::deque<Vid> queue;
  for (Vid v : a) {
    dist.set(v, 0);
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    if (!h.on(v)) {
      r.fail("bootstrap", "vertex " + ws_.token(v) + " within distance 3 of the starting cycle is missing");
      return;
    }
    const auto dv = dist.get(v);
    if (dv == 3) continue;
    for (Vid w : ws_.neighbors(v))
      if (!dist.has(w)) {
        dist.set(w, dv + 1);
        queue.push_back(w);
      }
  }
  r.pass("bootstrap");
}

void StageChecker::check_umbrella_stage(const StageData& d, Report& r) {
  History& h = *hist_.back();
  const History& prev = *hist_[hist_.size() - 2];
  if (d.parts.empty()) {
    r.fail("umbrella", "no parts recorded");
    return;
  }
  // Reconstruct the umbrella from the recorded blocker partition.
  DenseUmbrella u;
  u.base = prev_cycle_;
  u.exact_grouping = ws_.oracle().tree_like();
  StampMap role;  // 1 blocker, 2 K0
  for (std::size_t j = 0; j < d.parts.size(); ++j) {
    if (d.parts[j].s.empty()) r.fail("umbrella", "part " + std::to_string(j) + " has an empty S");
    for (Vid s : d.parts[j].s) {
      if (role.has(s)) r.fail("umbrella", "vertex " + ws_.token(s) + " lies in two parts");
      role.set(s, 1);
      u.blocker.push_back(s);
    }
  }
  ws_.sort(u.blocker);
  std::deque<Vid> queue;
  for (Vid v : prev_cycle_) {
    if (role.has(v)) {
      r.fail("umbrella", "blocker vertex " + ws_.token(v) + " lies on the previous cycle");
      return;
    }
    role.set(v, 2);
    u.k0.push_back(v);
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    for (Vid w : ws_.neighbors(v))
      if (!role.has(w)) {
        role.set(w, 2);
        u.k0.push_back(w);
        if (u.k0.size() > d.k0_size) {
          r.fail("umbrella", "the component of the previous cycle exceeds the recorded K0 size");
          return;
        }
        queue.push_back(w);
      }
  }
  if (u.k0.size() != d.k0_size) r.fail("umbrella", "K0 size differs from the record");
  if (d.recorded_k != d.parts.size()) r.fail("umbrella", "recorded k differs from the number of parts");
  if (d.blocker_size != u.blocker.size()) r.fail("umbrella", "blocker size differs from the record");
  if (d.base_size != u.base.size()) r.fail("umbrella", "base size differs from the record");
  StampMap seen;
  for (std::size_t j = 0; j < d.parts.size(); ++j) {
    DenseUmbrella::Part p;
    p.s = d.parts[j].s;
    seen.reset();
    for (Vid s : p.s)
      for (Vid w : ws_.neighbors(s))
        if (!role.has(w) && !seen.has(w)) {
          seen.set(w, 1);
          p.attached.push_back(w);
        }
    ws_.sort(p.attached);
    if (p.attached.empty()) {
      r.fail("umbrella", "part " + std::to_string(j) + " touches nothing outside K0");
      return;
    }
    p.anchor = p.attached.front();
    if (p.anchor != d.parts[j].anchor) r.fail("umbrella", "anchor of part " + std::to_string(j) + " differs");
    u.parts.push_back(std::move(p));
  }
  r.pass("umbrella");

  const SeparatorReport sep = check_separator_facts_dense(ws_, u);
  r.separators = sep.to_json();
  if (!sep.ok) r.fail("separators", sep.violations.empty() ? "violation" : sep.violations.front());
  r.pass("separators");

  h.labels = std::make_unique<BlockLabels>(ws_, u);
  for (const auto& p : d.parts) h.anchors.push_back(p.anchor);

  // Memberships and the finiteness of every cut.
  StampMap dist;  // distance from the blocker, up to 2
  for (Vid s : u.blocker) {
    dist.set(s, 0);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    const auto dv = dist.get(v);
    if (dv == 2) continue;
    for (Vid w : ws_.neighbors(v))
      if (!dist.has(w)) {
        dist.set(w, dv + 1);
        queue.push_back(w);
      }
  }
  for (std::uint32_t j = 0; j < d.parts.size(); ++j) {
    const auto& p = d.parts[j];
    for (Vid z : p.add) {
      if (h.labels->part(z) == static_cast<std::int32_t>(j)) r.fail("cut_finiteness", "added vertex already in M");
      if (!dist.has(z) || dist.get(z) > 1)
        r.fail("cut_finiteness", "vertex " + ws_.token(z) + " moves into a part away from the blocker");
      auto it = h.overrides.find(z);
      if (it == h.overrides.end()) {
        std::vector<std::uint32_t> base;
        if (const auto l = h.labels->label(z); l >= 0) base.push_back(static_cast<std::uint32_t>(l / 2));
        it = h.overrides.emplace(z, base).first;
      }
      it->second.push_back(j);
    }
    for (Vid z : p.remove) {
      const auto l = h.labels->label(z);
      if (l < 0 || l / 2 != static_cast<std::int32_t>(j)) {
        r.fail("cut_finiteness", "removed vertex " + ws_.token(z) + " is not a member");
        continue;
      }
      bool near_s = l % 2 == 0;
      for (Vid w : ws_.neighbors(z)) near_s = near_s || h.labels->label(w) == static_cast<std::int32_t>(2 * j);
      if (!near_s) r.fail("cut_finiteness", "removed vertex " + ws_.token(z) + " is not next to S");
      auto it = h.overrides.find(z);
      if (it == h.overrides.end()) it = h.overrides.emplace(z, std::vector<std::uint32_t>{j}).first;
      it->second.erase(std::remove(it->second.begin(), it->second.end(), j), it->second.end());
      h.removed.push_back(z);
    }
    for (const auto& e : p.cut)
      for (Vid z : {e.first, e.second})
        if (!dist.has(z)) r.fail("cut_finiteness", "cut edge endpoint " + ws_.token(z) + " is far from the blocker");
    h.cuts.push_back(canonical_cut(ws_, p.cut));
  }
  for (auto& [z, parts] : h.overrides) {
    std::sort(parts.begin(), parts.end());
    if (std::adjacent_find(parts.begin(), parts.end()) != parts.end())
      r.fail("cut_finiteness", "vertex " + ws_.token(z) + " is added twice");
  }
  // Memberships equal to the base are not overrides.
  for (auto it = h.overrides.begin(); it != h.overrides.end();) {
    const auto l = h.labels->label(it->first);
    const bool base = l >= 0 ? it->second == std::vector<std::uint32_t>{static_cast<std::uint32_t>(l / 2)}
                             : it->second.empty();
    it = base ? h.overrides.erase(it) : std::next(it);
  }
  r.pass("cut_finiteness");

  // Persistence and containment.
  for (Vid v : prev_cycle_)
    if (!h.on(v)) {
      r.fail("persistence", "vertex " + ws_.token(v) + " of the previous cycle was dropped");
      break;
    }
  if (d.cycle.size() <= prev_cycle_.size()) r.fail("persistence", "the cycle did not grow");
  for (Vid v : u.k0)
    if (!h.on(v)) {
      r.fail("persistence", "K0 vertex " + ws_.token(v) + " is missing");
      break;
    }
  for (Vid s : u.blocker)
    if (!h.on(s)) {
      r.fail("persistence", "blocker vertex " + ws_.token(s) + " is missing");
      break;
    }
  r.pass("persistence");
  (void)prev;

  replay(d, r);
}

void StageChecker::check_cuts(const StageData& d, Report& r) {
  const auto& c = d.cycle;
  std::vector<std::uint32_t> pa, pb, count;
  std::vector<CutPair> seen;
  for (std::size_t p = 1; p < hist_.size(); ++p) {
    const History& h = *hist_[p];
    const std::size_t k = h.cuts.size();
    count.assign(k, 0);
    seen.assign(k, CutPair{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Vid a = c[i], b = c[(i + 1) % c.size()];
      h.parts_of(a, pa);
      h.parts_of(b, pb);
      auto note = [&](std::uint32_t j) {
        if (count[j] < 2) seen[j][count[j]] = {a, b};
        ++count[j];
      };
      for (auto j : pa)
        if (!contains_sorted(pb, j)) note(j);
      for (auto j : pb)
        if (!contains_sorted(pa, j)) note(j);
    }
    for (std::size_t j = 0; j < k; ++j) {
      const std::string where = "stage " + std::to_string(p) + " part " + std::to_string(j);
      if (count[j] != 2) {
        r.fail("cut_agreement", where + ": cut met " + std::to_string(count[j]) + " times");
      } else if (canonical_cut(ws_, seen[j]) != h.cuts[j]) {
        r.fail("cut_agreement", where + ": crossing edges differ from the recorded ones");
      }
    }
  }
  r.pass("cut_agreement");
}

void StageChecker::check_edge_stability(const StageData& d, Report& r) {
  const std::size_t i = d.index;
  if (i >= 2) {
    const History& now = *hist_[i];
    for (std::size_t t = 0; t < prev_cycle_.size(); ++t) {
      const Vid a = prev_cycle_[t], b = prev_cycle_[(t + 1) % prev_cycle_.size()];
      if (now.has(a, b)) continue;
      ++r.lost_edges;
      for (std::size_t p = 0; p + 1 < i; ++p)
        if (hist_[p]->has(a, b)) {
          r.fail("edge_stability", "edge " + ws_.token(a) + "-" + ws_.token(b) + " of stages " + std::to_string(p) +
                                       " and " + std::to_string(i - 1) + " is lost");
          break;
        }
    }
  } else if (i == 1) {
    const History& now = *hist_[1];
    for (std::size_t t = 0; t < prev_cycle_.size(); ++t)
      if (!now.has(prev_cycle_[t], prev_cycle_[(t + 1) % prev_cycle_.size()])) ++r.lost_edges;
  }
  r.pass("edge_stability");
}

void StageChecker::check_ends(const StageData& d, Report& r) {
  const std::size_t i = d.index;
  const History& h = *hist_[i];
  if (i == 1) {
    for (std::uint32_t j = 0; j < d.parts.size() && ends_.size() < sampled_; ++j) ends_.push_back({j});
  } else {
    const History& prev = *hist_[i - 1];
    for (Vid z : prev.removed)
      if (h.labels->label(z) != BlockLabels::kK0)
        r.fail("ends", "vertex " + ws_.token(z) + " removed from a part is not absorbed into K0");
    std::vector<std::uint32_t> parts;
    for (auto& e : ends_) {
      const std::uint32_t f = e.back();
      std::uint32_t best = UINT32_MAX;
      for (std::uint32_t j = 0; j < d.parts.size(); ++j) {
        const Vid a = d.parts[j].anchor;
        if (prev.labels->label(a) != static_cast<std::int32_t>(2 * f + 1)) continue;
        prev.parts_of(a, parts);
        if (!contains_sorted(parts, f)) continue;
        if (best == UINT32_MAX || ws_.less(a, d.parts[best].anchor)) best = j;
      }
      if (best == UINT32_MAX) {
        r.fail("ends", "end from part " + std::to_string(e.front()) + " has no descendant");
        continue;
      }
      e.push_back(best);
      const auto& p = d.parts[best];
      for (const auto* list : {&p.s, &p.add})
        for (Vid z : *list) {
          prev.parts_of(z, parts);
          if (!contains_sorted(parts, f)) {
            r.fail("ends", "M-set of stage " + std::to_string(i) + " part " + std::to_string(best) +
                               " leaves its predecessor at " + ws_.token(z));
            break;
          }
        }
    }
    // Every vertex leaves the selected M-sets two stages after it joins the cycle.
    const History& old = *hist_[i - 2];
    for (const auto& p : d.parts)
      for (Vid z : p.add)
        if (old.on(z)) r.fail("ends", "vertex " + ws_.token(z) + " of an earlier cycle re-enters an M-set");
  }
  // Distinct sampled ends keep disjoint M-sets.
  std::vector<std::uint32_t> chosen;
  for (const auto& e : ends_)
    if (e.size() == i) chosen.push_back(e.back());
  std::sort(chosen.begin(), chosen.end());
  if (std::adjacent_find(chosen.begin(), chosen.end()) != chosen.end())
    r.fail("ends", "two sampled ends select the same part");
  for (const auto& [z, parts] : h.overrides) {
    std::size_t hits = 0;
    for (auto j : parts) hits += std::binary_search(chosen.begin(), chosen.end(), j);
    if (hits > 1) r.fail("ends", "vertex " + ws_.token(z) + " lies in two selected M-sets");
  }
  r.pass("ends");
}

nlohmann::json StageChecker::check(const StageData& d) {
  Report r;
  nlohmann::json out;
  if (d.index != hist_.size() || broken_) {
    r.fail("sequence", broken_ ? "an earlier stage could not be checked" : "stage index out of order");
  } else {
    try {
      check_cycle(d, r);
      if (r.count == 0) {
        auto h = std::make_unique<History>();
        std::size_t top = 0;
        for (Vid v : d.cycle) top = std::max<std::size_t>(top, v);
        h->succ.assign(top + 1, kNoVid);
        for (std::size_t t = 0; t < d.cycle.size(); ++t) h->succ[d.cycle[t]] = d.cycle[(t + 1) % d.cycle.size()];
        hist_.push_back(std::move(h));
        if (d.index == 0) {
          check_stage_zero(d, r);
        } else {
          check_umbrella_stage(d, r);
          if (r.count == 0) {
            check_cuts(d, r);
            check_edge_stability(d, r);
            check_ends(d, r);
          }
        }
      }
    } catch (const std::exception& e) {
      r.fail("internal", e.what());
    }
    if (r.count != 0) broken_ = true;
  }
  if (r.count != 0) all_ok_ = false;
  prev_cycle_ = d.cycle;
  k_.push_back(d.parts.size());
  out["ok"] = r.count == 0;
  out["k"] = d.parts.size();
  out["cycle_length"] = d.cycle.size();
  out["lost_edges"] = r.lost_edges;
  out["checks"] = std::move(r.checks);
  if (!r.separators.is_null()) out["separators"] = std::move(r.separators);
  out["failures"] = r.failures;
  out["failure_count"] = r.count;
  return out;
}

}  // namespace clawham
