#include "clawham/tuples.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "clawham/errors.hpp"

namespace clawham {

namespace {

bool contains_sorted(const std::vector<std::uint32_t>& v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::vector<std::uint32_t> sorted_union(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint32_t> sym_diff(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::K0:
      return "k0";
    case Phase::Promising:
      return "promising";
    case Phase::GrowIn:
      return "grow";
    case Phase::Good:
      return "good";
    case Phase::Bootstrap:
      return "bootstrap";
  }
  return "?";
}

nlohmann::json TupleStats::to_json() const {
  nlohmann::json j;
  for (int p = 0; p < 4; ++p) j["steps"][std::string(phase_name(static_cast<Phase>(p)))] = steps[p];
  for (int k = 0; k < 3; ++k) j["kinds"][std::string(kind_name(static_cast<ExtensionKind>(k)))] = kinds[k];
  j["case1"] = case1;
  j["subcase_2_1"] = subcase21;
  j["subcase_2_2_2"] = subcase222;
  j["case3"] = case3;
  j["vprime_steps"] = vprime_steps;
  j["converted_to_type1"] = converted_to_type1;
  j["vertices_removed"] = vertices_removed;
  j["grow_radius"] = grow_radius;
  j["notes"] = notes;
  return j;
}

void StampMap::reset() {
  if (++cur_ == 0) {
    std::fill(gen_.begin(), gen_.end(), 0);
    cur_ = 1;
  }
}

void StampMap::set(Vid v, std::uint32_t x) {
  if (v >= gen_.size()) {
    const std::size_t n = std::max<std::size_t>(static_cast<std::size_t>(v) + 1, gen_.size() * 3 / 2 + 64);
    gen_.resize(n, 0);
    val_.resize(n, 0);
  }
  gen_[v] = cur_;
  val_[v] = x;
}

TupleBuilder::TupleBuilder(Workspace& ws, const DenseUmbrella& u, BlockLabels& labels, CycleBuilder& cycle,
                           TupleOptions opt, StepSink sink, std::span<const Vid> reference)
    : ws_(ws), u_(u), labels_(labels), c_(cycle), opt_(opt), sink_(std::move(sink)) {
  const std::size_t k = u.parts.size();
  in_i_.assign(k, 0);
  cross_.assign(k, 0);
  s_on_.assign(k, 0);
  k_on_.assign(k, 0);
  s_edges_.assign(k, 0);
  dirty_flag_.assign(k, 0);

  std::vector<Vid> ref(reference.begin(), reference.end());
  if (ref.empty()) ref = c_.sequence_from(c_.anchor());
  // Edges of the reference far from its outside neighbourhood.
  StampMap on_ref;
  for (Vid v : ref) on_ref.set(v, 1);
  dist_.reset();
  std::deque<Vid> queue;
  for (Vid v : ref)
    for (Vid w : ws_.neighbors(v))
      if (!on_ref.has(w) && !dist_.has(w)) {
        dist_.set(w, 0);
        queue.push_back(w);
      }
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    const std::uint32_t d = dist_.get(v);
    if (d == 3) continue;
    for (Vid w : ws_.neighbors(v))
      if (!dist_.has(w)) {
        dist_.set(w, d + 1);
        queue.push_back(w);
      }
  }
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Vid a = ref[i], b = ref[(i + 1) % ref.size()];
    if (dist_.has(a) || dist_.has(b)) continue;
    if (labels_.label(a) != BlockLabels::kK0 || labels_.label(b) != BlockLabels::kK0) continue;
    stable_edges_.emplace_back(a, b);
  }
}

void TupleBuilder::fail(const std::string& msg) {
  throw InvariantViolation(std::string(phase_name(phase_)) + " phase: " + msg);
}

void TupleBuilder::parts_into(Vid v, std::vector<std::uint32_t>& out) {
  out.clear();
  if (!overrides_.empty()) {
    if (auto it = overrides_.find(v); it != overrides_.end()) {
      out = it->second;
      return;
    }
  }
  const auto l = labels_.label(v);
  if (l >= 0) out.push_back(static_cast<std::uint32_t>(l / 2));
}

std::vector<std::uint32_t> TupleBuilder::parts_of(Vid v) {
  std::vector<std::uint32_t> out;
  parts_into(v, out);
  return out;
}

void TupleBuilder::set_parts(Vid v, std::vector<std::uint32_t> parts) {
  const auto l = labels_.label(v);
  const bool base = l >= 0 ? (parts.size() == 1 && parts[0] == static_cast<std::uint32_t>(l / 2)) : parts.empty();
  if (base) {
    overrides_.erase(v);
  } else {
    overrides_[v] = std::move(parts);
  }
}

void TupleBuilder::mark_dirty(std::uint32_t r) {
  if (!dirty_flag_[r]) {
    dirty_flag_[r] = 1;
    dirty_.push_back(r);
  }
}

void TupleBuilder::count_edge(Vid a, Vid b, int delta) {
  auto& pa = edge_parts_[0];
  auto& pb = edge_parts_[1];
  parts_into(a, pa);
  parts_into(b, pb);
  for (auto r : pa)
    if (!contains_sorted(pb, r)) {
      cross_[r] += delta;
      mark_dirty(r);
    }
  for (auto r : pb)
    if (!contains_sorted(pa, r)) {
      cross_[r] += delta;
      mark_dirty(r);
    }
  const auto la = labels_.label(a);
  if (la >= 0 && la % 2 == 0 && labels_.label(b) == la) {
    s_edges_[la / 2] += delta;
    mark_dirty(static_cast<std::uint32_t>(la / 2));
  }
}

void TupleBuilder::count_vertex(Vid v, int delta) {
  const auto l = labels_.label(v);
  if (l < 0) return;
  (l % 2 == 0 ? s_on_ : k_on_)[l / 2] += delta;
  mark_dirty(static_cast<std::uint32_t>(l / 2));
}

void TupleBuilder::reset_counters() {
  std::fill(cross_.begin(), cross_.end(), 0);
  std::fill(s_on_.begin(), s_on_.end(), 0);
  std::fill(k_on_.begin(), k_on_.end(), 0);
  std::fill(s_edges_.begin(), s_edges_.end(), 0);
  const Vid start = c_.anchor();
  Vid v = start;
  do {
    count_vertex(v, 1);
    count_edge(v, c_.succ(v), 1);
    v = c_.succ(v);
  } while (v != start);
  for (auto r : dirty_) dirty_flag_[r] = 0;
  dirty_.clear();
}

void TupleBuilder::emit_extension(const DenseRecord& rec) {
  if (!sink_) return;
  TraceStep st;
  st.phase = phase_;
  st.rec = rec;
  sink_(st);
}

EdgeChange TupleBuilder::apply(const DenseRecord& rec) {
  const EdgeChange ch = apply_extension(c_, rec);
  for (int i = 0; i < ch.n_removed; ++i) count_edge(ch.removed[i].first, ch.removed[i].second, -1);
  for (int i = 0; i < ch.n_added; ++i) count_edge(ch.added[i].first, ch.added[i].second, 1);
  count_vertex(rec.v, 1);
  if (rec.kind == ExtensionKind::Type2_1) count_vertex(rec.w, 1);
  ++stats_.steps[static_cast<int>(phase_)];
  ++stats_.kinds[static_cast<int>(rec.kind)];
  emit_extension(rec);
  return ch;
}

void TupleBuilder::insert_path(Vid a, Vid b, const std::vector<Vid>& inner) {
  count_edge(a, b, -1);
  if (c_.succ(a) == b) {
    Vid prev = a;
    for (Vid p : inner) {
      c_.insert_after(prev, p);
      prev = p;
    }
  } else if (c_.succ(b) == a) {
    Vid prev = b;
    for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
      c_.insert_after(prev, *it);
      prev = *it;
    }
  } else {
    fail("path endpoints " + ws_.token(a) + " and " + ws_.token(b) + " are not consecutive on the cycle");
  }
  Vid prev = a;
  for (Vid p : inner) {
    count_vertex(p, 1);
    count_edge(prev, p, 1);
    prev = p;
  }
  count_edge(prev, b, 1);
}

void TupleBuilder::remove_vertex(Vid z) {
  const Vid p = c_.pred(z), s = c_.succ(z);
  count_edge(p, z, -1);
  count_edge(z, s, -1);
  c_.unlink(z);
  count_edge(p, s, 1);
  count_vertex(z, -1);
  ++stats_.vertices_removed;
}

std::vector<Vid> TupleBuilder::shortest_inner_path(Vid from, Vid to, std::int32_t label) {
  parent_.reset();
  dist_.reset();
  parent_.set(from, from);
  dist_.set(from, 0);
  std::deque<Vid> queue{from};
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    const std::uint32_t d = dist_.get(v);
    for (Vid w : ws_.neighbors(v)) {
      if (parent_.has(w) || c_.contains(w) || labels_.label(w) != label) continue;
      parent_.set(w, v);
      dist_.set(w, d + 1);
      if (ws_.adjacent(w, to)) {
        std::vector<Vid> inner;
        for (Vid x = w; x != from; x = parent_.get(x)) inner.push_back(x);
        std::reverse(inner.begin(), inner.end());
        return inner;
      }
      if (d + 1 >= opt_.cap)
        throw ResourceCapExceeded("path from " + ws_.token(from) + " to " + ws_.token(to) +
                                  " inside its component exceeds the working radius cap " + std::to_string(opt_.cap));
      queue.push_back(w);
    }
  }
  fail("no path from " + ws_.token(from) + " to " + ws_.token(to) + " through the component");
}

DenseRecord TupleBuilder::must_find(Vid v, const DenseFilters& f, const char* context) {
  SearchDiagnosis why;
  auto rec = search_extension(ws_, c_, v, f, &why);
  if (!rec)
    throw ExtensionError(why.reason, std::string(phase_name(phase_)) + " phase, " + context + ": " + why.detail);
  return *rec;
}

void TupleBuilder::check_dirty(const char* context) {
  for (auto r : dirty_) {
    dirty_flag_[r] = 0;
    const std::string where = std::string(context) + ", part " + std::to_string(r);
    if (phase_ == Phase::Promising) {
      if (in_i_[r]) {
        if (s_on_[r] != 2) fail(where + ": cycle holds " + std::to_string(s_on_[r]) + " vertices of S");
        if (k_on_[r] < 1) fail(where + ": cycle misses the component");
        if (s_edges_[r] != 0) fail(where + ": cycle uses an edge inside S");
        if (cross_[r] != 2) fail(where + ": cut met " + std::to_string(cross_[r]) + " times");
      } else if (s_on_[r] != 0 || k_on_[r] != 0) {
        fail(where + ": cycle enters a part outside the index set");
      }
    } else if (phase_ != Phase::K0 && cross_[r] != 2) {
      fail(where + ": cut met " + std::to_string(cross_[r]) + " times");
    }
  }
  dirty_.clear();
}

void TupleBuilder::check_edge_stability(const char* context) {
  for (const auto& [a, b] : stable_edges_)
    if (!c_.has_edge(a, b))
      fail(std::string(context) + ": far edge " + ws_.token(a) + "-" + ws_.token(b) + " left the cycle");
}

void TupleBuilder::extend_to_k0() {
  phase_ = Phase::K0;
  // Breadth-first order over K0 from the current cycle.
  std::vector<Vid> sources = c_.sequence_from(c_.anchor());
  ws_.sort(sources);
  dist_.reset();
  std::deque<Vid> queue;
  for (Vid v : sources) {
    dist_.set(v, 0);
    queue.push_back(v);
  }
  std::vector<Vid> targets;
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    for (Vid w : ws_.neighbors(v))
      if (!dist_.has(w) && labels_.label(w) == BlockLabels::kK0) {
        dist_.set(w, 1);
        targets.push_back(w);
        queue.push_back(w);
      }
  }
  DenseFilters all;
  for (Vid y : targets) {
    if (c_.contains(y)) continue;
    DenseRecord rec = must_find(y, all, "extending to K0");
    if (rec.kind == ExtensionKind::Type2_1 && labels_.in_blocker(rec.w)) {
      if (!ws_.adjacent(y, rec.x))
        throw HypothesisViolation("target " + ws_.token(y) + " would pull blocker vertex " + ws_.token(rec.w) +
                                  " into the cycle and " + ws_.token(rec.x) + " is not adjacent to it");
      rec = DenseRecord{ExtensionKind::Type1, y, rec.u, rec.x, kNoVid, rec.plus};
      ++stats_.converted_to_type1;
    }
    apply(rec);
  }
  for (auto r : dirty_) dirty_flag_[r] = 0;
  dirty_.clear();
  if (c_.length() != u_.k0.size()) fail("cycle does not span K0 exactly");
  for (Vid v : u_.k0)
    if (!c_.contains(v)) fail("K0 vertex " + ws_.token(v) + " is missing from the cycle");
  check_edge_stability("after extending to K0");
}

void TupleBuilder::vprime_step(std::uint32_t j, Vid v) {
  const auto want = static_cast<std::int32_t>(2 * j + 1);
  Vid vp = kNoVid;
  for (Vid w : ws_.neighbors(v))
    if (labels_.label(w) == want) {
      vp = w;
      break;
    }
  if (vp == kNoVid) fail("blocker vertex " + ws_.token(v) + " has no neighbour in its component");
  const std::function<bool(Vid)> only_v = [v](Vid b) { return b == v; };
  DenseFilters f;
  f.base = &only_v;
  const DenseRecord rec = must_find(vp, f, "second step into the component");
  if (rec.kind == ExtensionKind::Type1) {
    stats_.notes.push_back("part " + std::to_string(j) + ": " + ws_.token(vp) + " entered by TYPE1 in the second step");
  } else if (rec.kind == ExtensionKind::Type2_2) {
    fail("second step for part " + std::to_string(j) + " used TYPE2_2 at " + ws_.token(rec.w));
  } else if (labels_.label(rec.w) != static_cast<std::int32_t>(2 * j)) {
    fail("second step for part " + std::to_string(j) + " routed through " + ws_.token(rec.w) + " outside S");
  }
  apply(rec);
  ++stats_.vprime_steps;
}

void TupleBuilder::process_part(std::uint32_t j) {
  const Vid v = u_.parts[j].s.front();
  const auto sj = static_cast<std::int32_t>(2 * j);
  DenseFilters t1;
  t1.type2_1 = t1.type2_2 = false;
  if (auto rec = search_extension(ws_, c_, v, t1)) {
    apply(*rec);
    ++stats_.case1;
    vprime_step(j, v);
    return;
  }
  const std::function<bool(Vid)> in_k0 = [this](Vid b) { return labels_.label(b) == BlockLabels::kK0; };
  DenseFilters t2;
  t2.type1 = false;
  t2.base = &in_k0;
  const DenseRecord rec = must_find(v, t2, "entering a part");
  const auto lw = labels_.label(rec.w);
  if (rec.kind == ExtensionKind::Type2_2) {
    if (lw != BlockLabels::kK0) fail("TYPE2_2 into part " + std::to_string(j) + " moved " + ws_.token(rec.w) + " outside K0");
    apply(rec);
    ++stats_.case3;
    vprime_step(j, v);
    return;
  }
  if (lw == sj) {
    apply(rec);
    TraceStep st;
    st.phase = phase_;
    st.op = TraceStep::Op::PathReplacement;
    st.a = v;
    st.b = rec.w;
    st.inner = shortest_inner_path(v, rec.w, sj + 1);
    insert_path(v, rec.w, st.inner);
    if (sink_) sink_(st);
    ++stats_.subcase21;
    return;
  }
  if (lw < 0 || lw % 2 != 0) fail("TYPE2_1 into part " + std::to_string(j) + " used " + ws_.token(rec.w) + " outside the blocker");
  const auto i = static_cast<std::uint32_t>(lw / 2);
  if (labels_.label(rec.x) != lw)
    fail("impossible subcase: " + ws_.token(rec.w) + " in part " + std::to_string(i) + " while the foundation end " +
         ws_.token(rec.x) + " is not; TYPE1 should have applied to " + ws_.token(v));
  if (!in_i_[i]) fail("foundation end " + ws_.token(rec.x) + " lies in part " + std::to_string(i) + " outside the index set");
  apply(rec);
  // Walk the S_i-to-S_i subpath starting at r away from w.
  const Vid r = rec.x;
  const bool forward = c_.pred(r) == rec.w;
  auto next = [&](Vid z) { return forward ? c_.succ(z) : c_.pred(z); };
  TraceStep st;
  st.phase = phase_;
  st.op = TraceStep::Op::Reroute;
  st.a = r;
  Vid q = next(r);
  while (labels_.label(q) == lw + 1) {
    st.removed.push_back(q);
    q = next(q);
  }
  const Vid s = q;
  if (labels_.label(s) != lw || s == r || st.removed.empty())
    fail("part " + std::to_string(i) + " is not crossed by a single path through its component");
  st.b = s;
  remove_vertex(r);
  for (Vid z : st.removed) remove_vertex(z);
  st.inner = shortest_inner_path(rec.w, s, lw + 1);
  insert_path(rec.w, s, st.inner);
  if (sink_) sink_(st);
  ++stats_.subcase222;
  vprime_step(j, v);
}

void TupleBuilder::grow_in(std::uint32_t i) {
  const auto want = static_cast<std::int32_t>(2 * i + 1);
  const auto& part = u_.parts[i];
  const std::vector<Vid> targets = neighborhood_in_component(ws_, labels_, u_, i, 3);
  auto all_in = [&] {
    for (Vid t : targets)
      if (!c_.contains(t)) return false;
    return true;
  };
  if (all_in()) return;
  const std::function<bool(Vid)> in_m = [this, i](Vid b) { return labels_.part(b) == static_cast<std::int32_t>(i); };
  DenseFilters f;
  f.base = &in_m;
  std::deque<Vid> queue;
  std::vector<Vid> region, order;
  for (std::size_t r = 3;; ++r) {
    if (r > opt_.cap)
      throw ResourceCapExceeded("absorbing the 3-neighbourhood of part " + std::to_string(i) +
                                " needs a radius beyond the cap " + std::to_string(opt_.cap));
    stats_.grow_radius = std::max(stats_.grow_radius, r);
    dist_.reset();
    region.clear();
    for (Vid s : part.s) {
      dist_.set(s, 0);
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const Vid v = queue.front();
      queue.pop_front();
      const std::uint32_t d = dist_.get(v);
      if (d == r) continue;
      for (Vid w : ws_.neighbors(v))
        if (!dist_.has(w) && labels_.label(w) == want) {
          dist_.set(w, d + 1);
          region.push_back(w);
          queue.push_back(w);
        }
    }
    parent_.reset();
    order.clear();
    for (Vid s : part.s)
      if (c_.contains(s)) {
        parent_.set(s, s);
        queue.push_back(s);
      }
    for (Vid y : region)
      if (c_.contains(y)) {
        parent_.set(y, y);
        queue.push_back(y);
      }
    while (!queue.empty()) {
      const Vid v = queue.front();
      queue.pop_front();
      for (Vid w : ws_.neighbors(v))
        if (dist_.has(w) && !parent_.has(w) && !c_.contains(w) && labels_.label(w) == want) {
          parent_.set(w, v);
          order.push_back(w);
          queue.push_back(w);
        }
    }
    need_.reset();
    for (Vid t : targets) {
      if (c_.contains(t) || !parent_.has(t)) continue;
      for (Vid x = t; !c_.contains(x) && !need_.has(x); x = parent_.get(x)) need_.set(x, 1);
    }
    for (Vid y : order) {
      if (!need_.has(y) || c_.contains(y)) continue;
      const DenseRecord rec = must_find(y, f, "absorbing a component neighbourhood");
      if (rec.kind == ExtensionKind::Type2_2 && labels_.label(rec.w) == want - 1 &&
          labels_.part(c_.pred(rec.w)) != static_cast<std::int32_t>(i) &&
          labels_.part(c_.succ(rec.w)) != static_cast<std::int32_t>(i))
        fail("impossible case: both cycle neighbours of " + ws_.token(rec.w) + " lie outside part " + std::to_string(i));
      apply(rec);
      check_dirty("absorbing");
    }
    if (all_in()) return;
  }
}

void TupleBuilder::build_promising() {
  phase_ = Phase::Promising;
  reset_counters();
  if (c_.length() != u_.k0.size()) fail("the starting cycle must span K0 exactly");
  for (Vid v : u_.k0)
    if (!c_.contains(v)) fail("the starting cycle misses K0 vertex " + ws_.token(v));
  for (std::uint32_t j = 0; j < u_.parts.size(); ++j) {
    process_part(j);
    in_i_[j] = 1;
    mark_dirty(j);
    check_dirty("entering a part");
  }
  for (Vid v : u_.k0)
    if (!c_.contains(v)) fail("K0 vertex " + ws_.token(v) + " left the cycle");

  phase_ = Phase::GrowIn;
  for (std::uint32_t i = 0; i < u_.parts.size(); ++i) grow_in(i);
  (void)crossing_edges();
  check_edge_stability("after the promising tuple");
}

void TupleBuilder::build_good() {
  phase_ = Phase::Good;
  std::fill(in_i_.begin(), in_i_.end(), 1);
  reset_counters();
  for (std::size_t r = 0; r < cross_.size(); ++r)
    if (cross_[r] != 2) fail("the starting tuple is not promising at part " + std::to_string(r));
  std::vector<Vid> targets;
  for (Vid s : u_.blocker)
    if (!c_.contains(s)) targets.push_back(s);
  const std::size_t limit = targets.size();
  std::size_t step = 0;
  std::vector<std::uint32_t> pu, px, pv, pw;
  DenseFilters all;
  for (Vid v : targets) {
    if (c_.contains(v)) continue;
    const DenseRecord rec = must_find(v, all, "adding a blocker vertex");
    if (++step > limit) fail("more steps than missing blocker vertices");
    parts_into(rec.u, pu);
    parts_into(rec.x, px);
    const std::vector<std::uint32_t> foundation_cut = sym_diff(pu, px);
    const EdgeChange ch = apply_extension(c_, rec);
    for (int e = 0; e < ch.n_removed; ++e) count_edge(ch.removed[e].first, ch.removed[e].second, -1);
    if (rec.kind == ExtensionKind::Type1) {
      pv = sorted_union(pu, px);
      set_parts(rec.v, pv);
      pw.clear();
    } else {
      pv = pu;
      pw = px;
      set_parts(rec.v, pv);
      set_parts(rec.w, pw);
    }
    for (int e = 0; e < ch.n_added; ++e) count_edge(ch.added[e].first, ch.added[e].second, 1);
    count_vertex(rec.v, 1);
    if (rec.kind == ExtensionKind::Type2_1) count_vertex(rec.w, 1);
    ++stats_.steps[static_cast<int>(phase_)];
    ++stats_.kinds[static_cast<int>(rec.kind)];
    const std::string where = "step " + std::to_string(step) + " (TYPE" + std::string(kind_name(rec.kind)) + ")";
    check_dirty(where.c_str());
    if (rec.kind != ExtensionKind::Type1) {
      const auto vw_cut = sym_diff(pv, pw);
      for (auto s : foundation_cut)
        if (!contains_sorted(vw_cut, s)) fail(where + ": vw does not take over the cut of part " + std::to_string(s));
      if (c_.has_edge(rec.u, rec.x)) fail(where + ": the foundation is still on the cycle");
    }
    if (sink_) {
      TraceStep st;
      st.phase = phase_;
      st.rec = rec;
      st.parts_v = &pv;
      st.parts_w = &pw;
      sink_(st);
    }
  }
  for (Vid v : u_.k0)
    if (!c_.contains(v)) fail("K0 vertex " + ws_.token(v) + " is missing");
  for (Vid s : u_.blocker)
    if (!c_.contains(s)) fail("blocker vertex " + ws_.token(s) + " is missing");
  // Moved vertices stay inside the blocker and its neighbourhood; removals
  // from a component only touch neighbours of its S.
  for (const auto& [z, parts] : overrides_) {
    const auto l = labels_.label(z);
    bool near_blocker = labels_.in_blocker(z);
    for (Vid w : ws_.neighbors(z)) near_blocker = near_blocker || labels_.in_blocker(w);
    if (!near_blocker) fail("vertex " + ws_.token(z) + " changed membership away from the blocker");
    if (l >= 0 && l % 2 == 1 && !contains_sorted(parts, static_cast<std::uint32_t>(l / 2))) {
      bool touches_s = false;
      for (Vid w : ws_.neighbors(z)) touches_s = touches_s || labels_.label(w) == l - 1;
      if (!touches_s) fail("vertex " + ws_.token(z) + " left its component set without touching S");
    }
  }
  (void)crossing_edges();
  check_edge_stability("after the good tuple");
}

std::vector<CutPair> TupleBuilder::crossing_edges() {
  const std::size_t k = u_.parts.size();
  std::vector<CutPair> out(k);
  std::vector<std::uint32_t> count(k, 0);
  auto& pa = edge_parts_[0];
  auto& pb = edge_parts_[1];
  const Vid start = c_.anchor();
  Vid a = start;
  do {
    const Vid b = c_.succ(a);
    parts_into(a, pa);
    parts_into(b, pb);
    auto e = ws_.less(a, b) ? std::pair{a, b} : std::pair{b, a};
    auto note = [&](std::uint32_t r) {
      if (count[r] < 2) out[r][count[r]] = e;
      ++count[r];
    };
    for (auto r : pa)
      if (!contains_sorted(pb, r)) note(r);
    for (auto r : pb)
      if (!contains_sorted(pa, r)) note(r);
    a = b;
  } while (a != start);
  for (std::size_t r = 0; r < k; ++r) {
    if (count[r] != 2) fail("cut of part " + std::to_string(r) + " is met " + std::to_string(count[r]) + " times");
    auto& p = out[r];
    if (ws_.less(p[1].first, p[0].first) || (p[1].first == p[0].first && ws_.less(p[1].second, p[0].second)))
      std::swap(p[0], p[1]);
  }
  return out;
}

namespace {

struct DenseSetup {
  Workspace ws;
  DenseUmbrella u;
  std::unique_ptr<BlockLabels> labels;
  CycleBuilder cycle;

  DenseSetup(const GraphOracle& o, const OrientedCycle& c, const Umbrella& um) : ws(borrow(o)) {
    u = to_dense(ws, um);
    labels = std::make_unique<BlockLabels>(ws, u);
    std::vector<Vid> seq;
    for (const auto& v : c.sequence()) seq.push_back(ws.intern_checked(v));
    cycle.assign(seq);
  }

  std::vector<Vid> intern_all(const OrientedCycle& c) {
    std::vector<Vid> seq;
    for (const auto& v : c.sequence()) seq.push_back(ws.intern_checked(v));
    return seq;
  }

  OrientedCycle result() const {
    std::vector<VertexId> seq;
    for (Vid v : cycle.sequence_from(cycle.anchor())) seq.push_back(ws.id(v));
    return OrientedCycle(std::move(seq)).canonical_rotation();
  }
};

}  // namespace

OrientedCycle extend_to_k0(const GraphOracle& o, const OrientedCycle& c, const Umbrella& u, const TupleOptions& opt) {
  DenseSetup d(o, c, u);
  TupleBuilder tb(d.ws, d.u, *d.labels, d.cycle, opt);
  tb.extend_to_k0();
  return d.result();
}

PromisingTuple build_promising(const GraphOracle& o, const OrientedCycle& c, const Umbrella& u,
                               const TupleOptions& opt) {
  DenseSetup d(o, c, u);
  TupleBuilder tb(d.ws, d.u, *d.labels, d.cycle, opt);
  tb.extend_to_k0();
  tb.build_promising();
  PromisingTuple out{d.result(), {}};
  for (const auto& p : u.parts) out.s.push_back(p.s);
  return out;
}

GoodTuple build_good(const GraphOracle& o, const PromisingTuple& p, const Umbrella& u, const OrientedCycle& c_orig,
                     const TupleOptions& opt) {
  DenseSetup d(o, p.d, u);
  const std::vector<Vid> ref = d.intern_all(c_orig);
  TupleBuilder tb(d.ws, d.u, *d.labels, d.cycle, opt, {}, ref);
  tb.build_good();
  GoodTuple out{d.result(), std::vector<PartDelta>(u.parts.size())};
  for (const auto& [z, parts] : tb.overrides()) {
    const auto l = d.labels->label(z);
    const VertexId id = d.ws.id(z);
    for (auto r : parts)
      if (l < 0 || static_cast<std::uint32_t>(l / 2) != r) out.delta[r].added.insert(id);
    if (l >= 0 && !contains_sorted(parts, static_cast<std::uint32_t>(l / 2))) out.delta[l / 2].removed.insert(id);
  }
  return out;
}

}  // namespace clawham
