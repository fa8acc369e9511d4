#include "clawham/extension.hpp"

#include <algorithm>

namespace clawham {

std::string_view kind_name(ExtensionKind k) {
  switch (k) {
    case ExtensionKind::Type1:
      return "1";
    case ExtensionKind::Type2_1:
      return "2.1";
    case ExtensionKind::Type2_2:
      return "2.2";
  }
  return "?";
}

ExtensionKind parse_kind(std::string_view name) {
  if (name == "1") return ExtensionKind::Type1;
  if (name == "2.1") return ExtensionKind::Type2_1;
  if (name == "2.2") return ExtensionKind::Type2_2;
  throw InputError("unknown extension kind '" + std::string(name) + "'");
}

void CycleBuilder::ensure(Vid v) {
  if (v >= succ_.size()) {
    const std::size_t n = std::max<std::size_t>(static_cast<std::size_t>(v) + 1, succ_.size() * 3 / 2 + 16);
    succ_.resize(n, kNoVid);
    pred_.resize(n, kNoVid);
  }
}

void CycleBuilder::assign(std::span<const Vid> sequence) {
  for (std::size_t i = 0; i < succ_.size(); ++i) succ_[i] = pred_[i] = kNoVid;
  length_ = 0;
  anchor_ = kNoVid;
  if (sequence.size() < 3) throw InputError("a cycle needs at least three vertices");
  for (Vid v : sequence) ensure(v);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Vid a = sequence[i], b = sequence[(i + 1) % sequence.size()];
    if (succ_[a] != kNoVid) throw InputError("cycle repeats a vertex");
    succ_[a] = b;
    pred_[b] = a;
  }
  length_ = sequence.size();
  anchor_ = sequence.front();
}

void CycleBuilder::insert_after(Vid u, Vid v) {
  ensure(v);
  const Vid next = succ_[u];
  succ_[u] = v;
  pred_[v] = u;
  succ_[v] = next;
  pred_[next] = v;
  ++length_;
}

void CycleBuilder::unlink(Vid w) {
  const Vid a = pred_[w], b = succ_[w];
  succ_[a] = b;
  pred_[b] = a;
  succ_[w] = pred_[w] = kNoVid;
  --length_;
  if (anchor_ == w) anchor_ = b;
}

std::vector<Vid> CycleBuilder::sequence_from(Vid start) const {
  std::vector<Vid> out;
  out.reserve(length_);
  Vid v = start;
  do {
    out.push_back(v);
    v = succ_[v];
  } while (v != start);
  return out;
}

std::optional<DenseRecord> search_extension(Workspace& ws, const CycleBuilder& c, Vid v, const DenseFilters& f,
                                            SearchDiagnosis* why) {
  const auto nbrs = ws.neighbors(v);
  std::vector<Vid> bases;
  bool touches = false;
  for (Vid u : nbrs) {
    if (!c.contains(u)) continue;
    touches = true;
    if (!f.base || (*f.base)(u)) bases.push_back(u);
  }
  auto fail = [&](ExtensionError::Reason r, std::string detail) -> std::optional<DenseRecord> {
    if (why) {
      why->reason = r;
      why->detail = std::move(detail);
    }
    return std::nullopt;
  };
  if (c.contains(v)) return fail(ExtensionError::Reason::NotAdjacent, "target " + ws.token(v) + " is on the cycle");
  if (!touches) return fail(ExtensionError::Reason::NotAdjacent, "target " + ws.token(v) + " has no cycle neighbour");
  if (bases.empty()) return fail(ExtensionError::Reason::FiltersExhausted, "no admissible base for " + ws.token(v));

  if (f.type1) {
    for (Vid u : bases) {
      if (ws.adjacent(v, c.succ(u))) return DenseRecord{ExtensionKind::Type1, v, u, c.succ(u), kNoVid, true};
      if (ws.adjacent(v, c.pred(u))) return DenseRecord{ExtensionKind::Type1, v, u, c.pred(u), kNoVid, false};
    }
  }

  std::string claw, phi;
  auto common_w = [&](Vid u, Vid x, bool on_cycle) -> Vid {
    const Vid um = c.pred(u), up = c.succ(u);
    for (Vid w : nbrs) {
      if (w == um || w == u || w == up) continue;
      if (c.contains(w) != on_cycle) continue;
      if (f.forbidden_w && (*f.forbidden_w)(w)) continue;
      if (!ws.adjacent(w, x)) continue;
      if (on_cycle && !ws.adjacent(c.pred(w), c.succ(w))) continue;
      return w;
    }
    return kNoVid;
  };

  for (Vid u : bases) {
    const Vid um = c.pred(u), up = c.succ(u);
    if (ws.adjacent(v, um) || ws.adjacent(v, up)) continue;
    if (!ws.adjacent(um, up)) {
      if (claw.empty())
        claw = "claw at " + ws.token(u) + " with leaves " + ws.token(um) + ", " + ws.token(up) + ", " + ws.token(v);
      continue;
    }
    bool any = false;
    for (Vid x : {up, um})
      for (Vid w : nbrs)
        if (w != um && w != u && w != up && ws.adjacent(w, x)) any = true;
    if (!any && phi.empty())
      phi = "paw " + ws.token(u) + "," + ws.token(v) + "," + ws.token(um) + "," + ws.token(up) +
            " has no outside common neighbour";
  }

  if (f.type2_1) {
    for (Vid u : bases) {
      for (bool plus : {true, false}) {
        const Vid x = plus ? c.succ(u) : c.pred(u);
        if (const Vid w = common_w(u, x, false); w != kNoVid)
          return DenseRecord{ExtensionKind::Type2_1, v, u, x, w, plus};
      }
    }
  }
  if (f.type2_2) {
    for (Vid u : bases) {
      for (bool plus : {true, false}) {
        const Vid x = plus ? c.succ(u) : c.pred(u);
        if (const Vid w = common_w(u, x, true); w != kNoVid)
          return DenseRecord{ExtensionKind::Type2_2, v, u, x, w, plus};
      }
    }
  }
  if (!claw.empty()) return fail(ExtensionError::Reason::Claw, claw);
  if (!phi.empty()) return fail(ExtensionError::Reason::PhiAbsent, phi);
  return fail(ExtensionError::Reason::FiltersExhausted, "no extension for " + ws.token(v) + " under the filters");
}

EdgeChange apply_extension(CycleBuilder& c, const DenseRecord& r) {
  EdgeChange ch;
  if (r.kind == ExtensionKind::Type2_2) {
    const Vid wm = c.pred(r.w), wp = c.succ(r.w);
    ch.removed[ch.n_removed++] = {wm, r.w};
    ch.removed[ch.n_removed++] = {r.w, wp};
    ch.added[ch.n_added++] = {wm, wp};
    c.unlink(r.w);
  }
  ch.removed[ch.n_removed++] = {r.u, r.x};
  if (r.kind == ExtensionKind::Type1) {
    c.insert_after(r.plus ? r.u : r.x, r.v);
    ch.added[ch.n_added++] = {r.u, r.v};
    ch.added[ch.n_added++] = {r.v, r.x};
  } else if (r.plus) {
    c.insert_after(r.u, r.v);
    c.insert_after(r.v, r.w);
    ch.added[ch.n_added++] = {r.u, r.v};
    ch.added[ch.n_added++] = {r.v, r.w};
    ch.added[ch.n_added++] = {r.w, r.x};
  } else {
    c.insert_after(r.x, r.w);
    c.insert_after(r.w, r.v);
    ch.added[ch.n_added++] = {r.u, r.v};
    ch.added[ch.n_added++] = {r.v, r.w};
    ch.added[ch.n_added++] = {r.w, r.x};
  }
  return ch;
}

std::string check_extension(Workspace& ws, const CycleBuilder& c, const DenseRecord& r) {
  if (r.v == kNoVid || r.u == kNoVid || r.x == kNoVid) return "incomplete record";
  if (c.contains(r.v)) return "target " + ws.token(r.v) + " is already on the cycle";
  if (!c.contains(r.u) || !c.contains(r.x)) return "base or far end is off the cycle";
  if ((r.plus ? c.succ(r.u) : c.pred(r.u)) != r.x) return "far end is not the recorded cycle neighbour of the base";
  if (!ws.adjacent(r.v, r.u)) return "target is not adjacent to the base";
  switch (r.kind) {
    case ExtensionKind::Type1:
      if (r.w != kNoVid) return "TYPE1 record carries a w";
      if (!ws.adjacent(r.v, r.x)) return "target is not adjacent to the far end";
      break;
    case ExtensionKind::Type2_1:
      if (r.w == kNoVid || r.w == r.v || c.contains(r.w)) return "w must be a second off-cycle vertex";
      if (!ws.adjacent(r.v, r.w) || !ws.adjacent(r.w, r.x)) return "v-w-x is not a path";
      break;
    case ExtensionKind::Type2_2:
      if (r.w == kNoVid || !c.contains(r.w) || r.w == r.u || r.w == r.x) return "w must be a third cycle vertex";
      if (!ws.adjacent(r.v, r.w) || !ws.adjacent(r.w, r.x)) return "v-w-x is not a path";
      if (!ws.adjacent(c.pred(r.w), c.succ(r.w))) return "the cycle neighbours of w are not adjacent";
      break;
  }
  return {};
}

ExtensionRecord to_record(const Workspace& ws, const DenseRecord& r) {
  ExtensionRecord out;
  out.kind = r.kind;
  out.target = ws.id(r.v);
  out.base = ws.id(r.u);
  out.foundation = Edge(out.base, ws.id(r.x));
  if (r.w != kNoVid) out.w = ws.id(r.w);
  out.successor_side = r.plus;
  return out;
}

ExtensionRecord find_extension(const GraphOracle& o, const OrientedCycle& c, const VertexId& v,
                               const ExtensionFilters& filters) {
  Workspace ws(borrow(o));
  std::vector<Vid> seq;
  for (const auto& x : c.sequence()) seq.push_back(ws.intern_checked(x));
  const Vid target = ws.intern_checked(v);
  CycleBuilder cb(seq);
  std::function<bool(Vid)> base, forbidden;
  DenseFilters f;
  if (filters.base_filter) {
    base = [&](Vid u) { return filters.base_filter(ws.id(u)); };
    f.base = &base;
  }
  if (!filters.forbidden_w.empty()) {
    forbidden = [&](Vid w) { return filters.forbidden_w.contains(ws.id(w)); };
    f.forbidden_w = &forbidden;
  }
  SearchDiagnosis why;
  const auto rec = search_extension(ws, cb, target, f, &why);
  if (!rec) throw ExtensionError(why.reason, why.detail);
  return to_record(ws, *rec);
}

OrientedCycle apply_extension(const OrientedCycle& c, const ExtensionRecord& rec) {
  auto mismatch = [](const std::string& what) { return InputError("extension record does not fit the cycle: " + what); };
  if (c.contains(rec.target)) throw mismatch("target already on the cycle");
  if (!c.contains(rec.base)) throw mismatch("base not on the cycle");
  const VertexId& far = rec.far_end();
  if ((rec.successor_side ? c.successor(rec.base) : c.predecessor(rec.base)) != far)
    throw mismatch("foundation is not a cycle edge on the recorded side");
  std::vector<VertexId> seq = c.sequence();
  if (rec.kind != ExtensionKind::Type1) {
    if (!rec.w) throw mismatch("missing w");
    const bool on = c.contains(*rec.w);
    if (on != (rec.kind == ExtensionKind::Type2_2)) throw mismatch("w membership does not match the kind");
    if (*rec.w == rec.base || *rec.w == far) throw mismatch("w coincides with the foundation");
    if (on) seq.erase(std::find(seq.begin(), seq.end(), *rec.w));
  } else if (rec.w) {
    throw mismatch("TYPE1 record carries w");
  }
  const auto pos = static_cast<std::size_t>(std::find(seq.begin(), seq.end(), rec.base) - seq.begin());
  std::vector<VertexId> insert;
  if (rec.kind == ExtensionKind::Type1) {
    insert = {rec.target};
  } else if (rec.successor_side) {
    insert = {rec.target, *rec.w};
  } else {
    insert = {*rec.w, rec.target};
  }
  const std::size_t at = rec.successor_side ? pos + 1 : pos;
  seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(at), insert.begin(), insert.end());
  return OrientedCycle(std::move(seq));
}

}  // namespace clawham
