#include "clawham/separators.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "clawham/errors.hpp"

namespace clawham {

namespace {

constexpr std::uint32_t kGroupingSlack = 8;
constexpr std::size_t kLabelSearchCap = std::size_t{1} << 22;

enum : std::uint8_t { kFree = 0, kInK = 1, kInBlocker = 2 };

std::uint32_t max_level(const Workspace& ws, std::span<const Vid> s) {
  std::uint32_t h = 0;
  for (Vid v : s) h = std::max(h, ws.level(v));
  return h;
}

bool connected_within(Workspace& ws, std::span<const Vid> x) {
  if (x.empty()) return false;
  std::unordered_set<Vid> in(x.begin(), x.end());
  std::unordered_set<Vid> seen{x.front()};
  std::vector<Vid> stack{x.front()};
  while (!stack.empty()) {
    const Vid v = stack.back();
    stack.pop_back();
    for (Vid w : ws.neighbors(v))
      if (in.contains(w) && seen.insert(w).second) stack.push_back(w);
  }
  return seen.size() == in.size();
}

/// Groups the outside vertices by component of G - (marked), searching only
/// through vertices of level at most cap. Returns group index per vertex of
/// `outside` (same order).
std::vector<std::uint32_t> group_outside(Workspace& ws, const Marks& marks, std::span<const Vid> outside,
                                         std::uint32_t cap) {
  std::unordered_map<Vid, std::uint32_t> group;
  std::uint32_t next = 0;
  std::deque<Vid> queue;
  for (Vid o : outside) {
    if (group.contains(o)) continue;
    const std::uint32_t g = next++;
    group.emplace(o, g);
    queue.assign(1, o);
    while (!queue.empty()) {
      const Vid v = queue.front();
      queue.pop_front();
      for (Vid w : ws.neighbors(v)) {
        if (marks.get(w) != kFree || ws.level(w) > cap) continue;
        if (group.emplace(w, g).second) queue.push_back(w);
      }
    }
  }
  std::vector<std::uint32_t> out;
  out.reserve(outside.size());
  for (Vid o : outside) out.push_back(group.at(o));
  return out;
}

std::uint32_t grouping_cap(const Workspace& ws, std::span<const Vid> blocker, std::span<const Vid> outside) {
  std::uint32_t cap = std::max(max_level(ws, blocker), max_level(ws, outside));
  if (!ws.oracle().tree_like()) cap += kGroupingSlack;
  return cap;
}

}  // namespace

bool certify_infinite(Workspace& ws, Vid v, const Marks& forbidden, std::uint32_t forbidden_level) {
  const std::uint32_t h = std::max(forbidden_level, ws.level(v));
  std::unordered_set<Vid> seen{v};
  std::deque<Vid> queue{v};
  while (!queue.empty()) {
    const Vid u = queue.front();
    queue.pop_front();
    for (Vid w : ws.neighbors(u)) {
      if (forbidden.get(w) != 0 || seen.contains(w)) continue;
      if (ws.level(w) > h) return true;
      seen.insert(w);
      queue.push_back(w);
    }
  }
  return false;
}

DenseUmbrella compute_umbrella_dense(Workspace& ws, std::span<const Vid> x) {
  if (ws.oracle().is_finite()) throw InputError("umbrellas need an infinite graph");
  if (!connected_within(ws, x)) throw InputError("the base set of an umbrella must induce a connected graph");

  Marks marks;
  for (Vid v : x) marks.set(v, kInK);
  std::vector<Vid> t;
  for (Vid v : x)
    for (Vid w : ws.neighbors(v))
      if (marks.get(w) == kFree) {
        marks.set(w, kInBlocker);
        t.push_back(w);
      }
  ws.sort(t);
  const std::uint32_t h = std::max(max_level(ws, x), max_level(ws, t));

  // Greedy minimization: a candidate whose component in G - (rest) is finite
  // is swallowed together with that component.
  std::vector<Vid> region;
  std::unordered_set<Vid> seen;
  std::deque<Vid> queue;
  for (Vid c : t) {
    marks.set(c, kFree);
    region.assign(1, c);
    seen.clear();
    seen.insert(c);
    queue.assign(1, c);
    bool escapes = false;
    while (!queue.empty() && !escapes) {
      const Vid u = queue.front();
      queue.pop_front();
      for (Vid w : ws.neighbors(u)) {
        if (marks.get(w) != kFree || seen.contains(w)) continue;
        if (ws.level(w) > h) {
          escapes = true;
          break;
        }
        seen.insert(w);
        region.push_back(w);
        queue.push_back(w);
      }
    }
    if (escapes) {
      marks.set(c, kInBlocker);
    } else {
      for (Vid r : region) marks.set(r, kInK);
    }
  }

  DenseUmbrella u;
  u.base.assign(x.begin(), x.end());
  ws.sort(u.base);
  for (Vid c : t)
    if (marks.get(c) == kInBlocker) u.blocker.push_back(c);
  {
    std::vector<Vid> stack(x.begin(), x.end());
    std::unordered_set<Vid> k0(x.begin(), x.end());
    while (!stack.empty()) {
      const Vid v = stack.back();
      stack.pop_back();
      for (Vid w : ws.neighbors(v))
        if (marks.get(w) == kInK && k0.insert(w).second) stack.push_back(w);
    }
    u.k0.assign(k0.begin(), k0.end());
    ws.sort(u.k0);
  }
  if (u.blocker.empty()) throw InvariantViolation("umbrella came out empty around a finite set");

  std::vector<Vid> outside;
  {
    std::unordered_set<Vid> out_seen;
    for (Vid s : u.blocker)
      for (Vid w : ws.neighbors(s))
        if (marks.get(w) == kFree && out_seen.insert(w).second) outside.push_back(w);
  }
  ws.sort(outside);
  u.exact_grouping = ws.oracle().tree_like();
  const auto groups = group_outside(ws, marks, outside, grouping_cap(ws, u.blocker, outside));
  std::unordered_map<Vid, std::uint32_t> group_of;
  for (std::size_t i = 0; i < outside.size(); ++i) group_of.emplace(outside[i], groups[i]);

  const std::uint32_t fl = std::max(max_level(ws, u.blocker), max_level(ws, u.k0));
  std::unordered_map<std::uint32_t, std::size_t> part_of_group;
  std::vector<std::vector<Vid>> s_sets, attached;
  for (Vid s : u.blocker) {
    std::uint32_t g = UINT32_MAX;
    for (Vid w : ws.neighbors(s)) {
      auto it = group_of.find(w);
      if (it == group_of.end()) continue;
      if (g != UINT32_MAX && it->second != g)
        throw InvariantViolation("blocker vertex " + ws.token(s) + " touches two infinite components");
      g = it->second;
    }
    if (g == UINT32_MAX) throw InvariantViolation("blocker vertex " + ws.token(s) + " touches no infinite component");
    auto [it, fresh] = part_of_group.emplace(g, s_sets.size());
    if (fresh) {
      s_sets.emplace_back();
      attached.emplace_back();
    }
    s_sets[it->second].push_back(s);
  }
  for (Vid o : outside) attached[part_of_group.at(group_of.at(o))].push_back(o);
  for (std::size_t i = 0; i < s_sets.size(); ++i) {
    DenseUmbrella::Part p;
    p.s = std::move(s_sets[i]);
    p.attached = std::move(attached[i]);
    p.anchor = p.attached.front();
    if (!certify_infinite(ws, p.anchor, marks, fl))
      throw InvariantViolation("component at " + ws.token(p.anchor) + " is finite but lies outside K0");
    u.parts.push_back(std::move(p));
  }
  std::sort(u.parts.begin(), u.parts.end(),
            [&](const DenseUmbrella::Part& a, const DenseUmbrella::Part& b) { return ws.less(a.s.front(), b.s.front()); });
  return u;
}

BlockLabels::BlockLabels(Workspace& ws, const DenseUmbrella& u) : ws_(ws), parts_(u.parts.size()) {
  for (Vid v : u.k0) put(v, kK0);
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    for (Vid s : u.parts[j].s) put(s, static_cast<std::int32_t>(2 * j));
    for (Vid a : u.parts[j].attached) put(a, static_cast<std::int32_t>(2 * j + 1));
  }
}

void BlockLabels::put(Vid v, std::int32_t l) {
  if (v >= labels_.size())
    labels_.resize(std::max<std::size_t>(static_cast<std::size_t>(v) + 1, labels_.size() * 3 / 2 + 64), kUnknown);
  labels_[v] = l;
}

std::int32_t BlockLabels::label(Vid v) {
  if (const auto l = get(v); l != kUnknown) return l;
  // Vertices outside K0, the blocker and its outside neighbours only touch
  // vertices of their own component, so any descending chain stays inside it.
  std::vector<Vid> chain;
  Vid cur = v;
  std::int32_t l = kUnknown;
  while (true) {
    if (const auto known = get(cur); known != kUnknown) {
      l = known;
      break;
    }
    chain.push_back(cur);
    Vid lower = kNoVid;
    for (Vid w : ws_.neighbors(cur))
      if (ws_.level(w) < ws_.level(cur)) {
        lower = w;
        break;
      }
    if (lower == kNoVid) {
      l = resolve_by_search(cur);
      break;
    }
    cur = lower;
  }
  for (Vid c : chain) put(c, l);
  return l;
}

std::int32_t BlockLabels::resolve_by_search(Vid v) {
  std::unordered_set<Vid> seen{v};
  std::deque<Vid> queue{v};
  while (!queue.empty()) {
    const Vid u = queue.front();
    queue.pop_front();
    for (Vid w : ws_.neighbors(u)) {
      if (const auto l = get(w); l != kUnknown) {
        if (l < 0 || l % 2 == 0)
          throw InvariantViolation("vertex " + ws_.token(v) + " reaches K0 or the blocker without passing an attached vertex");
        return l;
      }
      if (seen.insert(w).second) {
        if (seen.size() > kLabelSearchCap) throw ResourceCapExceeded("block label search exceeded its cap");
        queue.push_back(w);
      }
    }
  }
  throw InvariantViolation("vertex " + ws_.token(v) + " lies in a finite component outside K0");
}

std::vector<Vid> neighborhood_in_component(Workspace& ws, BlockLabels& labels, const DenseUmbrella& u,
                                           std::size_t part, std::size_t radius) {
  const auto want = static_cast<std::int32_t>(2 * part + 1);
  std::unordered_map<Vid, std::size_t> dist;
  std::deque<Vid> queue;
  for (Vid s : u.parts.at(part).s) {
    dist.emplace(s, 0);
    queue.push_back(s);
  }
  std::vector<Vid> out;
  while (!queue.empty()) {
    const Vid v = queue.front();
    queue.pop_front();
    const std::size_t d = dist.at(v);
    if (d == radius) continue;
    for (Vid w : ws.neighbors(v)) {
      if (dist.contains(w) || labels.label(w) != want) continue;
      dist.emplace(w, d + 1);
      out.push_back(w);
      queue.push_back(w);
    }
  }
  return out;
}

nlohmann::json SeparatorReport::to_json() const {
  return {{"ok", ok}, {"violations", violations}, {"parts_checked", parts_checked}, {"blocker_checked", blocker_checked}};
}

SeparatorReport check_separator_facts_dense(Workspace& ws, const DenseUmbrella& u) {
  SeparatorReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    if (r.violations.size() < 32) r.violations.push_back(std::move(msg));
  };
  Marks k0m, bm;
  for (Vid v : u.k0) k0m.set(v, 1);
  for (Vid v : u.blocker) {
    if (k0m.get(v)) fail("blocker vertex " + ws.token(v) + " lies in K0");
    bm.set(v, 1);
  }
  for (Vid v : u.base)
    if (!k0m.get(v)) fail("base vertex " + ws.token(v) + " is not in K0");

  // Parts partition the blocker.
  std::unordered_map<Vid, std::size_t> part_of;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    if (u.parts[j].s.empty()) fail("part " + std::to_string(j) + " is empty");
    for (Vid s : u.parts[j].s) {
      if (!bm.get(s)) fail("part vertex " + ws.token(s) + " is not in the blocker");
      if (!part_of.emplace(s, j).second) fail("vertex " + ws.token(s) + " lies in two parts");
    }
  }
  for (Vid s : u.blocker)
    if (!part_of.contains(s)) fail("blocker vertex " + ws.token(s) + " belongs to no part");

  // K0 is a finite component of G - blocker.
  if (!connected_within(ws, u.k0)) fail("K0 is not connected");
  for (Vid v : u.k0)
    for (Vid w : ws.neighbors(v))
      if (!k0m.get(w) && !bm.get(w)) {
        fail("K0 vertex " + ws.token(v) + " has the outside neighbour " + ws.token(w));
        break;
      }

  Marks all;
  for (Vid v : u.k0) all.set(v, kInK);
  for (Vid v : u.blocker) all.set(v, kInBlocker);
  const std::uint32_t bl = max_level(ws, u.blocker);
  const std::uint32_t kl = std::max(bl, max_level(ws, u.k0));
  std::vector<Vid> outside;
  {
    std::unordered_set<Vid> seen;
    for (Vid s : u.blocker)
      for (Vid w : ws.neighbors(s))
        if (all.get(w) == kFree && seen.insert(w).second) outside.push_back(w);
  }
  const auto groups = group_outside(ws, all, outside, grouping_cap(ws, u.blocker, outside));
  std::unordered_map<Vid, std::uint32_t> group_of;
  for (std::size_t i = 0; i < outside.size(); ++i) group_of.emplace(outside[i], groups[i]);

  // Minimality and adjacency to K0.
  Marks others = all;
  for (Vid v : u.k0) others.set(v, kFree);
  for (Vid s : u.blocker) {
    ++r.blocker_checked;
    bool touches_k0 = false;
    for (Vid w : ws.neighbors(s)) touches_k0 = touches_k0 || k0m.get(w);
    if (!touches_k0) fail("blocker vertex " + ws.token(s) + " has no neighbour in K0");
    others.set(s, kFree);
    if (!certify_infinite(ws, s, others, bl)) fail("blocker is not minimal at " + ws.token(s));
    others.set(s, kInBlocker);
  }

  // Exclusive adjacency: part j owns exactly the component of its anchor.
  std::unordered_map<std::uint32_t, std::size_t> owner;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    ++r.parts_checked;
    const auto& p = u.parts[j];
    auto it = group_of.find(p.anchor);
    if (it == group_of.end()) {
      fail("anchor of part " + std::to_string(j) + " is not attached to the blocker");
      continue;
    }
    if (!owner.emplace(it->second, j).second) fail("two parts share the component at " + ws.token(p.anchor));
    if (!certify_infinite(ws, p.anchor, all, kl))
      fail("component at " + ws.token(p.anchor) + " is finite");
  }
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    for (Vid s : u.parts[j].s) {
      bool own = false;
      for (Vid w : ws.neighbors(s)) {
        auto g = group_of.find(w);
        if (g == group_of.end()) continue;
        auto o = owner.find(g->second);
        if (o == owner.end() || o->second != j) {
          fail("vertex " + ws.token(s) + " of part " + std::to_string(j) + " touches a foreign component at " +
               ws.token(w));
        } else {
          own = true;
        }
      }
      if (!own) fail("vertex " + ws.token(s) + " of part " + std::to_string(j) + " misses its own component");
    }
  }

  // Each side of every S_j sees a complete neighbourhood from each s.
  std::vector<Vid> inner, outer;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    auto own_group = group_of.find(u.parts[j].anchor);
    if (own_group == group_of.end()) continue;
    for (Vid s : u.parts[j].s) {
      inner.clear();
      outer.clear();
      for (Vid w : ws.neighbors(s)) {
        auto pj = part_of.find(w);
        if (pj != part_of.end() && pj->second == j) continue;
        auto g = group_of.find(w);
        (g != group_of.end() && g->second == own_group->second ? inner : outer).push_back(w);
      }
      if (inner.empty() || outer.empty())
        fail("neighbourhood of " + ws.token(s) + " outside its part does not have two sides");
      for (Vid a : inner)
        for (Vid b : outer)
          if (ws.adjacent(a, b))
            fail("the two sides of the neighbourhood of " + ws.token(s) + " are joined at " + ws.token(a) + " and " +
                 ws.token(b));
      for (const auto* side : {&inner, &outer})
        for (std::size_t a = 0; a < side->size(); ++a)
          for (std::size_t b = a + 1; b < side->size(); ++b)
            if (!ws.adjacent((*side)[a], (*side)[b]))
              fail("neighbourhood of " + ws.token(s) + " is not complete: " + ws.token((*side)[a]) + " and " +
                   ws.token((*side)[b]));
    }
  }
  return r;
}

Umbrella to_umbrella(const Workspace& ws, const DenseUmbrella& u) {
  Umbrella out;
  out.exact_grouping = u.exact_grouping;
  for (Vid v : u.base) out.base.insert(ws.id(v));
  for (Vid v : u.blocker) out.blocker.insert(ws.id(v));
  for (Vid v : u.k0) out.k0.insert(ws.id(v));
  for (const auto& p : u.parts) {
    UmbrellaPart q;
    for (Vid v : p.s) q.s.insert(ws.id(v));
    for (Vid v : p.attached) q.k.attached.insert(ws.id(v));
    q.k.anchor = ws.id(p.anchor);
    q.k.certified_infinite = true;
    out.parts.push_back(std::move(q));
  }
  return out;
}

DenseUmbrella to_dense(Workspace& ws, const Umbrella& u) {
  DenseUmbrella out;
  out.exact_grouping = u.exact_grouping;
  auto conv = [&](const VertexSet& s) {
    std::vector<Vid> v;
    for (const auto& x : s) v.push_back(ws.intern_checked(x));
    ws.sort(v);
    return v;
  };
  out.base = conv(u.base);
  out.blocker = conv(u.blocker);
  out.k0 = conv(u.k0);
  for (const auto& p : u.parts) {
    DenseUmbrella::Part q;
    q.s = conv(p.s);
    q.attached = conv(p.k.attached);
    q.anchor = ws.intern_checked(p.k.anchor);
    out.parts.push_back(std::move(q));
  }
  return out;
}

std::vector<VertexId> distance_increasing_ray(const GraphOracle& o, const VertexSet& x, std::size_t length) {
  if (x.empty()) throw InputError("a ray needs a non-empty start set");
  Workspace ws(borrow(o));
  std::unordered_map<Vid, std::size_t> dist;
  std::vector<Vid> layer;
  for (const auto& v : x) {
    const Vid id = ws.intern_checked(v);
    dist.emplace(id, 0);
    layer.push_back(id);
  }
  for (std::size_t d = 1; d <= length; ++d) {
    std::vector<Vid> next;
    for (Vid v : layer)
      for (Vid w : ws.neighbors(v))
        if (dist.emplace(w, d).second) next.push_back(w);
    if (next.empty()) throw InputError("no vertex at distance " + std::to_string(d) + " from the start set");
    layer = std::move(next);
  }
  std::vector<Vid> ray{ws.min_of(layer)};
  for (std::size_t d = length; d > 0; --d) {
    Vid best = kNoVid;
    for (Vid w : ws.neighbors(ray.back())) {
      auto it = dist.find(w);
      if (it != dist.end() && it->second == d - 1 && (best == kNoVid || ws.less(w, best))) best = w;
    }
    ray.push_back(best);
  }
  std::reverse(ray.begin(), ray.end());
  std::vector<VertexId> out;
  for (Vid v : ray) out.push_back(ws.id(v));
  return out;
}

Umbrella compute_umbrella(const GraphOracle& o, const VertexSet& x) {
  Workspace ws(borrow(o));
  std::vector<Vid> xs;
  for (const auto& v : x) xs.push_back(ws.intern_checked(v));
  return to_umbrella(ws, compute_umbrella_dense(ws, xs));
}

SeparatorReport check_separator_facts(const GraphOracle& o, const Umbrella& u, std::size_t working_radius) {
  (void)working_radius;
  Workspace ws(borrow(o));
  return check_separator_facts_dense(ws, to_dense(ws, u));
}

std::vector<VertexSet> three_neighborhood_targets(const GraphOracle& o, const Umbrella& u, std::size_t radius) {
  Workspace ws(borrow(o));
  const DenseUmbrella d = to_dense(ws, u);
  BlockLabels labels(ws, d);
  std::vector<VertexSet> out;
  for (std::size_t j = 0; j < d.parts.size(); ++j) {
    VertexSet s;
    for (Vid v : neighborhood_in_component(ws, labels, d, j, radius)) s.insert(ws.id(v));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace clawham
