#include "clawham/driver.hpp"
#include "clawham/errors.hpp"
#include "clawham/separators.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clawham;
using testing::bfs;

namespace {

void check_layers(const GraphOracle& o, const VertexSet& x, const std::vector<VertexId>& ray, std::size_t length) {
  REQUIRE(ray.size() == length + 1);
  CHECK(x.contains(ray[0]));
  const auto dist = bfs(o, x, length + 1);
  for (std::size_t i = 0; i <= length; ++i) {
    REQUIRE(dist.contains(ray[i]));
    CHECK(dist.at(ray[i]) == i);
    if (i > 0) CHECK(testing::adjacent(o, ray[i - 1], ray[i]));
  }
}

/// Independent check of the structural umbrella invariants.
void check_umbrella(const GraphOracle& o, const Umbrella& u) {
  // Blocker is the disjoint union of the S_i.
  std::size_t total = 0;
  VertexSet uni;
  for (const auto& p : u.parts) {
    total += p.s.size();
    uni.insert(p.s.begin(), p.s.end());
  }
  CHECK(total == u.blocker.size());
  CHECK(uni == u.blocker);
  for (const auto& x : u.base) CHECK(u.k0.contains(x));
  for (const auto& s : u.blocker) {
    CHECK_FALSE(u.k0.contains(s));
    bool touches = false;
    for (const auto& w : o.neighbors(s)) touches = touches || u.k0.contains(w);
    CHECK(touches);
    // Minimality: dropping s from the blocker lets the base escape.
    VertexSet smaller = u.blocker;
    smaller.erase(s);
    CHECK(is_infinite_component(o, smaller, *u.base.begin()));
  }
  // The base is cut off from infinity.
  CHECK_FALSE(is_infinite_component(o, u.blocker, *u.base.begin()));
  for (const auto& p : u.parts) CHECK(is_infinite_component(o, u.blocker, p.k.anchor));
}

/// Vertices within `depth` steps of v in G - avoid.
VertexSet reach_avoiding(const GraphOracle& o, const VertexId& v, const VertexSet& avoid, std::size_t depth) {
  VertexSet seen = {v};
  std::vector<VertexId> layer = {v};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<VertexId> next;
    for (const auto& x : layer)
      for (const auto& w : o.neighbors(x))
        if (!avoid.contains(w) && seen.insert(w).second) next.push_back(w);
    layer = std::move(next);
  }
  return seen;
}

}  // namespace

TEST_CASE("distance-increasing rays") {
  const auto s3 = tree_S(3);
  const VertexSet centre = {s3->roots().front()};
  const auto ray = distance_increasing_ray(*s3, centre, 5);
  check_layers(*s3, centre, ray, 5);
  for (std::size_t i = 1; i < ray.size(); ++i) CHECK(s3->neighbors(ray[i]).size() == 2);

  const auto c5 = testing::cycle_graph(5);
  const auto f = finite_as_oracle(c5.graph);
  CHECK_THROWS_AS(distance_increasing_ray(*f, {c5.id("c0")}, 5), InputError);

  for (const char* kind : {"S", "D", "T"}) {
    const auto o = oracle_from_spec(testing::blowup_spec(kind, 3));
    const auto c = initial_cycle(*o);
    const auto x = c.vertex_set();
    for (std::size_t len : {1, 4, 8}) check_layers(*o, x, distance_increasing_ray(*o, x, len), len);
  }
}

TEST_CASE("umbrella of the centre of S3") {
  const auto s3 = tree_S(3);
  const auto c = s3->roots().front();
  const auto u = compute_umbrella(*s3, {c});
  const auto nb = s3->neighbors(c);
  CHECK(u.blocker == VertexSet(nb.begin(), nb.end()));
  CHECK(u.parts.size() == 3);
  CHECK(u.k0 == VertexSet{c});
  check_umbrella(*s3, u);
  for (std::size_t i = 0; i < u.parts.size(); ++i) CHECK(u.parts[i].s.size() == 1);

  const auto targets = three_neighborhood_targets(*s3, u);
  REQUIRE(targets.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(targets[i].size() == 3);
    const auto d = bfs(*s3, u.parts[i].s, 3);
    for (const auto& v : targets[i]) {
      CHECK(d.contains(v));
      CHECK_FALSE(u.parts[i].s.contains(v));
    }
  }
  for (const auto& t : three_neighborhood_targets(*s3, u, 0)) CHECK(t.empty());
}

TEST_CASE("umbrella of the central cycle of the blown-up line graph of S3") {
  const auto o = oracle_from_spec(testing::blowup_spec("S", 3));
  const auto c = initial_cycle(*o);
  const auto u = compute_umbrella(*o, c.vertex_set());
  CHECK(u.parts.size() == 3);
  CHECK(u.exact_grouping);
  check_umbrella(*o, u);

  // Exclusive adjacency: the off-K0 neighbours of S_i are reached from the
  // anchor of K_i, and never from another anchor, avoiding the blocker.
  std::vector<VertexSet> reach;
  for (const auto& p : u.parts) reach.push_back(reach_avoiding(*o, p.k.anchor, u.blocker, 8));
  for (std::size_t i = 0; i < u.parts.size(); ++i)
    for (const auto& s : u.parts[i].s)
      for (const auto& w : o->neighbors(s)) {
        if (u.k0.contains(w) || u.blocker.contains(w)) continue;
        for (std::size_t j = 0; j < u.parts.size(); ++j) CHECK(reach[j].contains(w) == (i == j));
      }

  const auto r = check_separator_facts(*o, u, 6);
  CHECK(r.ok);
  CHECK(r.parts_checked == 3);

  const auto targets = three_neighborhood_targets(*o, u);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto d = bfs(*o, u.parts[i].s, 3);
    for (const auto& v : targets[i]) {
      CHECK(d.contains(v));
      CHECK_FALSE(u.k0.contains(v));
      CHECK_FALSE(u.blocker.contains(v));
    }
  }
}

TEST_CASE("separator checks catch a corrupted part") {
  const auto o = oracle_from_spec(testing::blowup_spec("S", 3));
  const auto c = initial_cycle(*o);
  auto u = compute_umbrella(*o, c.vertex_set());
  REQUIRE(u.parts.size() == 3);
  // A vertex deep inside K_2 added to S_1.
  const auto deep = bfs(*o, {u.parts[1].k.anchor}, 2);
  VertexId far;
  for (const auto& [v, d] : deep)
    if (d == 2 && !u.blocker.contains(v) && !u.k0.contains(v)) far = v;
  REQUIRE_FALSE(far.empty());
  u.parts[0].s.insert(far);
  u.blocker.insert(far);
  const auto r = check_separator_facts(*o, u, 6);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.violations.empty());
}

TEST_CASE("umbrellas on the other instances") {
  for (const char* kind : {"D", "T"}) {
    const auto o = oracle_from_spec(testing::blowup_spec(kind, 3));
    const auto c = initial_cycle(*o);
    const auto u = compute_umbrella(*o, c.vertex_set());
    check_umbrella(*o, u);
    CHECK(check_separator_facts(*o, u, 6).ok);
    CHECK(end_descriptors(*o, u.blocker).size() == u.parts.size());
  }
  // Two-sided umbrella around a clique out on one arm.
  const auto o = oracle_from_spec(testing::blowup_spec("S", 3));
  const auto ray = distance_increasing_ray(*o, {o->roots().front()}, 6);
  VertexSet x = {ray[6]};
  for (const auto& w : o->neighbors(ray[6]))
    if (w.prefix(w.size() - 1) == ray[6].prefix(ray[6].size() - 1)) x.insert(w);
  const auto u = compute_umbrella(*o, x);
  CHECK(u.parts.size() == 2);
  check_umbrella(*o, u);
  CHECK(check_separator_facts(*o, u, 6).ok);
}

TEST_CASE("umbrella errors") {
  const auto c5 = testing::cycle_graph(5);
  CHECK_THROWS_AS(compute_umbrella(*finite_as_oracle(c5.graph), {c5.id("c0")}), InputError);
  const auto s3 = tree_S(3);
  const auto nb = s3->neighbors(s3->roots().front());
  CHECK_THROWS_AS(compute_umbrella(*s3, {nb[0], nb[1]}), InputError);
}

TEST_CASE("dense and public umbrellas agree") {
  const auto o = oracle_from_spec(testing::blowup_spec("D", 3));
  const auto c = initial_cycle(*o);
  const auto u = compute_umbrella(*o, c.vertex_set());
  Workspace ws(o);
  const auto d = to_dense(ws, u);
  const auto back = to_umbrella(ws, d);
  CHECK(back.blocker == u.blocker);
  CHECK(back.k0 == u.k0);
  REQUIRE(back.parts.size() == u.parts.size());
  for (std::size_t i = 0; i < u.parts.size(); ++i) CHECK(back.parts[i].s == u.parts[i].s);
  CHECK(check_separator_facts_dense(ws, d).ok);
}
