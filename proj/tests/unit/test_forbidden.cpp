#include <random>

#include "clawham/driver.hpp"
#include "clawham/errors.hpp"
#include "clawham/forbidden.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clawham;

namespace {

NamedGraph paw() {
  return make_named_graph({"a0", "a1", "b1", "b2"}, {{"a0", "a1"}, {"a0", "b1"}, {"a0", "b2"}, {"b1", "b2"}});
}

/// All induced paws by scanning ordered 4-tuples.
std::set<PawWitness> brute_paws(const FiniteGraph& g) {
  std::set<PawWitness> out;
  const auto& vs = g.vertices();
  for (const auto& a0 : vs)
    for (const auto& a1 : vs)
      for (const auto& b1 : vs)
        for (const auto& b2 : vs) {
          if (!(b1 < b2) || a0 == a1 || a0 == b1 || a0 == b2 || a1 == b1 || a1 == b2) continue;
          if (g.adjacent(a0, a1) && g.adjacent(a0, b1) && g.adjacent(a0, b2) && g.adjacent(b1, b2) &&
              !g.adjacent(a1, b1) && !g.adjacent(a1, b2))
            out.insert({a0, a1, b1, b2});
        }
  return out;
}

bool brute_has_claw(const FiniteGraph& g) {
  for (const auto& c : g.vertices()) {
    const auto nb = g.neighbors(c);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        for (std::size_t k = j + 1; k < nb.size(); ++k)
          if (!g.adjacent(nb[i], nb[j]) && !g.adjacent(nb[i], nb[k]) && !g.adjacent(nb[j], nb[k])) return true;
  }
  return false;
}

FiniteGraph random_graph(std::mt19937_64& rng, int n, double p) {
  std::vector<VertexId> v;
  for (int i = 0; i < n; ++i) v.emplace_back(i);
  std::vector<Edge> e;
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(v[i], v[j]);
  return FiniteGraph(v, e);
}

}  // namespace

TEST_CASE("claw detection") {
  const auto star = make_named_graph({"x", "l1", "l2", "l3"}, {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}});
  const auto w = find_claw(star.graph, {star.id("x")});
  REQUIRE(w);
  CHECK(w->center == star.id("x"));
  CHECK(w->leaves == std::array<VertexId, 3>{star.id("l1"), star.id("l2"), star.id("l3")});

  const auto c6 = testing::cycle_graph(6);
  CHECK_FALSE(find_claw(c6.graph, c6.graph.vertex_set()));
}

TEST_CASE("clipped scope is an error") {
  const auto o = tree_S(3);
  const auto g = ball(*o, {o->roots().front()}, 1);
  const auto leaf = o->neighbors(o->roots().front()).front();
  CHECK_THROWS_AS(find_claw(g, {leaf}), InputError);
  CHECK_THROWS_AS(enumerate_induced_paws(g, {leaf}), InputError);
  CHECK(find_claw(g, {o->roots().front()}));
}

TEST_CASE("blown-up line graph of S3 is claw-free on its ball interior") {
  const auto o = oracle_from_spec(testing::blowup_spec("S", 3));
  const auto roots = o->roots();
  const auto g = ball(*o, VertexSet(roots.begin(), roots.end()), 4);
  VertexSet interior;
  for (std::size_t i = 0; i < g.order(); ++i)
    if (!g.clipped(static_cast<FiniteGraph::Index>(i))) interior.insert(g.vertex(static_cast<FiniteGraph::Index>(i)));
  CHECK(interior.size() >= 20);
  CHECK_FALSE(find_claw(g, interior));
  CHECK_FALSE(brute_has_claw(induced_subgraph(g, interior)));

  const auto paws = enumerate_induced_paws(g, interior);
  CHECK_FALSE(paws.empty());
  for (const auto& p : paws) {
    const auto z = check_phi(*o, p);
    REQUIRE(z);
    CHECK(testing::adjacent(*o, *z, p.a1));
    CHECK((testing::adjacent(*o, *z, p.b1) || testing::adjacent(*o, *z, p.b2)));
    CHECK(*z != p.a0);
    CHECK(*z != p.b1);
    CHECK(*z != p.b2);
  }
}

TEST_CASE("paw enumeration") {
  const auto p = paw();
  const auto paws = enumerate_induced_paws(p.graph, p.graph.vertex_set());
  REQUIRE(paws.size() == 1);
  CHECK(paws[0] == PawWitness{p.id("a0"), p.id("a1"), p.id("b1"), p.id("b2")});

  const auto k4 = testing::complete_graph(4);
  CHECK(enumerate_induced_paws(k4.graph, k4.graph.vertex_set()).empty());

  const auto tail = make_named_graph({"x", "y", "z", "p", "q"},
                                     {{"x", "y"}, {"y", "z"}, {"x", "z"}, {"x", "p"}, {"p", "q"}});
  const auto t = enumerate_induced_paws(tail.graph, tail.graph.vertex_set());
  REQUIRE(t.size() == 1);
  CHECK(t[0].a0 == tail.id("x"));
  CHECK(t[0].a1 == tail.id("p"));
}

TEST_CASE("claw and paw search agree with brute force") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 4 + trial % 9;
    const auto g = random_graph(rng, n, 0.25 + 0.5 * (trial % 7) / 6.0);
    const auto all = g.vertex_set();
    CHECK(find_claw(g, all).has_value() == brute_has_claw(g));
    const auto paws = enumerate_induced_paws(g, all);
    CHECK(std::set<PawWitness>(paws.begin(), paws.end()) == brute_paws(g));
    CHECK(std::is_sorted(paws.begin(), paws.end()));
  }
}

TEST_CASE("phi witnesses") {
  const auto p = paw();
  const auto o = finite_as_oracle(p.graph);
  const PawWitness w{p.id("a0"), p.id("a1"), p.id("b1"), p.id("b2")};
  CHECK_FALSE(check_phi(*o, w));

  const auto pz = make_named_graph({"a0", "a1", "b1", "b2", "z"},
                                   {{"a0", "a1"}, {"a0", "b1"}, {"a0", "b2"}, {"b1", "b2"}, {"z", "a1"}, {"z", "b1"}});
  const auto oz = finite_as_oracle(pz.graph);
  const PawWitness wz{pz.id("a0"), pz.id("a1"), pz.id("b1"), pz.id("b2")};
  CHECK(check_phi(*oz, wz) == pz.id("z"));

  const PawWitness bad{p.id("a1"), p.id("a0"), p.id("b1"), p.id("b2")};
  CHECK_THROWS_AS(check_phi(*o, bad), InputError);
}

TEST_CASE("precondition reports") {
  const auto o = oracle_from_spec(testing::blowup_spec("S", 3));
  const auto r = check_preconditions(*o, 4);
  CHECK(r.ok());
  CHECK(r.paws_checked > 0);
  CHECK(r.analytic_two_connected);
  CHECK(r.to_json(o->namer())["claw_free"] == true);

  const auto star = make_named_graph({"x", "l1", "l2", "l3"}, {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}});
  const auto rs = check_preconditions(*finite_as_oracle(star.graph), 2);
  CHECK_FALSE(rs.claw_free);
  CHECK(rs.claw);

  const auto rp = check_preconditions(*finite_as_oracle(paw().graph), 2);
  CHECK(rp.claw_free);
  CHECK_FALSE(rp.phi_ok());

  const auto rt = check_preconditions(*tree_S(3), 3);
  CHECK_FALSE(rt.ok());
  CHECK_THROWS_AS(check_preconditions(*o, 1), InputError);
}

TEST_CASE("paw via a distance-increasing ray") {
  for (const char* kind : {"S", "D", "T"}) {
    const auto o = oracle_from_spec(testing::blowup_spec(kind, 3));
    const auto c = initial_cycle(*o);
    const auto p = find_paw_via_ray(*o, c);
    CHECK(is_induced_paw(*o, p));
    CHECK(testing::adjacent(*o, p.a0, p.a1));
    CHECK(testing::adjacent(*o, p.b1, p.b2));
    CHECK_FALSE(testing::adjacent(*o, p.a1, p.b1));
    CHECK_FALSE(testing::adjacent(*o, p.a1, p.b2));
    CHECK(p.b1 < p.b2);
  }
  const auto c5 = testing::cycle_graph(5);
  const auto f = finite_as_oracle(c5.graph);
  CHECK_THROWS_AS(find_paw_via_ray(*f, initial_cycle(*f)), InputError);
}
