#include "clawham/cycle.hpp"
#include "clawham/errors.hpp"
#include "clawham/finite_graph.hpp"
#include "clawham/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clawham;
using testing::cycle_graph;

namespace {

NamedGraph triangle() { return make_named_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}); }
NamedGraph c4() { return make_named_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}}); }

VertexSet ids(const NamedGraph& g, std::initializer_list<const char*> names) {
  VertexSet s;
  for (const char* n : names) s.insert(g.id(n));
  return s;
}

std::vector<VertexId> seq(const NamedGraph& g, std::initializer_list<const char*> names) {
  std::vector<VertexId> s;
  for (const char* n : names) s.push_back(g.id(n));
  return s;
}

}  // namespace

TEST_CASE("induced subgraph restricts edges") {
  const auto t = triangle();
  const auto h = induced_subgraph(t.graph, ids(t, {"a", "b"}));
  CHECK(h.order() == 2);
  CHECK(h.size() == 1);
  CHECK(h.adjacent(t.id("a"), t.id("b")));
  CHECK(induced_subgraph(t.graph, {}).order() == 0);
  CHECK_THROWS_AS(induced_subgraph(t.graph, {VertexId(99)}), InputError);
}

TEST_CASE("induced subgraph of the 2-blow-up of a triangle on one clique pair is K2") {
  const auto spec = nlohmann::json::parse(R"({"base":{"kind":"finite","graph":{"vertices":["a","b","c"],
      "edges":[["a","b"],["b","c"],["a","c"]]}},"transforms":[{"op":"blow_up","k":2}]})");
  const auto o = oracle_from_spec(spec);
  const auto g = ball(*o, {o->roots().front()}, 3);
  REQUIRE(g.order() == 6);
  CHECK(g.size() == 15);  // the 2-blow-up of K3 is K6
  const auto a0 = g.vertex(0);
  VertexSet pair;
  for (const auto& v : g.vertices())
    if (v.prefix(v.size() - 1) == a0.prefix(a0.size() - 1)) pair.insert(v);
  REQUIRE(pair.size() == 2);
  const auto h = induced_subgraph(g, pair);
  CHECK(h.order() == 2);
  CHECK(h.size() == 1);
}

TEST_CASE("neighborhood by distance") {
  const auto p = make_named_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(neighborhood(p.graph, ids(p, {"a"}), 1) == ids(p, {"a", "b"}));
  CHECK(neighborhood(p.graph, ids(p, {"a"}), 0) == ids(p, {"a"}));
  CHECK(neighborhood(p.graph, ids(p, {"a"}), 5) == ids(p, {"a", "b", "c"}));

  const auto t3 = tree_T(3);
  const auto g = ball(*t3, {t3->roots().front()}, 4);
  CHECK(neighborhood(g, {t3->roots().front()}, 2).size() == 10);

  // Monotone nesting.
  const auto c = cycle_graph(9);
  const VertexSet x = {c.id("c0"), c.id("c4")};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto a = neighborhood(c.graph, x, i), b = neighborhood(c.graph, x, i + 1);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    CHECK(std::includes(a.begin(), a.end(), x.begin(), x.end()));
  }
}

TEST_CASE("cut and boundary") {
  const auto g = c4();
  const auto m = ids(g, {"a", "b"});
  const auto d = cut(g.graph, m);
  CHECK(d.size() == 2);
  CHECK(d.contains(Edge(g.id("d"), g.id("a"))));
  CHECK(d.contains(Edge(g.id("b"), g.id("c"))));
  for (const auto& e : d) CHECK(m.contains(e.a) != m.contains(e.b));
  CHECK(cut(g.graph, ids(g, {"c", "d"})) == d);
  CHECK(cut(g.graph, g.graph.vertex_set()).empty());

  const auto k4 = testing::complete_graph(4);
  CHECK(cut(k4.graph, {k4.id("k0")}).size() == 3);

  CHECK(boundary(g.graph, m) == m);
  CHECK(boundary(g.graph, g.graph.vertex_set()).empty());
  const auto star = make_named_graph({"x", "l1", "l2", "l3"}, {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}});
  CHECK(boundary(star.graph, ids(star, {"x"})) == ids(star, {"x"}));
}

TEST_CASE("components form a partition") {
  const auto two = make_named_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  const auto parts = components(two.graph);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == ids(two, {"a", "b"}));
  CHECK(parts[1] == ids(two, {"c", "d"}));
  CHECK(components(c4().graph).size() == 1);
  CHECK(components(FiniteGraph()).empty());
}

TEST_CASE("two-connectivity") {
  CHECK(is_two_connected(c4().graph));
  const auto p3 = make_named_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK_FALSE(is_two_connected(p3.graph));
  CHECK(articulation_points(p3.graph) == std::vector<VertexId>{p3.id("b")});
  // K4 minus a perfect matching is C4.
  const auto k4pm = make_named_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "d"}, {"c", "b"}, {"c", "d"}});
  CHECK(is_two_connected(k4pm.graph));
  const auto bowtie = make_named_graph(
      {"a", "b", "x", "c", "d"}, {{"a", "b"}, {"a", "x"}, {"b", "x"}, {"x", "c"}, {"x", "d"}, {"c", "d"}});
  CHECK_FALSE(is_two_connected(bowtie.graph));
}

TEST_CASE("oriented cycle navigation") {
  const auto g = c4();
  const OrientedCycle c3(seq(g, {"a", "b", "c"}));
  CHECK(c3.successor(g.id("a")) == g.id("b"));
  CHECK(c3.predecessor(g.id("a")) == g.id("c"));
  CHECK_THROWS_AS(c3.successor(g.id("d")), InputError);

  const OrientedCycle c(seq(g, {"a", "b", "c", "d"}));
  for (const auto& u : c.sequence()) CHECK(c.successor(c.predecessor(u)) == u);
  CHECK(c.segment(g.id("a"), g.id("c")) == seq(g, {"a", "b", "c"}));
  CHECK(c.segment(g.id("a"), g.id("a")) == seq(g, {"a"}));
  CHECK(c.segment(g.id("c"), g.id("a")) == seq(g, {"c", "d", "a"}));

  VertexSet seen;
  VertexId u = c.sequence()[0];
  for (std::size_t i = 0; i < c.length(); ++i) {
    seen.insert(u);
    u = c.successor(u);
  }
  CHECK(u == c.sequence()[0]);
  CHECK(seen.size() == c.length());

  CHECK_THROWS_AS(OrientedCycle(seq(g, {"a", "b"})), InputError);
  CHECK_THROWS_AS(OrientedCycle(seq(g, {"a", "b", "a"})), InputError);
}

TEST_CASE("validate_cycle reports the offending pair") {
  const auto g = c4();
  CHECK(validate_cycle(g.graph, seq(g, {"a", "b", "c", "d"})).ok);
  const auto bad = validate_cycle(g.graph, seq(g, {"a", "c", "b", "d"}));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness);
  CHECK(bad.witness->first == g.id("a"));
  CHECK(bad.witness->second == g.id("c"));
  CHECK_FALSE(validate_cycle(g.graph, seq(g, {"a", "b", "a", "d"})).ok);
}

TEST_CASE("finite graph JSON round trip") {
  const auto g = c4();
  const auto doc = to_json(g.graph, g.namer());
  CHECK(doc["vertices"] == nlohmann::json({"a", "b", "c", "d"}));
  CHECK(doc["edges"].size() == 4);
  const auto back = named_graph_from_json(doc);
  CHECK(to_json(back.graph, back.namer()) == doc);
  CHECK_THROWS_AS(named_graph_from_json({{"vertices", {"a"}}, {"edges", {{"a", "z"}}}}), InputError);
}
