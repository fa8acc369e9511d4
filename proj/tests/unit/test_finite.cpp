#include <algorithm>
#include <numeric>
#include <random>

#include "clawham/errors.hpp"
#include "clawham/finite.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace clawham;

namespace {

/// Hamilton cycles up to rotation and reflection, by trying every permutation.
std::size_t count_hamilton_cycles(const FiniteGraph& g) {
  const std::size_t n = g.order();
  std::vector<FiniteGraph::Index> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::size_t count = 0;
  do {
    if (p[0] != 0) break;
    if (n > 2 && p[1] > p[n - 1]) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < n; ++i) ok = g.adjacent_index(p[i], p[(i + 1) % n]);
    count += ok;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

/// Cycle lengths by depth-first search over simple paths from each start vertex.
std::set<int> brute_spectrum(const FiniteGraph& g) {
  std::set<int> out;
  const auto n = static_cast<FiniteGraph::Index>(g.order());
  std::vector<bool> used(n, false);
  std::function<void(FiniteGraph::Index, FiniteGraph::Index, int)> dfs = [&](FiniteGraph::Index s,
                                                                              FiniteGraph::Index v, int len) {
    for (auto w : g.adjacency(v)) {
      if (w == s && len >= 3) out.insert(len);
      if (w <= s || used[w]) continue;
      used[w] = true;
      dfs(s, w, len + 1);
      used[w] = false;
    }
  };
  for (FiniteGraph::Index s = 0; s < n; ++s) {
    used[s] = true;
    dfs(s, s, 1);
    used[s] = false;
  }
  return out;
}

NamedGraph petersen() {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < 5; ++i) {
    v.push_back("o" + std::to_string(i));
    v.push_back("i" + std::to_string(i));
  }
  for (int i = 0; i < 5; ++i) {
    e.emplace_back("o" + std::to_string(i), "o" + std::to_string((i + 1) % 5));
    e.emplace_back("i" + std::to_string(i), "i" + std::to_string((i + 2) % 5));
    e.emplace_back("o" + std::to_string(i), "i" + std::to_string(i));
  }
  return make_named_graph(v, e);
}

NamedGraph clique_minus_matching(int n, int pairs) {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i) v.push_back("v" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(j == i + 1 && i % 2 == 0 && i / 2 < pairs)) e.emplace_back(v[i], v[j]);
  return make_named_graph(v, e);
}

NamedGraph blow_up_triangle(int k) {
  std::vector<std::string> v;
  std::vector<std::pair<std::string, std::string>> e;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < k; ++i) v.push_back(std::string(1, static_cast<char>('a' + a)) + std::to_string(i));
  for (std::size_t x = 0; x < v.size(); ++x)
    for (std::size_t y = x + 1; y < v.size(); ++y) e.emplace_back(v[x], v[y]);
  return make_named_graph(v, e);
}

}  // namespace

TEST_CASE("brute-force Hamilton cycles") {
  const auto k4 = testing::complete_graph(4);
  const auto c = brute_force_hamilton(k4.graph);
  REQUIRE(c);
  CHECK(validate_cycle(k4.graph, *c).ok);
  CHECK(c->length() == 4);
  CHECK(count_hamilton_cycles(k4.graph) == 3);

  const auto p4 = make_named_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  CHECK_FALSE(brute_force_hamilton(p4.graph));

  const auto pg = petersen();
  CHECK(pg.graph.size() == 15);
  CHECK_FALSE(brute_force_hamilton(pg.graph));
  CHECK(count_hamilton_cycles(pg.graph) == 0);
}

TEST_CASE("Hamilton verdict agrees with the permutation count") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    MaskGraph m;
    m.n = 4 + trial % 5;
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < m.n; ++i)
      for (int j = i + 1; j < m.n; ++j)
        if (coin(rng)) m.add(i, j);
    const auto g = m.to_graph();
    const auto h = brute_force_hamilton(g);
    CHECK(h.has_value() == (count_hamilton_cycles(g) > 0));
    if (h) CHECK(validate_cycle(g, *h).ok);
    CHECK(cycle_length_spectrum(g) == brute_spectrum(g));
  }
}

TEST_CASE("cycle length spectra") {
  CHECK(cycle_length_spectrum(testing::complete_graph(5).graph) == std::set<int>{3, 4, 5});
  CHECK(cycle_length_spectrum(testing::cycle_graph(6).graph) == std::set<int>{6});
  const auto k4e = make_named_graph({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
  CHECK(cycle_length_spectrum(k4e.graph) == std::set<int>{3, 4});
  CHECK(brute_spectrum(k4e.graph) == std::set<int>{3, 4});
  CHECK_THROWS_AS(cycle_length_spectrum(testing::cycle_graph(13).graph), InputError);
}

TEST_CASE("small graph enumeration counts") {
  std::size_t connected3 = 0, all4 = 0, one = 0;
  enumerate_small_graphs(3, [](const MaskGraph& g) { return is_connected(g); }, [&](const MaskGraph&) { ++connected3; });
  enumerate_small_graphs(4, [](const MaskGraph&) { return true; }, [&](const MaskGraph&) { ++all4; });
  enumerate_small_graphs(1, [](const MaskGraph&) { return true; }, [&](const MaskGraph&) { ++one; });
  CHECK(connected3 == 4);
  CHECK(all4 == 64);
  CHECK(one == 1);
  CHECK_THROWS_AS(enumerate_small_graphs(8, [](const MaskGraph&) { return true; }, [](const MaskGraph&) {}),
                  InputError);

  // Labelled connected graphs on 4 vertices: 38.
  std::size_t connected4 = 0;
  enumerate_small_graphs(4, [](const MaskGraph& g) { return is_connected(g); }, [&](const MaskGraph&) { ++connected4; });
  CHECK(connected4 == 38);
}

TEST_CASE("classification") {
  CHECK(classify_paw_free(testing::cycle_graph(7).graph) == GraphClass::Cycle);
  CHECK(classify_paw_free(testing::complete_graph(5).graph) == GraphClass::Clique);
  CHECK(classify_paw_free(clique_minus_matching(6, 3).graph) == GraphClass::CliqueMinusMatching);
  CHECK(classify_paw_free(clique_minus_matching(6, 1).graph) == GraphClass::CliqueMinusMatching);
  CHECK(classify_paw_free(petersen().graph) == GraphClass::Other);
  CHECK(graph_class_name(GraphClass::CliqueMinusMatching) == "CLIQUE_MINUS_MATCHING");
}

TEST_CASE("mask predicates") {
  const auto paw = MaskGraph::from(
      make_named_graph({"a0", "a1", "b1", "b2"}, {{"a0", "a1"}, {"a0", "b1"}, {"a0", "b2"}, {"b1", "b2"}}).graph);
  CHECK_FALSE(is_paw_free(paw));
  CHECK(is_claw_free(paw));
  CHECK_FALSE(paws_satisfy_phi(paw));
  CHECK_FALSE(is_two_connected(paw));
  const auto star = MaskGraph::from(
      make_named_graph({"x", "l1", "l2", "l3"}, {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}}).graph);
  CHECK_FALSE(is_claw_free(star));
  const auto c5 = MaskGraph::from(testing::cycle_graph(5).graph);
  CHECK(admitted(c5));
  CHECK(is_paw_free(c5));
}

TEST_CASE("finite Hamilton cycles by extension") {
  const auto c5 = testing::cycle_graph(5);
  const auto h5 = finite_hamilton_by_extension(c5.graph);
  CHECK(h5.vertex_set() == c5.graph.vertex_set());
  CHECK(validate_cycle(c5.graph, h5).ok);

  for (const auto& g : {clique_minus_matching(6, 3), blow_up_triangle(4), testing::complete_graph(7)}) {
    const auto h = finite_hamilton_by_extension(g.graph);
    CHECK(validate_cycle(g.graph, h).ok);
    CHECK(h.length() == g.graph.order());
    CHECK(brute_force_hamilton(g.graph).has_value());
  }

  const auto star = make_named_graph({"x", "l1", "l2", "l3"}, {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}});
  CHECK_THROWS_AS(finite_hamilton_by_extension(star.graph), HypothesisViolation);
  const auto claw_cycle = make_named_graph(
      {"x", "l1", "l2", "l3", "m", "n"},
      {{"x", "l1"}, {"x", "l2"}, {"x", "l3"}, {"l1", "m"}, {"l2", "m"}, {"l3", "n"}, {"n", "m"}});
  CHECK_THROWS_AS(finite_hamilton_by_extension(claw_cycle.graph), HypothesisViolation);
}

TEST_CASE("sampling is deterministic and respects the filter") {
  SampleStats st;
  const auto a = sample_graphs(8, 10, 50, 99, admitted, &st);
  const auto b = sample_graphs(8, 10, 50, 99, admitted);
  REQUIRE(a.size() == 50);
  CHECK(st.accepted == 50);
  CHECK(st.drawn >= 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].adj == b[i].adj);
    CHECK(admitted(a[i]));
    CHECK(a[i].n >= 8);
    CHECK(a[i].n <= 10);
  }
}
