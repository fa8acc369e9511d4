#include "clawham/forbidden.hpp"

#include <algorithm>

#include "clawham/errors.hpp"
#include "clawham/separators.hpp"

namespace clawham {

namespace {

bool adjacent(const GraphOracle& o, const VertexId& a, const VertexId& b) {
  const auto nb = o.neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

FiniteGraph::Index checked_index(const FiniteGraph& g, const VertexId& v) {
  const auto i = g.index_of(v);
  if (g.clipped(i)) throw InputError("neighbourhood of " + plain_token(v) + " is clipped by the ball");
  return i;
}

}  // namespace

nlohmann::json to_json(const PawWitness& p, const Namer& namer) {
  return {{"a0", namer(p.a0)}, {"a1", namer(p.a1)}, {"b1", namer(p.b1)}, {"b2", namer(p.b2)}};
}

nlohmann::json to_json(const ClawWitness& c, const Namer& namer) {
  return {{"center", namer(c.center)},
          {"leaves", {namer(c.leaves[0]), namer(c.leaves[1]), namer(c.leaves[2])}}};
}

std::optional<ClawWitness> find_claw(const FiniteGraph& g, const VertexSet& scope) {
  for (const auto& v : scope) {
    const auto& n = g.adjacency(checked_index(g, v));
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j) {
        if (g.adjacent_index(n[i], n[j])) continue;
        for (std::size_t k = j + 1; k < n.size(); ++k)
          if (!g.adjacent_index(n[i], n[k]) && !g.adjacent_index(n[j], n[k]))
            return ClawWitness{v, {g.vertex(n[i]), g.vertex(n[j]), g.vertex(n[k])}};
      }
  }
  return std::nullopt;
}

std::vector<PawWitness> enumerate_induced_paws(const FiniteGraph& g, const VertexSet& scope) {
  std::vector<PawWitness> out;
  for (const auto& v : scope) {
    const auto& n = g.adjacency(checked_index(g, v));
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j) {
        if (!g.adjacent_index(n[i], n[j])) continue;
        for (auto a1 : n) {
          if (a1 == n[i] || a1 == n[j]) continue;
          if (g.adjacent_index(a1, n[i]) || g.adjacent_index(a1, n[j])) continue;
          out.push_back(PawWitness{v, g.vertex(a1), g.vertex(n[i]), g.vertex(n[j])});
        }
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_induced_paw(const GraphOracle& o, const PawWitness& p) {
  const std::array<VertexId, 4> v{p.a0, p.a1, p.b1, p.b2};
  // Expected adjacency: a0 to everything, b1-b2, nothing else.
  auto expected = [](int i, int j) { return i == 0 || (i == 2 && j == 3); };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (v[i] == v[j]) return false;
      if (adjacent(o, v[i], v[j]) != expected(i, j)) return false;
    }
  return true;
}

std::optional<VertexId> check_phi(const GraphOracle& o, const PawWitness& p) {
  const std::array<VertexId, 4> v{p.a0, p.a1, p.b1, p.b2};
  static const char* names[] = {"a0", "a1", "b1", "b2"};
  for (const auto& x : v)
    if (!o.valid(x)) throw InputError("paw vertex " + plain_token(x) + " is not in the graph");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const bool want = i == 0 || (i == 2 && j == 3);
      if (v[i] == v[j] || adjacent(o, v[i], v[j]) != want)
        throw InputError(std::string("not an induced paw: pair ") + names[i] + "=" + o.token(v[i]) + ", " +
                         names[j] + "=" + o.token(v[j]) + (want ? " should be adjacent" : " should not be adjacent"));
    }
  const auto na1 = o.neighbors(p.a1);
  for (const auto* b : {&p.b1, &p.b2}) {
    const auto nb = o.neighbors(*b);
    std::vector<VertexId> common;
    std::set_intersection(na1.begin(), na1.end(), nb.begin(), nb.end(), std::back_inserter(common));
    for (const auto& z : common)
      if (std::find(v.begin(), v.end(), z) == v.end()) return z;
  }
  return std::nullopt;
}

nlohmann::json PreconditionReport::to_json(const Namer& namer) const {
  nlohmann::json j;
  j["radius"] = radius;
  j["finite"] = finite;
  j["ball_order"] = ball_order;
  j["interior_order"] = interior_order;
  j["claw_free"] = claw_free;
  j["claw"] = claw ? clawham::to_json(*claw, namer) : nlohmann::json(nullptr);
  j["paws_checked"] = paws_checked;
  j["phi_ok"] = phi_ok();
  auto& pv = j["phi_violations"] = nlohmann::json::array();
  for (const auto& p : phi_violations) pv.push_back(clawham::to_json(p, namer));
  j["ball_two_connected"] = ball_two_connected;
  auto& cv = j["interior_cutvertices"] = nlohmann::json::array();
  for (const auto& v : interior_cutvertices) cv.push_back(namer(v));
  j["analytic_two_connected"] = analytic_two_connected;
  j["caveat"] = caveat;
  j["ok"] = ok();
  return j;
}

PreconditionReport check_preconditions(const GraphOracle& o, std::size_t radius) {
  if (radius < 2) throw InputError("precondition radius must be at least 2");
  PreconditionReport r;
  r.radius = radius;
  r.finite = o.is_finite();
  r.analytic_two_connected = !r.finite && o.analytic_two_connected();
  const auto roots = o.roots();
  const FiniteGraph g = ball(o, VertexSet(roots.begin(), roots.end()), radius);
  r.ball_order = g.order();
  VertexSet interior;
  for (FiniteGraph::Index i = 0; i < g.order(); ++i)
    if (!g.clipped(i)) interior.insert(g.vertex(i));
  r.interior_order = interior.size();

  r.claw = find_claw(g, interior);
  r.claw_free = !r.claw;

  const auto paws = enumerate_induced_paws(g, interior);
  r.paws_checked = paws.size();
  for (const auto& p : paws)
    if (!check_phi(o, p)) r.phi_violations.push_back(p);

  if (r.finite) {
    r.ball_two_connected = is_two_connected(g);
    r.interior_cutvertices = articulation_points(g);
    r.caveat = "finite graph: every check covers the whole graph";
  } else {
    for (const auto& v : articulation_points(g))
      if (interior.contains(v)) r.interior_cutvertices.push_back(v);
    r.ball_two_connected = is_connected(g) && r.interior_cutvertices.empty();
    r.caveat = r.analytic_two_connected
                   ? "2-connectivity of the infinite graph holds by construction of the generator"
                   : "2-connectivity of the infinite graph is attested only inside the radius " +
                         std::to_string(radius) + " ball";
  }
  return r;
}

PawWitness find_paw_via_ray(const GraphOracle& o, const OrientedCycle& c) {
  if (o.is_finite()) throw InputError("a finite graph has no ray leaving the cycle");
  for (std::size_t i = 0; i < c.length(); ++i) {
    const auto& a = c.sequence()[i];
    const auto& b = c.sequence()[(i + 1) % c.length()];
    if (!o.valid(a) || !adjacent(o, a, b)) throw InputError("not a cycle of the graph at " + o.token(a));
  }
  const auto ray = distance_increasing_ray(o, c.vertex_set(), 2);
  const VertexId &r0 = ray[0], &r1 = ray[1], &r2 = ray[2];
  const VertexId& plus = c.successor(r0);
  const VertexId& minus = c.predecessor(r0);
  auto triangle = [](const VertexId& x, const VertexId& y) { return x < y ? std::pair{x, y} : std::pair{y, x}; };

  std::optional<PawWitness> p;
  for (const auto* side : {&plus, &minus}) {
    if (adjacent(o, r1, *side)) {
      const auto [b1, b2] = triangle(r0, *side);
      p = PawWitness{r1, r2, b1, b2};
      break;
    }
  }
  if (!p) {
    if (!adjacent(o, minus, plus))
      throw HypothesisViolation("claw at " + o.token(r0) + " with leaves " + o.token(minus) + ", " + o.token(plus) +
                                ", " + o.token(r1));
    const auto [b1, b2] = triangle(minus, plus);
    p = PawWitness{r0, r1, b1, b2};
  }
  if (!is_induced_paw(o, *p)) throw InvariantViolation("ray construction produced a non-induced paw");
  return *p;
}

}  // namespace clawham
