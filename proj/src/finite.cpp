#include "clawham/finite.hpp"

#include <bit>
#include <random>

#include "clawham/driver.hpp"
#include "clawham/errors.hpp"
#include "clawham/extension.hpp"
#include "clawham/forbidden.hpp"
#include "clawham/oracle.hpp"
#include "clawham/workspace.hpp"

namespace clawham {

std::string_view graph_class_name(GraphClass c) {
  switch (c) {
    case GraphClass::Cycle:
      return "CYCLE";
    case GraphClass::Clique:
      return "CLIQUE";
    case GraphClass::CliqueMinusMatching:
      return "CLIQUE_MINUS_MATCHING";
    case GraphClass::Other:
      break;
  }
  return "OTHER";
}

int MaskGraph::edge_count() const {
  int e = 0;
  for (int i = 0; i < n; ++i) e += std::popcount(adj[i]);
  return e / 2;
}

MaskGraph MaskGraph::from(const FiniteGraph& g) {
  if (g.order() > static_cast<std::size_t>(kMaxOrder))
    throw InputError("graph has more than " + std::to_string(kMaxOrder) + " vertices");
  MaskGraph m;
  m.n = static_cast<int>(g.order());
  for (int i = 0; i < m.n; ++i)
    for (auto j : g.adjacency(static_cast<FiniteGraph::Index>(i))) m.adj[i] |= 1u << j;
  return m;
}

FiniteGraph MaskGraph::to_graph() const {
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) {
    vs.emplace_back(static_cast<std::uint64_t>(i));
    for (int j = i + 1; j < n; ++j)
      if (has(i, j)) es.push_back({VertexId(static_cast<std::uint64_t>(i)), VertexId(static_cast<std::uint64_t>(j))});
  }
  return FiniteGraph(std::move(vs), es);
}

namespace {

bool connected_within(const MaskGraph& g, std::uint32_t allowed) {
  if (allowed == 0) return true;
  std::uint32_t reach = allowed & (~allowed + 1);
  for (;;) {
    std::uint32_t next = reach;
    for (std::uint32_t r = reach; r; r &= r - 1) next |= g.adj[std::countr_zero(r)];
    next &= allowed;
    if (next == reach) return reach == allowed;
    reach = next;
  }
}

// Calls f(a0, a1, b1, b2) for every induced paw until f returns false.
template <class F>
bool for_each_paw(const MaskGraph& g, F&& f) {
  for (int a0 = 0; a0 < g.n; ++a0) {
    const std::uint32_t na = g.adj[a0];
    for (std::uint32_t x = na; x; x &= x - 1) {
      const int b1 = std::countr_zero(x);
      for (std::uint32_t y = na & g.adj[b1] & ~((2u << b1) - 1); y; y &= y - 1) {
        const int b2 = std::countr_zero(y);
        for (std::uint32_t z = na & ~g.adj[b1] & ~g.adj[b2] & ~(1u << b1) & ~(1u << b2); z; z &= z - 1)
          if (!f(a0, std::countr_zero(z), b1, b2)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_connected(const MaskGraph& g) { return connected_within(g, g.all()); }

bool is_two_connected(const MaskGraph& g) {
  if (g.n < 3 || !is_connected(g)) return false;
  for (int v = 0; v < g.n; ++v)
    if (!connected_within(g, g.all() & ~(1u << v))) return false;
  return true;
}

bool is_claw_free(const MaskGraph& g) {
  for (int c = 0; c < g.n; ++c) {
    const std::uint32_t nc = g.adj[c];
    for (std::uint32_t x = nc; x; x &= x - 1) {
      const int a = std::countr_zero(x);
      for (std::uint32_t y = nc & ~g.adj[a] & ~((2u << a) - 1); y; y &= y - 1) {
        const int b = std::countr_zero(y);
        if (nc & ~g.adj[a] & ~g.adj[b] & ~((2u << b) - 1)) return false;
      }
    }
  }
  return true;
}

bool is_paw_free(const MaskGraph& g) {
  return for_each_paw(g, [](int, int, int, int) { return false; });
}

bool paws_satisfy_phi(const MaskGraph& g) {
  return for_each_paw(g, [&](int a0, int a1, int b1, int b2) {
    const std::uint32_t paw = (1u << a0) | (1u << a1) | (1u << b1) | (1u << b2);
    return ((g.adj[a1] & (g.adj[b1] | g.adj[b2])) & ~paw) != 0;
  });
}

bool admitted(const MaskGraph& g) { return is_two_connected(g) && is_claw_free(g) && paws_satisfy_phi(g); }

namespace {

struct HamiltonSearch {
  const MaskGraph& g;
  std::vector<int> path;

  bool extend(int last, std::uint32_t visited) {
    if (static_cast<int>(path.size()) == g.n) return g.has(last, 0);
    const std::uint32_t unvisited = g.all() & ~visited;
    const std::uint32_t usable = unvisited | (1u << last) | 1u;
    for (std::uint32_t r = unvisited; r; r &= r - 1)
      if (std::popcount(g.adj[std::countr_zero(r)] & usable) < 2) return false;
    for (std::uint32_t r = g.adj[last] & unvisited; r; r &= r - 1) {
      const int u = std::countr_zero(r);
      path.push_back(u);
      if (extend(u, visited | (1u << u))) return true;
      path.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> hamilton_cycle(const MaskGraph& g) {
  if (g.n < 3) return std::nullopt;
  HamiltonSearch s{g, {0}};
  if (!s.extend(0, 1u)) return std::nullopt;
  return std::move(s.path);
}

std::uint64_t cycle_length_bits(const MaskGraph& g) {
  if (g.n > 24) throw InputError("cycle length search limited to 24 vertices");
  const std::uint32_t full = 1u << g.n;
  std::vector<std::uint32_t> ends(full, 0);
  std::uint64_t bits = 0;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int s = std::countr_zero(mask);
    if (mask == (1u << s)) {
      ends[mask] = mask;
      continue;
    }
    std::uint32_t e = 0;
    for (std::uint32_t r = mask & ~(1u << s); r; r &= r - 1) {
      const int v = std::countr_zero(r);
      if (ends[mask ^ (1u << v)] & g.adj[v]) e |= 1u << v;
    }
    ends[mask] = e;
    const int len = std::popcount(mask);
    if (len >= 3 && (e & g.adj[s])) bits |= std::uint64_t{1} << len;
  }
  return bits;
}

GraphClass classify(const MaskGraph& g) {
  bool clique = true, two_regular = true, near_clique = true;
  for (int v = 0; v < g.n; ++v) {
    const int d = std::popcount(g.adj[v]);
    clique = clique && d == g.n - 1;
    two_regular = two_regular && d == 2;
    near_clique = near_clique && d >= g.n - 2;
  }
  if (clique) return GraphClass::Clique;
  if (two_regular && g.n >= 3 && is_connected(g)) return GraphClass::Cycle;
  if (near_clique) return GraphClass::CliqueMinusMatching;
  return GraphClass::Other;
}

std::optional<OrientedCycle> brute_force_hamilton(const FiniteGraph& g) {
  const auto m = MaskGraph::from(g);
  auto c = hamilton_cycle(m);
  if (!c) return std::nullopt;
  std::vector<VertexId> seq;
  for (int i : *c) seq.push_back(g.vertex(static_cast<FiniteGraph::Index>(i)));
  return OrientedCycle(std::move(seq));
}

std::set<int> cycle_length_spectrum(const FiniteGraph& g, std::size_t cap) {
  if (g.order() > cap)
    throw InputError("graph has " + std::to_string(g.order()) + " vertices, above the cap of " + std::to_string(cap));
  const auto bits = cycle_length_bits(MaskGraph::from(g));
  std::set<int> out;
  for (int l = 3; l < 64; ++l)
    if ((bits >> l) & 1) out.insert(l);
  return out;
}

GraphClass classify_paw_free(const FiniteGraph& g) { return classify(MaskGraph::from(g)); }

void enumerate_small_graphs(int n, const std::function<bool(const MaskGraph&)>& filter,
                            const std::function<void(const MaskGraph&)>& visit) {
  if (n < 0 || n > 7) throw InputError("exhaustive enumeration supports 0 to 7 vertices");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  MaskGraph g;
  g.n = n;
  for (std::uint64_t code = 0; code < total; ++code) {
    g.adj.fill(0);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if ((code >> k) & 1) g.add(pairs[k].first, pairs[k].second);
    if (!filter || filter(g)) visit(g);
  }
}

std::vector<MaskGraph> sample_graphs(int n_low, int n_high, std::size_t count, std::uint64_t seed,
                                     const std::function<bool(const MaskGraph&)>& filter, SampleStats* stats,
                                     double p_low, double p_high) {
  if (n_low < 1 || n_high < n_low || n_high > MaskGraph::kMaxOrder) throw InputError("bad sample order range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> order(n_low, n_high);
  std::uniform_real_distribution<double> density(p_low, p_high);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<MaskGraph> out;
  SampleStats local;
  const std::size_t max_draws = 100'000'000;
  while (out.size() < count) {
    if (local.drawn == max_draws) throw ResourceCapExceeded("sampling drew too many rejected graphs");
    ++local.drawn;
    MaskGraph g;
    g.n = order(rng);
    const double p = density(rng);
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (coin(rng) < p) g.add(i, j);
    if (!filter || filter(g)) out.push_back(g);
  }
  local.accepted = out.size();
  if (stats) *stats = local;
  return out;
}

OrientedCycle finite_hamilton_by_extension(const FiniteGraph& g) {
  if (!is_two_connected(g)) throw HypothesisViolation("graph is not 2-connected");
  const auto all = g.vertex_set();
  if (auto claw = find_claw(g, all))
    throw HypothesisViolation("claw centred at " + plain_token(claw->center));
  const auto oracle = finite_as_oracle(g);
  for (const auto& p : enumerate_induced_paws(g, all))
    if (!check_phi(*oracle, p))
      throw HypothesisViolation("paw centred at " + plain_token(p.a0) + " has no common neighbour for its pendant " +
                                plain_token(p.a1));

  Workspace ws(oracle);
  std::vector<Vid> order;
  for (const auto& v : g.vertices()) order.push_back(ws.intern(v));
  CycleBuilder cb(initial_cycle_dense(ws, g.order()));
  const DenseFilters any;
  while (cb.length() < g.order()) {
    Vid next = kNoVid;
    for (Vid v : order) {
      if (cb.contains(v)) continue;
      for (Vid w : ws.neighbors(v))
        if (cb.contains(w)) {
          next = v;
          break;
        }
      if (next != kNoVid) break;
    }
    if (next == kNoVid) throw InvariantViolation("cycle has no neighbour although the graph is connected");
    SearchDiagnosis why;
    auto rec = search_extension(ws, cb, next, any, &why);
    if (!rec) {
      std::string state;
      for (Vid v : cb.sequence_from(cb.anchor())) state += ws.token(v) + " ";
      throw InvariantViolation("no extension for " + ws.token(next) + " (" + why.detail + "); cycle: " + state);
    }
    apply_extension(cb, *rec);
  }
  std::vector<VertexId> seq;
  for (Vid v : cb.sequence_from(order.front())) seq.push_back(ws.id(v));
  return OrientedCycle(std::move(seq));
}

}  // namespace clawham
