#include "clawham/dot.hpp"

#include <algorithm>

#include "json.hpp"

namespace clawham {

std::string export_dot(const GraphOracle& o, std::size_t radius, const std::vector<VertexId>& centre,
                       const std::vector<VertexId>& cycle) {
  VertexSet x(centre.begin(), centre.end());
  if (x.empty()) {
    const auto roots = o.roots();
    x.insert(roots.begin(), roots.end());
  }
  const FiniteGraph g = ball(o, x, radius);
  EdgeSet on_cycle;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const auto& a = cycle[i];
    const auto& b = cycle[(i + 1) % cycle.size()];
    if (a != b) on_cycle.insert(Edge(a, b));
  }
  auto name = [&](const VertexId& v) { return nlohmann::json(o.token(v)).dump(); };
  std::string s = "graph G {\n  node [shape=circle, fontsize=9];\n";
  for (const auto& v : g.vertices()) {
    s += "  " + name(v);
    if (x.contains(v)) s += " [style=filled, fillcolor=lightgrey]";
    s += ";\n";
  }
  for (const auto& e : g.edges()) {
    s += "  " + name(e.a) + " -- " + name(e.b);
    if (on_cycle.contains(e)) s += " [color=red, penwidth=2]";
    s += ";\n";
  }
  s += "}\n";
  return s;
}

}  // namespace clawham
