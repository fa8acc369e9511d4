#pragma once

#include <string>
#include <vector>

#include "clawham/oracle.hpp"

namespace clawham {

/// DOT rendering of the radius ball around `centre` (the roots when empty).
/// Edges of `cycle`, given as a cyclic vertex sequence, are drawn bold red.
std::string export_dot(const GraphOracle& o, std::size_t radius, const std::vector<VertexId>& centre = {},
                       const std::vector<VertexId>& cycle = {});

}  // namespace clawham
