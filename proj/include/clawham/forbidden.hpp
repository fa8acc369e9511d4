#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "clawham/cycle.hpp"
#include "clawham/finite_graph.hpp"
#include "clawham/oracle.hpp"
#include "json.hpp"

namespace clawham {

/// Induced paw: a0 has degree 3, a1 degree 1, b1 < b2 span the triangle with
/// a0.
struct PawWitness {
  VertexId a0, a1, b1, b2;
  friend bool operator==(const PawWitness&, const PawWitness&) = default;
  friend auto operator<=>(const PawWitness&, const PawWitness&) = default;
};

struct ClawWitness {
  VertexId center;
  std::array<VertexId, 3> leaves;  // ascending
  friend bool operator==(const ClawWitness&, const ClawWitness&) = default;
};

nlohmann::json to_json(const PawWitness& p, const Namer& namer);
nlohmann::json to_json(const ClawWitness& c, const Namer& namer);

/// First claw centred in scope, in canonical order. Throws InputError when a
/// scope vertex is clipped in g.
std::optional<ClawWitness> find_claw(const FiniteGraph& g, const VertexSet& scope);

/// All induced paws with a0 in scope, ascending. Same clipping rule.
std::vector<PawWitness> enumerate_induced_paws(const FiniteGraph& g, const VertexSet& scope);

/// Smallest common neighbour of a1 and b1 outside the paw, else of a1 and b2.
/// Throws InputError when p is not an induced paw of o.
std::optional<VertexId> check_phi(const GraphOracle& o, const PawWitness& p);

struct PreconditionReport {
  std::size_t radius = 0;
  std::size_t ball_order = 0;
  std::size_t interior_order = 0;
  bool finite = false;

  bool claw_free = true;
  std::optional<ClawWitness> claw;

  std::size_t paws_checked = 0;
  std::vector<PawWitness> phi_violations;

  bool ball_two_connected = true;
  std::vector<VertexId> interior_cutvertices;
  bool analytic_two_connected = false;
  std::string caveat;

  bool phi_ok() const { return phi_violations.empty(); }
  bool ok() const { return claw_free && phi_ok() && ball_two_connected; }
  nlohmann::json to_json(const Namer& namer) const;
};

/// Claw-freeness, the paw condition and 2-connectivity on the radius ball
/// around the roots (the whole graph for finite oracles).
PreconditionReport check_preconditions(const GraphOracle& o, std::size_t radius);

/// Paw built from a distance-increasing ray leaving V(c). Throws
/// HypothesisViolation on a claw and InputError for finite oracles.
PawWitness find_paw_via_ray(const GraphOracle& o, const OrientedCycle& c);

/// True when the four vertices induce exactly the paw edges.
bool is_induced_paw(const GraphOracle& o, const PawWitness& p);

}  // namespace clawham
