#pragma once

#include <cstdint>

#include "ponvirt/power_model.hpp"
#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

struct SearchLimits {
  // Search nodes over all subproblems before giving up with ResourceError.
  std::uint64_t max_nodes = 20'000'000;
};

struct ExactResult {
  PlacementSolution solution;
  FlowAssignment flows;
  PowerReport report;
  // Objective as accumulated by the search (processing plus per-object
  // service costs); equals report.total_w up to rounding.
  double search_objective_w = 0.0;
  std::uint64_t nodes_explored = 0;
};

// Provably optimal placement, routing and report.
//
// Given a placement, each object is best served entirely by its cheapest
// visible instance along shortest paths, so the problem reduces to choosing
// which (type, candidate) instances to open. The search enumerates which
// types the OLT hosts; for each choice the networks are independent. Within
// a network every type's instance sets are enumerated by branch and bound in
// cost order, and the types are then combined under the per-cloudlet
// capacity limit.
//
// Ties resolve to the lexicographically smallest placement vector, ordered
// by (type, node id). Throws ResourceError when the node budget runs out and
// InfeasibleError when capacity cannot accommodate the requested types.
ExactResult solve_exact(const NetworkInstance& instance, const ModelParams& params,
                        const SearchLimits& limits = {});

}  // namespace ponvirt
