#pragma once

#include <vector>

#include "ponvirt/power_model.hpp"
#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

struct EepivOptions {
  // Order in which candidates are offered VMs. Empty means bottom-up: per
  // network, relays by ascending id, then coordinator, gateway and ONU; the
  // OLT last.
  std::vector<NodeId> candidate_order;
  // Report tpc_w as the printed total: processing without the OLT plus raw,
  // unweighted traffic power.
  bool literal_tpc = false;
};

struct EepivResult {
  PlacementSolution solution;
  FlowAssignment flows;
  // Always the fully weighted objective, comparable with the exact engine.
  PowerReport report;
  int served_count = 0;
  double tpc_w = 0.0;
};

std::vector<NodeId> default_candidate_order(const NetworkInstance& instance);

// Greedy first-fit placement: each candidate in turn hosts every requested
// VM type that fits in its residual capacity and is not yet hosted for its
// network (the OLT hosts a type for every network still lacking it). Objects
// send to their network's instance over min-hop paths; objects whose type
// found no host stay unserved.
EepivResult run_eepiv(const NetworkInstance& instance, const ModelParams& params,
                      const EepivOptions& options = {});

}  // namespace ponvirt
