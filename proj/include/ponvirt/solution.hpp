#pragma once

#include <vector>

#include "ponvirt/topology.hpp"

namespace ponvirt {

// Part of one object's demand served by the VM at `cloudlet`.
struct ServiceShare {
  NodeId object = 0;
  int vm_type = 0;
  NodeId cloudlet = 0;
  double rate_bps = 0.0;
};

struct PlacementSolution {
  // placed[v][node] is I_vc; rows span every node, objects stay 0.
  std::vector<std::vector<char>> placed;
  std::vector<char> cloudlet_open;
  std::vector<double> workload;
  std::vector<ServiceShare> assignment;

  static PlacementSolution empty(const NetworkInstance& instance);

  int vm_types() const { return static_cast<int>(placed.size()); }
  bool is_placed(int vm_type, NodeId node) const {
    return placed[static_cast<std::size_t>(vm_type)][static_cast<std::size_t>(node)] != 0;
  }
  int vm_count() const;
  int cloudlet_count() const;
};

struct PathFlow {
  LinkId link = 0;
  double rate_bps = 0.0;
};

// Unprocessed traffic of one (object, cloudlet) pair, per link.
struct UnprocessedCommodity {
  NodeId object = 0;
  NodeId cloudlet = 0;
  double rate_bps = 0.0;
  std::vector<PathFlow> links;
};

// Processed traffic of one (cloudlet, OLT) pair, per link.
struct ProcessedCommodity {
  NodeId cloudlet = 0;
  NodeId olt = 0;
  double rate_bps = 0.0;
  std::vector<PathFlow> links;
};

struct FlowAssignment {
  // Aggregate rates indexed by LinkId.
  std::vector<double> unprocessed;
  std::vector<double> processed;
  std::vector<UnprocessedCommodity> unprocessed_commodities;
  std::vector<ProcessedCommodity> processed_commodities;

  static FlowAssignment zero(const NetworkInstance& instance);
  // Rebuilds the aggregates from the commodities.
  void aggregate();
};

}  // namespace ponvirt
