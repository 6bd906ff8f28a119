#pragma once

#include <limits>
#include <vector>

#include "ponvirt/power_model.hpp"
#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

enum class PathRule {
  // Minimum total link_cost_per_bit.
  Cheapest,
  // Fewest hops, then minimum cost.
  MinHop,
};

// Tree of preferred paths from every node towards one target, restricted to
// an allowed link subset. Equal keys resolve to the smallest next-node id.
class PathTree {
 public:
  PathTree(const NetworkInstance& instance, NodeId target, const std::vector<double>& link_cost,
           const std::vector<char>& allowed, PathRule rule);

  bool reachable(NodeId from) const { return cost_[static_cast<std::size_t>(from)] < kUnreachable; }
  double cost(NodeId from) const { return cost_[static_cast<std::size_t>(from)]; }
  int hops(NodeId from) const { return hops_[static_cast<std::size_t>(from)]; }
  // Links from `from` to the target; empty when from == target.
  std::vector<LinkId> path(const NetworkInstance& instance, NodeId from) const;

 private:
  NodeId target_;
  std::vector<double> cost_;
  std::vector<int> hops_;
  std::vector<LinkId> next_;
};

std::vector<double> link_costs(const NetworkInstance& instance, const ModelParams& params);

// Paths and per-bit costs for every (object, candidate) unprocessed route and
// every candidate-to-OLT processed route; processed routes stay inside the
// candidate subgraph.
class RouteTable {
 public:
  RouteTable(const NetworkInstance& instance, const ModelParams& params, PathRule rule);

  const std::vector<double>& link_cost() const { return link_cost_; }

  double unprocessed_cost(NodeId from, NodeId cloudlet) const;
  double processed_cost(NodeId cloudlet) const;
  std::vector<LinkId> unprocessed_path(NodeId from, NodeId cloudlet) const;
  std::vector<LinkId> processed_path(NodeId cloudlet) const;

  // Watts spent routing one object's whole demand through `cloudlet`:
  // demand * (unprocessed path + f * processed path).
  double service_cost(NodeId object, NodeId cloudlet, const ModelParams& params) const;

 private:
  const PathTree& tree_for(NodeId cloudlet) const;

  const NetworkInstance* instance_;
  std::vector<double> link_cost_;
  std::vector<int> candidate_slot_;
  std::vector<PathTree> unprocessed_;
  PathTree processed_;
};

// Routes every share along the table's paths and adds one processed
// commodity per non-OLT cloudlet carrying f times its unprocessed inflow.
FlowAssignment build_flows(const NetworkInstance& instance, const ModelParams& params,
                           const RouteTable& routes, const std::vector<ServiceShare>& shares);

}  // namespace ponvirt
