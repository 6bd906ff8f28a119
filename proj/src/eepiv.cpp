#include "ponvirt/eepiv.hpp"

#include <algorithm>

#include "ponvirt/errors.hpp"
#include "ponvirt/routing.hpp"

namespace ponvirt {

namespace {

constexpr double kCapacityTol = 1e-9;

int bottom_up_rank(Layer layer) {
  switch (layer) {
    case Layer::Relay: return 0;
    case Layer::Coordinator: return 1;
    case Layer::Gateway: return 2;
    case Layer::Onu: return 3;
    default: return 4;
  }
}

}  // namespace

std::vector<NodeId> default_candidate_order(const NetworkInstance& instance) {
  std::vector<NodeId> order = instance.candidates();
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const Node& x = instance.node(a);
    const Node& y = instance.node(b);
    const int nx = x.network == kNoNetwork ? instance.networks() : x.network;
    const int ny = y.network == kNoNetwork ? instance.networks() : y.network;
    if (nx != ny) return nx < ny;
    return bottom_up_rank(x.layer) < bottom_up_rank(y.layer);
  });
  return order;
}

EepivResult run_eepiv(const NetworkInstance& instance, const ModelParams& params, const EepivOptions& options) {
  params.check(instance.vm_types());
  const int types = instance.vm_types();
  const int nets = instance.networks();

  std::vector<NodeId> order = options.candidate_order.empty() ? default_candidate_order(instance)
                                                              : options.candidate_order;
  {
    std::vector<NodeId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError("candidate order repeats a node");
    for (NodeId c : sorted)
      if (c < 0 || static_cast<std::size_t>(c) >= instance.num_nodes() || !instance.is_candidate(c))
        throw ConfigError("candidate order contains non-candidate node " + std::to_string(c));
  }

  // requested[n][v]: some object of network n asks for type v.
  std::vector<std::vector<char>> requested(static_cast<std::size_t>(nets), std::vector<char>(static_cast<std::size_t>(types), 0));
  if (params.demand_bps > 0.0)
    for (NodeId o : instance.objects())
      requested[static_cast<std::size_t>(instance.node(o).network)][static_cast<std::size_t>(instance.vm_request(o))] = 1;

  // host[n][v]: the instance serving network n's type-v objects, or -1.
  std::vector<std::vector<NodeId>> host(static_cast<std::size_t>(nets), std::vector<NodeId>(static_cast<std::size_t>(types), -1));
  EepivResult r;
  r.solution = PlacementSolution::empty(instance);
  std::vector<double> tcw(instance.num_nodes(), 0.0);

  for (NodeId c : order) {
    const int n = instance.node(c).network;
    for (int v = 0; v < types; ++v) {
      std::vector<int> scope;
      for (int m = 0; m < nets; ++m) {
        if (n != kNoNetwork && m != n) continue;
        if (requested[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] &&
            host[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] < 0)
          scope.push_back(m);
      }
      if (scope.empty()) continue;
      const double w = params.workload(v, instance.layer(c));
      if (params.capacity_enforced && tcw[static_cast<std::size_t>(c)] + w > 1.0 + kCapacityTol) continue;
      tcw[static_cast<std::size_t>(c)] += w;
      r.solution.placed[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)] = 1;
      for (int m : scope) host[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] = c;
    }
  }
  update_workloads(r.solution, instance, params);

  if (params.demand_bps > 0.0) {
    for (NodeId o : instance.objects()) {
      const int v = instance.vm_request(o);
      const NodeId c = host[static_cast<std::size_t>(instance.node(o).network)][static_cast<std::size_t>(v)];
      if (c < 0) continue;
      r.solution.assignment.push_back(ServiceShare{o, v, c, params.demand_bps});
      ++r.served_count;
    }
  }

  RouteTable routes(instance, params, PathRule::MinHop);
  r.flows = build_flows(instance, params, routes, r.solution.assignment);
  r.report = total_objective(r.solution, r.flows, instance, params);
  if (options.literal_tpc) {
    r.tpc_w = r.report.processing_total() - r.report.processing_w[index(Layer::Olt)] + r.report.traffic_raw_total();
  } else {
    r.tpc_w = r.report.total_w;
  }
  return r;
}

}  // namespace ponvirt
