#include "ponvirt/routing.hpp"

#include <functional>
#include <queue>
#include <tuple>

#include "ponvirt/errors.hpp"

namespace ponvirt {

PathTree::PathTree(const NetworkInstance& instance, NodeId target, const std::vector<double>& link_cost,
                   const std::vector<char>& allowed, PathRule rule)
    : target_(target),
      cost_(instance.num_nodes(), kUnreachable),
      hops_(instance.num_nodes(), std::numeric_limits<int>::max()),
      next_(instance.num_nodes(), -1) {
  // Key: (hops, cost) for MinHop, (0, cost) for Cheapest.
  using Key = std::tuple<int, double, NodeId>;
  auto key_of = [&](NodeId x) {
    const auto i = static_cast<std::size_t>(x);
    return Key{rule == PathRule::MinHop ? hops_[i] : 0, cost_[i], x};
  };
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  std::vector<char> settled(instance.num_nodes(), 0);
  cost_[static_cast<std::size_t>(target)] = 0.0;
  hops_[static_cast<std::size_t>(target)] = 0;
  queue.push(key_of(target));
  while (!queue.empty()) {
    const Key top = queue.top();
    queue.pop();
    const NodeId y = std::get<2>(top);
    const auto yi = static_cast<std::size_t>(y);
    if (settled[yi] || top != key_of(y)) continue;
    settled[yi] = 1;
    for (LinkId l : instance.in_links(y)) {
      if (!allowed[static_cast<std::size_t>(l)]) continue;
      const NodeId x = instance.link(l).src;
      const auto xi = static_cast<std::size_t>(x);
      if (settled[xi]) continue;
      const double c = cost_[yi] + link_cost[static_cast<std::size_t>(l)];
      const int h = hops_[yi] + 1;
      const auto candidate = rule == PathRule::MinHop ? std::pair{h, c} : std::pair{0, c};
      const auto current = rule == PathRule::MinHop ? std::pair{hops_[xi], cost_[xi]}
                                                    : std::pair{0, cost_[xi]};
      bool better = candidate < current;
      if (!better && candidate == current && next_[xi] >= 0)
        better = y < instance.link(next_[xi]).dst;
      if (better) {
        cost_[xi] = c;
        hops_[xi] = h;
        next_[xi] = l;
        queue.push(key_of(x));
      }
    }
  }
}

std::vector<LinkId> PathTree::path(const NetworkInstance& instance, NodeId from) const {
  if (!reachable(from))
    throw ModelError("node " + std::to_string(from) + " cannot reach node " + std::to_string(target_));
  std::vector<LinkId> out;
  NodeId x = from;
  while (x != target_) {
    const LinkId l = next_[static_cast<std::size_t>(x)];
    out.push_back(l);
    x = instance.link(l).dst;
  }
  return out;
}

std::vector<double> link_costs(const NetworkInstance& instance, const ModelParams& params) {
  std::vector<double> cost(instance.num_links());
  for (std::size_t l = 0; l < cost.size(); ++l)
    cost[l] = link_cost_per_bit(instance.link(static_cast<LinkId>(l)), instance, params);
  return cost;
}

namespace {

std::vector<char> all_links(const NetworkInstance& instance) {
  return std::vector<char>(instance.num_links(), 1);
}

std::vector<char> candidate_links(const NetworkInstance& instance) {
  std::vector<char> allowed(instance.num_links(), 0);
  for (std::size_t l = 0; l < allowed.size(); ++l) {
    const Link& k = instance.link(static_cast<LinkId>(l));
    allowed[l] = instance.is_candidate(k.src) && instance.is_candidate(k.dst);
  }
  return allowed;
}

}  // namespace

RouteTable::RouteTable(const NetworkInstance& instance, const ModelParams& params, PathRule rule)
    : instance_(&instance),
      link_cost_(link_costs(instance, params)),
      candidate_slot_(instance.num_nodes(), -1),
      processed_(instance, instance.olt(), link_cost_, candidate_links(instance), rule) {
  const auto allowed = all_links(instance);
  unprocessed_.reserve(instance.candidates().size());
  for (NodeId c : instance.candidates()) {
    candidate_slot_[static_cast<std::size_t>(c)] = static_cast<int>(unprocessed_.size());
    unprocessed_.emplace_back(instance, c, link_cost_, allowed, rule);
  }
}

const PathTree& RouteTable::tree_for(NodeId cloudlet) const {
  const int slot = candidate_slot_.at(static_cast<std::size_t>(cloudlet));
  if (slot < 0) throw ModelError("node " + std::to_string(cloudlet) + " is not a candidate");
  return unprocessed_[static_cast<std::size_t>(slot)];
}

double RouteTable::unprocessed_cost(NodeId from, NodeId cloudlet) const {
  return tree_for(cloudlet).cost(from);
}

double RouteTable::processed_cost(NodeId cloudlet) const { return processed_.cost(cloudlet); }

std::vector<LinkId> RouteTable::unprocessed_path(NodeId from, NodeId cloudlet) const {
  return tree_for(cloudlet).path(*instance_, from);
}

std::vector<LinkId> RouteTable::processed_path(NodeId cloudlet) const {
  return processed_.path(*instance_, cloudlet);
}

double RouteTable::service_cost(NodeId object, NodeId cloudlet, const ModelParams& params) const {
  const double up = unprocessed_cost(object, cloudlet);
  const double down = processed_cost(cloudlet);
  if (up == kUnreachable || down == kUnreachable) return kUnreachable;
  return params.demand_bps * (up + params.remaining_fraction() * down);
}

FlowAssignment build_flows(const NetworkInstance& instance, const ModelParams& params,
                           const RouteTable& routes, const std::vector<ServiceShare>& shares) {
  FlowAssignment flows = FlowAssignment::zero(instance);
  std::vector<double> inflow(instance.num_nodes(), 0.0);
  for (const ServiceShare& s : shares) {
    if (s.rate_bps <= 0.0) continue;
    UnprocessedCommodity c{s.object, s.cloudlet, s.rate_bps, {}};
    for (LinkId l : routes.unprocessed_path(s.object, s.cloudlet)) c.links.push_back({l, s.rate_bps});
    inflow[static_cast<std::size_t>(s.cloudlet)] += s.rate_bps;
    flows.unprocessed_commodities.push_back(std::move(c));
  }
  const double f = params.remaining_fraction();
  for (NodeId c : instance.candidates()) {
    const double in = inflow[static_cast<std::size_t>(c)];
    if (c == instance.olt() || in <= 0.0) continue;
    ProcessedCommodity p{c, instance.olt(), f * in, {}};
    for (LinkId l : routes.processed_path(c)) p.links.push_back({l, p.rate_bps});
    flows.processed_commodities.push_back(std::move(p));
  }
  flows.aggregate();
  return flows;
}

}  // namespace ponvirt
