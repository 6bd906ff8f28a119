#include "brute_force.hpp"
#include "doctest.h"
#include "ponvirt/routing.hpp"

using namespace ponvirt;

namespace {

TopologyConfig tiny(std::uint64_t seed, int relays) {
  TopologyConfig c;
  c.networks = 2;
  c.objects_per_network = 3;
  c.relays_per_network = relays;
  c.relay_layout = RelayLayout::Random;
  c.vm_types = 2;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("cheapest paths match simple-path enumeration") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const NetworkInstance inst = build_instance(tiny(seed, 3));
    const ModelParams p = ModelParams::for_scenario(1, 0.5);
    const RouteTable routes(inst, p, PathRule::Cheapest);
    for (NodeId c : inst.candidates()) {
      if (c != inst.olt())
        CHECK(routes.processed_cost(c) ==
              doctest::Approx(oracle::cheapest_simple_path(inst, p, c, inst.olt(), true)).epsilon(1e-12));
      for (NodeId o : inst.objects()) {
        if (!inst.visible(inst.node(o).network, c)) continue;
        CHECK(routes.unprocessed_cost(o, c) ==
              doctest::Approx(oracle::cheapest_simple_path(inst, p, o, c, false)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("path links chain from source to target and sum to the cost") {
  const NetworkInstance inst = build_instance(tiny(4, 3));
  const ModelParams p;
  for (PathRule rule : {PathRule::Cheapest, PathRule::MinHop}) {
    const RouteTable routes(inst, p, rule);
    for (NodeId o : inst.objects()) {
      const auto path = routes.unprocessed_path(o, inst.olt());
      NodeId x = o;
      double cost = 0.0;
      for (LinkId l : path) {
        CHECK(inst.link(l).src == x);
        x = inst.link(l).dst;
        cost += routes.link_cost()[static_cast<std::size_t>(l)];
      }
      CHECK(x == inst.olt());
      CHECK(cost == doctest::Approx(routes.unprocessed_cost(o, inst.olt())).epsilon(1e-12));
    }
  }
}

TEST_CASE("min-hop paths take the fewest hops") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  const RouteTable routes(inst, ModelParams{}, PathRule::MinHop);
  for (NodeId o : inst.objects()) {
    NodeId coord = -1;
    for (NodeId c : inst.candidates())
      if (inst.layer(c) == Layer::Coordinator && inst.node(c).network == inst.node(o).network) coord = c;
    CHECK(routes.unprocessed_path(o, coord).size() == 2);
    CHECK(routes.unprocessed_path(o, inst.olt()).size() == 5);
  }
}

TEST_CASE("equal-cost ties go to the smaller next node") {
  // Two relays equidistant from the object and the coordinator.
  std::vector<Node> nodes = {{0, Layer::Object, 0, {0, 0}},     {1, Layer::Relay, 0, {1, 0}},
                             {2, Layer::Relay, 0, {-1, 0}},     {3, Layer::Coordinator, 0, {0, 0}},
                             {4, Layer::Gateway, 0, {0, 100}}, {5, Layer::Onu, 0, {0, 0}},
                             {6, Layer::Olt, kNoNetwork, {0, 0}}};
  std::vector<Link> links = {{0, 2, Medium::Wireless, 1.0}, {0, 1, Medium::Wireless, 1.0},
                             {1, 3, Medium::Wireless, 1.0}, {2, 3, Medium::Wireless, 1.0},
                             {3, 4, Medium::Wireless, 100}, {4, 5, Medium::Ethernet, 0},
                             {5, 6, Medium::Fiber, 0}};
  const NetworkInstance inst(nodes, links, {0, -1, -1, -1, -1, -1, -1}, 1, 1);
  for (PathRule rule : {PathRule::Cheapest, PathRule::MinHop}) {
    const RouteTable routes(inst, ModelParams{}, rule);
    const auto path = routes.unprocessed_path(0, 3);
    REQUIRE(path.size() == 2);
    CHECK(inst.link(path[0]).dst == 1);
  }
}

TEST_CASE("processed commodities carry f times the inflow") {
  const NetworkInstance inst = build_instance(tiny(2, 2));
  ModelParams p = ModelParams::for_scenario(1, 0.7);
  const RouteTable routes(inst, p, PathRule::Cheapest);
  const NodeId relay = inst.candidates().front();
  std::vector<ServiceShare> shares;
  for (NodeId o : inst.objects())
    shares.push_back({o, inst.vm_request(o), inst.node(o).network == 0 ? relay : inst.olt(), p.demand_bps});
  const FlowAssignment f = build_flows(inst, p, routes, shares);
  CHECK(f.unprocessed_commodities.size() == inst.objects().size());
  REQUIRE(f.processed_commodities.size() == 1);
  CHECK(f.processed_commodities[0].cloudlet == relay);
  CHECK(f.processed_commodities[0].rate_bps == doctest::Approx(0.3 * 3 * 5000.0));
}
