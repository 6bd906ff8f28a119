#pragma once

#include <cstdint>

#include "ponvirt/topology.hpp"

namespace fixtures {

// object(0) -> relay(1) -> coordinator(2) -> gateway(3) -> ONU(4) -> OLT(5),
// one type-0 request, gateway 100 m from the coordinator.
inline ponvirt::NetworkInstance chain(double object_relay_m, double relay_coord_m = 0.0, int vm_types = 4) {
  using namespace ponvirt;
  std::vector<Node> nodes = {
      {0, Layer::Object, 0, {0, 0}},   {1, Layer::Relay, 0, {0, 0}}, {2, Layer::Coordinator, 0, {0, 0}},
      {3, Layer::Gateway, 0, {0, 0}}, {4, Layer::Onu, 0, {0, 0}},   {5, Layer::Olt, kNoNetwork, {0, 0}}};
  std::vector<Link> links = {{0, 1, Medium::Wireless, object_relay_m},
                             {1, 2, Medium::Wireless, relay_coord_m},
                             {2, 3, Medium::Wireless, 100.0},
                             {3, 4, Medium::Ethernet, 0.0},
                             {4, 5, Medium::Fiber, 0.0}};
  return NetworkInstance(nodes, links, {0, -1, -1, -1, -1, -1}, 1, vm_types);
}

// chain(10, 10) under scenario 1, r = 0.9, computed by hand. Every host
// burns 0.464 W for type 0, so the relay wins on traffic. Per-bit link
// costs (J/bit): 325.5e-9, 627.5e-9, 73e-6, 52.5e-9, 38.628e-9.
inline constexpr double kChainVmPowerW = 0.464;
inline constexpr double kChainRelayTrafficW = 5000.0 * (325.5e-9 + 0.1 * (627.5e-9 + 73e-6 + 52.5e-9 + 38.628e-9));
inline constexpr double kChainTotalW = kChainVmPowerW + kChainRelayTrafficW;

// Small random instance: relays drawn uniformly, any relay count allowed.
inline ponvirt::TopologyConfig tiny(std::uint64_t seed, int networks, int relays, int objects, int types) {
  ponvirt::TopologyConfig c;
  c.networks = networks;
  c.objects_per_network = objects;
  c.relays_per_network = relays;
  c.relay_layout = ponvirt::RelayLayout::Random;
  c.request_assignment = ponvirt::RequestAssignment::SeededUniform;
  c.vm_types = types;
  c.rng_seed = seed;
  return c;
}

}  // namespace fixtures
