#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "ponvirt/errors.hpp"
#include "ponvirt/topology.hpp"

using namespace ponvirt;

namespace {

TopologyConfig chain() {
  TopologyConfig c;
  c.networks = 1;
  c.objects_per_network = 1;
  c.relays_per_network = 1;
  c.vm_types = 1;
  return c;
}

}  // namespace

TEST_CASE("default instance has the full node and candidate counts") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  CHECK(inst.num_nodes() == 157);
  CHECK(candidate_nodes(inst).size() == 57);
  CHECK(inst.candidates().size() == 57);
  CHECK(inst.objects().size() == 100);
  CHECK(inst.layer(inst.olt()) == Layer::Olt);
  CHECK(inst.node(inst.olt()).network == kNoNetwork);
}

TEST_CASE("relay grid sits on 3, 9, 15, 21, 27") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  std::set<double> xs, ys;
  for (const Node& n : inst.nodes())
    if (n.layer == Layer::Relay) {
      xs.insert(n.position.x);
      ys.insert(n.position.y);
    }
  CHECK(xs == std::set<double>{3, 9, 15, 21, 27});
  CHECK(ys == std::set<double>{3, 9, 15, 21, 27});
}

TEST_CASE("coordinator at the area centre, gateway 100 m away") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  for (const Node& n : inst.nodes())
    if (n.layer == Layer::Coordinator) {
      CHECK(n.position.x == 15.0);
      CHECK(n.position.y == 15.0);
    }
  for (const Link& l : inst.links())
    if (inst.layer(l.src) == Layer::Coordinator) {
      CHECK(inst.layer(l.dst) == Layer::Gateway);
      CHECK(l.distance_m == 100.0);
    }
}

TEST_CASE("minimal chain has one uplink per hop") {
  const NetworkInstance inst = build_instance(chain());
  REQUIRE(inst.num_nodes() == 6);
  CHECK(inst.candidates().size() == 5);
  const NodeId o = inst.objects().front();
  REQUIRE(inst.out_links(o).size() == 1);
  CHECK(inst.link(inst.out_links(o)[0]).medium == Medium::Wireless);
  std::vector<Layer> walk{inst.layer(o)};
  NodeId x = o;
  while (x != inst.olt()) {
    REQUIRE(inst.out_links(x).size() == 1);
    x = inst.link(inst.out_links(x)[0]).dst;
    walk.push_back(inst.layer(x));
  }
  CHECK(walk == std::vector<Layer>{Layer::Object, Layer::Relay, Layer::Coordinator, Layer::Gateway, Layer::Onu,
                                   Layer::Olt});
}

TEST_CASE("round robin requests split 13/12 per type") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  for (int n = 0; n < 2; ++n) {
    std::vector<int> count(4, 0);
    for (NodeId o : inst.objects())
      if (inst.node(o).network == n) ++count[static_cast<std::size_t>(inst.vm_request(o))];
    for (int c : count) CHECK((c == 12 || c == 13));
  }
}

TEST_CASE("zero relays removes the relay layer from the candidates") {
  TopologyConfig c = chain();
  c.relays_per_network = 0;
  c.objects_per_network = 0;
  const NetworkInstance inst = build_instance(c);
  CHECK(candidate_nodes(inst).size() == 4);
  for (NodeId id : candidate_nodes(inst)) CHECK(inst.layer(id) != Layer::Relay);
}

TEST_CASE("configuration errors") {
  TopologyConfig c;
  c.relays_per_network = 24;
  CHECK_THROWS_AS(build_instance(c), ConfigError);
  c = TopologyConfig{};
  c.networks = 0;
  CHECK_THROWS_AS(build_instance(c), ConfigError);
  c = TopologyConfig{};
  c.objects_per_network = -1;
  CHECK_THROWS_AS(build_instance(c), ConfigError);
  c = chain();
  c.relays_per_network = 0;
  CHECK_THROWS_AS(build_instance(c), ConfigError);
  c = TopologyConfig{};
  c.relays_per_network = 24;
  c.relay_layout = RelayLayout::Random;
  CHECK_NOTHROW(build_instance(c));
}

TEST_CASE("layer discipline, isolation and distances") {
  TopologyConfig c;
  c.request_assignment = RequestAssignment::SeededUniform;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    c.rng_seed = seed;
    const NetworkInstance inst = build_instance(c);
    const std::set<std::pair<Layer, Layer>> allowed = {
        {Layer::Object, Layer::Relay},      {Layer::Relay, Layer::Relay}, {Layer::Relay, Layer::Coordinator},
        {Layer::Coordinator, Layer::Gateway}, {Layer::Gateway, Layer::Onu}, {Layer::Onu, Layer::Olt}};
    for (const Link& l : inst.links()) {
      CHECK(allowed.count({inst.layer(l.src), inst.layer(l.dst)}) == 1);
      if (inst.layer(l.dst) != Layer::Olt) CHECK(inst.node(l.src).network == inst.node(l.dst).network);
      if (l.medium == Medium::Wireless && inst.layer(l.src) != Layer::Coordinator)
        CHECK(l.distance_m <= 30.0 * std::sqrt(2.0) + 1e-12);
    }
    for (const Node& n : inst.nodes())
      if (n.layer == Layer::Object || n.layer == Layer::Relay || n.layer == Layer::Coordinator) {
        CHECK(n.position.x >= 0.0);
        CHECK(n.position.x <= 30.0);
        CHECK(n.position.y >= 0.0);
        CHECK(n.position.y <= 30.0);
      }
    CHECK_NOTHROW(check_instance(inst));
  }
}

TEST_CASE("identical configs build identical instances") {
  TopologyConfig c;
  c.rng_seed = 99;
  c.request_assignment = RequestAssignment::SeededUniform;
  const NetworkInstance a = build_instance(c);
  const NetworkInstance b = build_instance(c);
  REQUIRE(a.num_nodes() == b.num_nodes());
  REQUIRE(a.num_links() == b.num_links());
  for (std::size_t i = 0; i < a.num_nodes(); ++i) {
    const Node& x = a.node(static_cast<NodeId>(i));
    const Node& y = b.node(static_cast<NodeId>(i));
    CHECK(x.position.x == y.position.x);
    CHECK(x.position.y == y.position.y);
    CHECK(a.vm_request(x.id) == b.vm_request(y.id));
  }
  for (std::size_t l = 0; l < a.num_links(); ++l)
    CHECK(a.link(static_cast<LinkId>(l)).distance_m == b.link(static_cast<LinkId>(l)).distance_m);
}

TEST_CASE("CSV export round-trips bit for bit") {
  const NetworkInstance a = build_instance(TopologyConfig::reduced(4, 10));
  const auto dir = std::filesystem::temp_directory_path() / "ponvirt_topology_csv";
  std::filesystem::remove_all(dir);
  write_instance_csv(a, dir);
  CHECK(std::filesystem::exists(dir / "nodes.csv"));
  CHECK(std::filesystem::exists(dir / "edges.csv"));
  const NetworkInstance b = read_instance_csv(dir);
  REQUIRE(a.num_nodes() == b.num_nodes());
  REQUIRE(a.num_links() == b.num_links());
  CHECK(a.networks() == b.networks());
  CHECK(a.vm_types() == b.vm_types());
  for (std::size_t i = 0; i < a.num_nodes(); ++i) {
    CHECK(a.node(static_cast<NodeId>(i)).position.x == b.node(static_cast<NodeId>(i)).position.x);
    CHECK(a.vm_request(static_cast<NodeId>(i)) == b.vm_request(static_cast<NodeId>(i)));
  }
  for (std::size_t l = 0; l < a.num_links(); ++l)
    CHECK(a.link(static_cast<LinkId>(l)).distance_m == b.link(static_cast<LinkId>(l)).distance_m);
  std::filesystem::remove_all(dir);
}

TEST_CASE("enum text round trips") {
  for (Layer l : kAllLayers) CHECK(parse_layer(to_string(l)) == l);
  CHECK(parse_medium(to_string(Medium::Fiber)) == Medium::Fiber);
  CHECK(parse_relay_layout("random") == RelayLayout::Random);
  CHECK_THROWS_AS(parse_layer("satellite"), ConfigError);
}
