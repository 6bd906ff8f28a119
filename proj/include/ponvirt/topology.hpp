#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ponvirt {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

enum class Layer : std::uint8_t { Object, Relay, Coordinator, Gateway, Onu, Olt };
inline constexpr std::size_t kLayerCount = 6;
inline constexpr std::array<Layer, kLayerCount> kAllLayers = {
    Layer::Object, Layer::Relay, Layer::Coordinator,
    Layer::Gateway, Layer::Onu,  Layer::Olt};

enum class Medium : std::uint8_t { Wireless, Ethernet, Fiber };

enum class RequestAssignment : std::uint8_t { RoundRobin, SeededUniform };

// Grid puts relays on a centered square lattice; Random draws them uniformly
// in the area like the objects (used for tiny test instances whose relay
// count is not a perfect square).
enum class RelayLayout : std::uint8_t { Grid, Random };

// Network id carried by the OLT, which belongs to no IoT network.
inline constexpr int kNoNetwork = -1;

std::string_view to_string(Layer layer);
std::string_view to_string(Medium medium);
std::string_view to_string(RequestAssignment policy);
std::string_view to_string(RelayLayout layout);
Layer parse_layer(std::string_view text);
Medium parse_medium(std::string_view text);
RequestAssignment parse_request_assignment(std::string_view text);
RelayLayout parse_relay_layout(std::string_view text);

constexpr std::size_t index(Layer layer) { return static_cast<std::size_t>(layer); }

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Node {
  NodeId id = 0;
  Layer layer = Layer::Object;
  int network = kNoNetwork;
  Point position;
};

struct Link {
  NodeId src = 0;
  NodeId dst = 0;
  Medium medium = Medium::Wireless;
  double distance_m = 0.0;
};

struct TopologyConfig {
  int networks = 2;
  int objects_per_network = 50;
  int relays_per_network = 25;
  double area_side_m = 30.0;
  double relay_spacing_m = 6.0;
  double gateway_coordinator_distance_m = 100.0;
  std::uint64_t rng_seed = 7;
  int vm_types = 4;
  RequestAssignment request_assignment = RequestAssignment::RoundRobin;
  RelayLayout relay_layout = RelayLayout::Grid;
  // Defaults to the area center.
  std::optional<Point> coordinator_position;

  // Reduced instance used by the exact engine in sweeps: 4 relays on a 2x2
  // grid, the full object population, so each VM type keeps the same number
  // of requesting objects as the full-size instance.
  static TopologyConfig reduced(int relays = 4, int objects = 50);
};

// Immutable layered uplink graph. Node ids are dense: for each network in
// order, its objects, relays, coordinator, gateway and ONU; the OLT is last.
class NetworkInstance {
 public:
  NetworkInstance(std::vector<Node> nodes, std::vector<Link> links,
                  std::vector<int> vm_request, int networks, int vm_types);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Link> links() const { return links_; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Link& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }
  int networks() const { return networks_; }
  int vm_types() const { return vm_types_; }

  // -1 for non-object nodes.
  int vm_request(NodeId id) const { return vm_request_.at(static_cast<std::size_t>(id)); }
  std::span<const int> vm_requests() const { return vm_request_; }

  std::span<const LinkId> out_links(NodeId id) const { return out_.at(static_cast<std::size_t>(id)); }
  std::span<const LinkId> in_links(NodeId id) const { return in_.at(static_cast<std::size_t>(id)); }
  std::optional<LinkId> find_link(NodeId src, NodeId dst) const;

  Layer layer(NodeId id) const { return node(id).layer; }
  bool is_candidate(NodeId id) const { return layer(id) != Layer::Object; }

  const std::vector<NodeId>& objects() const { return objects_; }
  // Candidate cloudlet hosts (every non-object node), ascending id.
  const std::vector<NodeId>& candidates() const { return candidates_; }
  NodeId olt() const { return olt_; }

  // Candidates an object of `network` may send unprocessed traffic to: the
  // ones inside its own network plus the OLT.
  bool visible(int network, NodeId candidate) const {
    const int n = node(candidate).network;
    return n == network || n == kNoNetwork;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<int> vm_request_;
  int networks_ = 0;
  int vm_types_ = 0;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
  std::vector<NodeId> objects_;
  std::vector<NodeId> candidates_;
  NodeId olt_ = -1;
};

NetworkInstance build_instance(const TopologyConfig& config);

// All non-object nodes, ascending id.
std::vector<NodeId> candidate_nodes(const NetworkInstance& instance);

// Throws ConfigError when a structural invariant is broken: layer discipline,
// network isolation, one OLT, one coordinator/gateway/ONU per network, one
// request per object, every object connected to the OLT.
void check_instance(const NetworkInstance& instance);

// nodes.csv: id,layer,network,x,y,vm_request
// edges.csv: src,dst,medium,distance_m
void write_instance_csv(const NetworkInstance& instance, const std::filesystem::path& dir);
// The type count is the highest request plus one unless `vm_types_hint` is
// positive, in which case it is used and must cover every request.
NetworkInstance read_instance_csv(const std::filesystem::path& dir, int vm_types_hint = 0);

}  // namespace ponvirt
