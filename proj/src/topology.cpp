#include "ponvirt/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ponvirt/errors.hpp"

namespace ponvirt {
namespace {

// std::uniform_real_distribution is not specified bit-for-bit across standard
// libraries, so draws are derived from the raw engine output.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int index_draw(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

bool is_perfect_square(int n, int& root) {
  root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return root * root == n;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = static_cast<T>(std::stod(text, &used));
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad ") + what + ": '" + text + "'");
    }
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ConfigError(std::string("bad ") + what + ": '" + text + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::Object: return "object";
    case Layer::Relay: return "relay";
    case Layer::Coordinator: return "coordinator";
    case Layer::Gateway: return "gateway";
    case Layer::Onu: return "onu";
    case Layer::Olt: return "olt";
  }
  return "?";
}

std::string_view to_string(Medium medium) {
  switch (medium) {
    case Medium::Wireless: return "wireless";
    case Medium::Ethernet: return "ethernet";
    case Medium::Fiber: return "fiber";
  }
  return "?";
}

std::string_view to_string(RequestAssignment policy) {
  return policy == RequestAssignment::RoundRobin ? "round_robin" : "seeded_uniform";
}

std::string_view to_string(RelayLayout layout) {
  return layout == RelayLayout::Grid ? "grid" : "random";
}

Layer parse_layer(std::string_view text) {
  for (Layer l : kAllLayers)
    if (to_string(l) == text) return l;
  throw ConfigError("unknown layer: " + std::string(text));
}

Medium parse_medium(std::string_view text) {
  for (Medium m : {Medium::Wireless, Medium::Ethernet, Medium::Fiber})
    if (to_string(m) == text) return m;
  throw ConfigError("unknown medium: " + std::string(text));
}

RequestAssignment parse_request_assignment(std::string_view text) {
  if (text == "round_robin") return RequestAssignment::RoundRobin;
  if (text == "seeded_uniform") return RequestAssignment::SeededUniform;
  throw ConfigError("unknown request assignment: " + std::string(text));
}

RelayLayout parse_relay_layout(std::string_view text) {
  if (text == "grid") return RelayLayout::Grid;
  if (text == "random") return RelayLayout::Random;
  throw ConfigError("unknown relay layout: " + std::string(text));
}

TopologyConfig TopologyConfig::reduced(int relays, int objects) {
  TopologyConfig c;
  c.relays_per_network = relays;
  c.objects_per_network = objects;
  int root = 0;
  if (relays > 0 && is_perfect_square(relays, root)) {
    c.relay_spacing_m = c.area_side_m / root;
  } else {
    c.relay_layout = RelayLayout::Random;
  }
  return c;
}

NetworkInstance::NetworkInstance(std::vector<Node> nodes, std::vector<Link> links,
                                 std::vector<int> vm_request, int networks, int vm_types)
    : nodes_(std::move(nodes)),
      links_(std::move(links)),
      vm_request_(std::move(vm_request)),
      networks_(networks),
      vm_types_(vm_types),
      out_(nodes_.size()),
      in_(nodes_.size()) {
  if (vm_request_.size() != nodes_.size())
    throw ConfigError("vm_request size does not match node count");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != static_cast<NodeId>(i))
      throw ConfigError("node ids must be dense and ordered, got " + std::to_string(nodes_[i].id) +
                        " at position " + std::to_string(i));
    if (nodes_[i].layer == Layer::Object) {
      objects_.push_back(nodes_[i].id);
    } else {
      candidates_.push_back(nodes_[i].id);
      if (nodes_[i].layer == Layer::Olt) {
        if (olt_ >= 0) throw ConfigError("more than one OLT");
        olt_ = nodes_[i].id;
      }
    }
  }
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const Link& k = links_[l];
    if (k.src < 0 || k.dst < 0 || static_cast<std::size_t>(k.src) >= nodes_.size() ||
        static_cast<std::size_t>(k.dst) >= nodes_.size())
      throw ConfigError("link endpoint out of range");
    out_[static_cast<std::size_t>(k.src)].push_back(static_cast<LinkId>(l));
    in_[static_cast<std::size_t>(k.dst)].push_back(static_cast<LinkId>(l));
  }
}

std::optional<LinkId> NetworkInstance::find_link(NodeId src, NodeId dst) const {
  for (LinkId l : out_links(src))
    if (link(l).dst == dst) return l;
  return std::nullopt;
}

NetworkInstance build_instance(const TopologyConfig& config) {
  require(config.networks > 0, "networks must be positive");
  require(config.objects_per_network >= 0, "objects_per_network must be nonnegative");
  require(config.relays_per_network >= 0, "relays_per_network must be nonnegative");
  require(config.relays_per_network > 0 || config.objects_per_network == 0,
          "objects need at least one relay to reach the network");
  require(config.vm_types > 0, "vm_types must be positive");
  require(config.area_side_m > 0.0, "area_side_m must be positive");
  require(config.gateway_coordinator_distance_m >= 0.0,
          "gateway_coordinator_distance_m must be nonnegative");

  const double side = config.area_side_m;
  int grid = 0;
  double grid_start = 0.0;
  if (config.relay_layout == RelayLayout::Grid && config.relays_per_network > 0) {
    require(is_perfect_square(config.relays_per_network, grid),
            "relays_per_network must be a perfect square for the grid layout, got " +
                std::to_string(config.relays_per_network));
    require(config.relay_spacing_m > 0.0, "relay_spacing_m must be positive");
    const double span = (grid - 1) * config.relay_spacing_m;
    require(span <= side, "relay grid does not fit in the area");
    grid_start = (side - span) / 2.0;
  }
  const Point coordinator = config.coordinator_position.value_or(Point{side / 2.0, side / 2.0});
  require(coordinator.x >= 0.0 && coordinator.x <= side && coordinator.y >= 0.0 &&
              coordinator.y <= side,
          "coordinator position outside the area");

  std::mt19937_64 rng(config.rng_seed);
  std::vector<Node> nodes;
  std::vector<int> request;
  std::vector<Link> links;

  auto add_node = [&](Layer layer, int network, Point p, int vm) {
    nodes.push_back(Node{static_cast<NodeId>(nodes.size()), layer, network, p});
    request.push_back(vm);
    return nodes.back().id;
  };

  std::vector<NodeId> onus;
  for (int n = 0; n < config.networks; ++n) {
    std::vector<NodeId> objects;
    for (int i = 0; i < config.objects_per_network; ++i) {
      const Point p{unit_draw(rng) * side, unit_draw(rng) * side};
      const int vm = config.request_assignment == RequestAssignment::RoundRobin
                         ? i % config.vm_types
                         : index_draw(rng, config.vm_types);
      objects.push_back(add_node(Layer::Object, n, p, vm));
    }
    std::vector<NodeId> relays;
    for (int i = 0; i < config.relays_per_network; ++i) {
      Point p;
      if (config.relay_layout == RelayLayout::Grid) {
        p = {grid_start + (i % grid) * config.relay_spacing_m,
             grid_start + (i / grid) * config.relay_spacing_m};
      } else {
        p = {unit_draw(rng) * side, unit_draw(rng) * side};
      }
      relays.push_back(add_node(Layer::Relay, n, p, -1));
    }
    const NodeId coord = add_node(Layer::Coordinator, n, coordinator, -1);
    // The gateway sits outside the area; only its distance to the
    // coordinator matters.
    const NodeId gateway = add_node(
        Layer::Gateway, n, Point{coordinator.x, coordinator.y + config.gateway_coordinator_distance_m}, -1);
    const NodeId onu = add_node(Layer::Onu, n, Point{}, -1);
    onus.push_back(onu);

    auto wireless = [&](NodeId a, NodeId b) {
      const double d = std::sqrt(squared_distance(nodes[static_cast<std::size_t>(a)].position,
                                                  nodes[static_cast<std::size_t>(b)].position));
      links.push_back(Link{a, b, Medium::Wireless, d});
    };
    for (NodeId o : objects)
      for (NodeId r : relays) wireless(o, r);
    for (NodeId r : relays) {
      for (NodeId s : relays)
        if (r != s) wireless(r, s);
      wireless(r, coord);
    }
    links.push_back(Link{coord, gateway, Medium::Wireless, config.gateway_coordinator_distance_m});
    links.push_back(Link{gateway, onu, Medium::Ethernet, 0.0});
  }
  const NodeId olt = add_node(Layer::Olt, kNoNetwork, Point{}, -1);
  for (NodeId onu : onus) links.push_back(Link{onu, olt, Medium::Fiber, 0.0});

  return NetworkInstance(std::move(nodes), std::move(links), std::move(request), config.networks,
                         config.vm_types);
}

std::vector<NodeId> candidate_nodes(const NetworkInstance& instance) {
  return instance.candidates();
}

void check_instance(const NetworkInstance& inst) {
  auto fail = [](const std::string& m) { throw ConfigError("invalid instance: " + m); };
  if (inst.olt() < 0) fail("no OLT");
  const int nets = inst.networks();
  std::vector<std::array<int, kLayerCount>> per_network(static_cast<std::size_t>(nets));
  for (const Node& n : inst.nodes()) {
    if (n.layer == Layer::Olt) {
      if (n.network != kNoNetwork) fail("OLT carries a network id");
      continue;
    }
    if (n.network < 0 || n.network >= nets) fail("node " + std::to_string(n.id) + " has bad network");
    per_network[static_cast<std::size_t>(n.network)][index(n.layer)]++;
    const int vm = inst.vm_request(n.id);
    if (n.layer == Layer::Object) {
      if (vm < 0 || vm >= inst.vm_types())
        fail("object " + std::to_string(n.id) + " has no valid VM request");
    } else if (vm != -1) {
      fail("non-object " + std::to_string(n.id) + " carries a VM request");
    }
  }
  for (int n = 0; n < nets; ++n) {
    const auto& c = per_network[static_cast<std::size_t>(n)];
    for (Layer l : {Layer::Coordinator, Layer::Gateway, Layer::Onu})
      if (c[index(l)] != 1)
        fail("network " + std::to_string(n) + " must have exactly one " + std::string(to_string(l)));
  }
  static constexpr std::array<std::pair<Layer, Layer>, 6> allowed = {{
      {Layer::Object, Layer::Relay},
      {Layer::Relay, Layer::Relay},
      {Layer::Relay, Layer::Coordinator},
      {Layer::Coordinator, Layer::Gateway},
      {Layer::Gateway, Layer::Onu},
      {Layer::Onu, Layer::Olt},
  }};
  for (const Link& k : inst.links()) {
    const Node& a = inst.node(k.src);
    const Node& b = inst.node(k.dst);
    if (std::find(allowed.begin(), allowed.end(), std::pair{a.layer, b.layer}) == allowed.end())
      fail("link " + std::to_string(k.src) + "->" + std::to_string(k.dst) + " breaks layer order");
    if (a.layer != Layer::Onu && a.network != b.network)
      fail("link " + std::to_string(k.src) + "->" + std::to_string(k.dst) + " crosses networks");
    if (!(k.distance_m >= 0.0) || !std::isfinite(k.distance_m)) fail("bad link distance");
    if (k.src == k.dst) fail("self loop");
  }
  // Reverse reachability from the OLT.
  std::vector<char> reaches(inst.num_nodes(), 0);
  std::vector<NodeId> stack{inst.olt()};
  reaches[static_cast<std::size_t>(inst.olt())] = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (LinkId l : inst.in_links(x)) {
      const NodeId y = inst.link(l).src;
      if (!reaches[static_cast<std::size_t>(y)]) {
        reaches[static_cast<std::size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  for (NodeId o : inst.objects())
    if (!reaches[static_cast<std::size_t>(o)]) fail("object " + std::to_string(o) + " cannot reach the OLT");
}

void write_instance_csv(const NetworkInstance& inst, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream nodes(dir / "nodes.csv");
  std::ofstream edges(dir / "edges.csv");
  if (!nodes || !edges) throw IoError("cannot write instance files in " + dir.string());
  nodes << "id,layer,network,x,y,vm_request\n";
  for (const Node& n : inst.nodes()) {
    nodes << n.id << ',' << to_string(n.layer) << ',' << n.network << ','
          << format_double(n.position.x) << ',' << format_double(n.position.y) << ',';
    if (n.layer == Layer::Object) nodes << inst.vm_request(n.id);
    nodes << '\n';
  }
  edges << "src,dst,medium,distance_m\n";
  for (const Link& k : inst.links())
    edges << k.src << ',' << k.dst << ',' << to_string(k.medium) << ',' << format_double(k.distance_m)
          << '\n';
  if (!nodes || !edges) throw IoError("failed writing instance files in " + dir.string());
}

NetworkInstance read_instance_csv(const std::filesystem::path& dir, int vm_types_hint) {
  std::ifstream nodes_in(dir / "nodes.csv");
  std::ifstream edges_in(dir / "edges.csv");
  if (!nodes_in || !edges_in) throw IoError("cannot read nodes.csv/edges.csv in " + dir.string());

  std::vector<Node> nodes;
  std::vector<int> request;
  int networks = 0;
  int vm_types = 0;
  std::string line;
  std::getline(nodes_in, line);
  while (std::getline(nodes_in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 6) throw ConfigError("nodes.csv: expected 6 columns in '" + line + "'");
    Node n;
    n.id = parse_number<NodeId>(cells[0], "node id");
    n.layer = parse_layer(cells[1]);
    n.network = parse_number<int>(cells[2], "network");
    n.position = {parse_number<double>(cells[3], "x"), parse_number<double>(cells[4], "y")};
    const int vm = cells[5].empty() ? -1 : parse_number<int>(cells[5], "vm_request");
    networks = std::max(networks, n.network + 1);
    vm_types = std::max(vm_types, vm + 1);
    nodes.push_back(n);
    request.push_back(vm);
  }
  std::vector<Link> links;
  std::getline(edges_in, line);
  while (std::getline(edges_in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw ConfigError("edges.csv: expected 4 columns in '" + line + "'");
    links.push_back(Link{parse_number<NodeId>(cells[0], "src"), parse_number<NodeId>(cells[1], "dst"),
                         parse_medium(cells[2]), parse_number<double>(cells[3], "distance")});
  }
  if (vm_types_hint > 0 && vm_types_hint < vm_types)
    throw ConfigError("nodes.csv requests VM type " + std::to_string(vm_types - 1) + " but only " +
                      std::to_string(vm_types_hint) + " types were declared");
  NetworkInstance inst(std::move(nodes), std::move(links), std::move(request), networks,
                       std::max({vm_types, vm_types_hint, 1}));
  check_instance(inst);
  return inst;
}

}  // namespace ponvirt
