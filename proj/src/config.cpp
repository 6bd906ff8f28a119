#include "ponvirt/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "ponvirt/errors.hpp"

namespace ponvirt {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // topology
      "networks", "objects_per_network", "relays_per_network", "area_side_m", "relay_spacing_m",
      "gateway_coordinator_distance_m", "seed", "vm_types", "request_assignment", "relay_layout", "coordinator_x",
      "coordinator_y",
      // parameters
      "demand_bps", "capacity_enforced", "scaling_a", "epsilon", "e_ot", "e_rt", "e_rr", "e_ct", "e_cr", "e_gr", "e_gt",
      "e_u", "e_l", "beta", "gamma", "olt_cpu_power_w",
      // runs
      "scenario", "reduction", "scale", "reduced_relays", "reduced_objects", "output_dir", "jobs", "literal_tpc",
      "max_nodes", "scenarios", "reductions", "engines", "seeds", "format"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source) {
  ConfigFile cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  double x = 0.0;
  auto res = std::from_chars(v->data(), v->data() + v->size(), x);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size())
    throw ConfigError("config key '" + key + "' expects a number, got '" + *v + "'");
  return x;
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long x = 0;
  auto res = std::from_chars(v->data(), v->data() + v->size(), x);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size())
    throw ConfigError("config key '" + key + "' expects an integer, got '" + *v + "'");
  return x;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "on" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "off" || *v == "0" || *v == "no") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" + *v + "'");
}

void apply_topology(const ConfigFile& c, TopologyConfig& t) {
  t.networks = static_cast<int>(c.get_int("networks", t.networks));
  t.objects_per_network = static_cast<int>(c.get_int("objects_per_network", t.objects_per_network));
  t.relays_per_network = static_cast<int>(c.get_int("relays_per_network", t.relays_per_network));
  t.area_side_m = c.get_double("area_side_m", t.area_side_m);
  t.relay_spacing_m = c.get_double("relay_spacing_m", t.relay_spacing_m);
  t.gateway_coordinator_distance_m = c.get_double("gateway_coordinator_distance_m", t.gateway_coordinator_distance_m);
  const long long seed = c.get_int("seed", static_cast<long long>(t.rng_seed));
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  t.rng_seed = static_cast<std::uint64_t>(seed);
  t.vm_types = static_cast<int>(c.get_int("vm_types", t.vm_types));
  if (auto v = c.get("request_assignment")) t.request_assignment = parse_request_assignment(*v);
  if (auto v = c.get("relay_layout")) t.relay_layout = parse_relay_layout(*v);
  const bool has_x = c.get("coordinator_x").has_value();
  const bool has_y = c.get("coordinator_y").has_value();
  if (has_x != has_y) throw ConfigError("coordinator_x and coordinator_y must be given together");
  if (has_x) t.coordinator_position = Point{c.get_double("coordinator_x", 0.0), c.get_double("coordinator_y", 0.0)};
}

void apply_params(const ConfigFile& c, ModelParams& p) {
  p.demand_bps = c.get_double("demand_bps", p.demand_bps);
  p.capacity_enforced = c.get_bool("capacity_enforced", p.capacity_enforced);
  EnergyParams& e = p.energy;
  e.scaling_a = c.get_double("scaling_a", e.scaling_a);
  e.epsilon = c.get_double("epsilon", e.epsilon);
  e.e_ot = c.get_double("e_ot", e.e_ot);
  e.e_rt = c.get_double("e_rt", e.e_rt);
  e.e_rr = c.get_double("e_rr", e.e_rr);
  e.e_ct = c.get_double("e_ct", e.e_ct);
  e.e_cr = c.get_double("e_cr", e.e_cr);
  e.e_gr = c.get_double("e_gr", e.e_gr);
  e.e_gt = c.get_double("e_gt", e.e_gt);
  e.e_u = c.get_double("e_u", e.e_u);
  e.e_l = c.get_double("e_l", e.e_l);
  p.beta = c.get_double("beta", p.beta);
  p.gamma = c.get_double("gamma", p.gamma);
  p.processing.cpu_power_w[index(Layer::Olt)] =
      c.get_double("olt_cpu_power_w", p.processing.cpu_power_w[index(Layer::Olt)]);
}

}  // namespace ponvirt
