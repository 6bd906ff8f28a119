#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "ponvirt/power_model.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

// `key = value` lines; `#` starts a comment. Keys are checked against the
// known topology, parameter and run settings.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& source = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

// Topology keys: networks, objects_per_network, relays_per_network,
// area_side_m, relay_spacing_m, gateway_coordinator_distance_m, seed,
// vm_types, request_assignment, relay_layout, coordinator_x, coordinator_y.
void apply_topology(const ConfigFile& config, TopologyConfig& topology);

// Parameter keys: demand_bps, capacity_enforced, scaling_a, epsilon, e_ot,
// e_rt, e_rr, e_ct, e_cr, e_gr, e_gt, e_u, e_l, beta, gamma, olt_cpu_power_w.
// Scenario and reduction are applied by the caller before these overrides.
void apply_params(const ConfigFile& config, ModelParams& params);

}  // namespace ponvirt
