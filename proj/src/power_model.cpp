#include "ponvirt/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "ponvirt/errors.hpp"

namespace ponvirt {

double EnergyParams::tx(Layer layer) const {
  switch (layer) {
    case Layer::Object: return e_ot;
    case Layer::Relay: return e_rt;
    case Layer::Coordinator: return e_ct;
    case Layer::Gateway: return e_gt;
    case Layer::Onu: return e_u;
    case Layer::Olt: return 0.0;
  }
  return 0.0;
}

double EnergyParams::rx(Layer layer) const {
  switch (layer) {
    case Layer::Object: return 0.0;
    case Layer::Relay: return e_rr;
    case Layer::Coordinator: return e_cr;
    case Layer::Gateway: return e_gr;
    case Layer::Onu: return e_u;
    case Layer::Olt: return e_l;
  }
  return 0.0;
}

double EnergyParams::scale(Layer layer) const {
  return (layer == Layer::Object || layer == Layer::Gateway) ? 1.0 : scaling_a;
}

WorkloadTable default_workloads() {
  //        object relay  coord  gw     onu    olt
  return {
      {0.0, 0.1, 0.05, 0.025, 0.025, 0.01},
      {0.0, 0.2, 0.1, 0.05, 0.05, 0.02},
      {0.0, 0.3, 0.15, 0.075, 0.075, 0.03},
      {0.0, 0.4, 0.2, 0.1, 0.1, 0.04},
  };
}

double ModelParams::workload(int vm_type, Layer layer) const {
  if (vm_type < 0 || static_cast<std::size_t>(vm_type) >= workloads.size())
    throw ModelError("VM type " + std::to_string(vm_type) + " has no workload row");
  return workloads[static_cast<std::size_t>(vm_type)][index(layer)];
}

ModelParams ModelParams::for_scenario(int scenario, double reduction) {
  ModelParams p;
  p.scenario = scenario;
  p.reduction = reduction;
  switch (scenario) {
    case 1:
      break;
    case 2:
    case 3: {
      const LayerValues heaviest = p.workloads.back();
      for (auto& row : p.workloads) row = heaviest;
      if (scenario == 3) p.processing.cpu_power_w[index(Layer::Olt)] = 9.28;
      break;
    }
    default:
      throw ConfigError("scenario must be 1, 2 or 3, got " + std::to_string(scenario));
  }
  return p;
}

void ModelParams::check(int vm_types) const {
  if (!(reduction >= 0.0 && reduction < 1.0))
    throw ConfigError("reduction must lie in [0, 1), got " + std::to_string(reduction));
  if (!(demand_bps >= 0.0)) throw ConfigError("demand_bps must be nonnegative");
  if (static_cast<int>(workloads.size()) < vm_types)
    throw ConfigError("workload table has " + std::to_string(workloads.size()) + " rows but " +
                      std::to_string(vm_types) + " VM types are requested");
  const EnergyParams& e = energy;
  for (double v : {e.e_ot, e.e_rt, e.e_rr, e.e_ct, e.e_cr, e.e_gr, e.e_gt, e.e_u, e.e_l, e.epsilon,
                   e.scaling_a})
    if (!(v >= 0.0)) throw ConfigError("energy parameters must be nonnegative");
  for (Layer l : kAllLayers) {
    if (!(processing.cpu_power_w[index(l)] >= 0.0) || processing.cpus[index(l)] < 0)
      throw ConfigError("processing parameters must be nonnegative");
  }
  for (const auto& row : workloads)
    for (double w : row)
      if (!(w >= 0.0)) throw ConfigError("workloads must be nonnegative");
}

double PowerReport::processing_total() const {
  double s = 0.0;
  for (double v : processing_w) s += v;
  return s;
}

double PowerReport::traffic_raw_total() const {
  double s = 0.0;
  for (double v : traffic_raw_w) s += v;
  return s;
}

double PowerReport::traffic_scaled_total() const {
  double s = 0.0;
  for (double v : traffic_scaled_w) s += v;
  return s;
}

PlacementSolution PlacementSolution::empty(const NetworkInstance& instance) {
  PlacementSolution s;
  s.placed.assign(static_cast<std::size_t>(instance.vm_types()),
                  std::vector<char>(instance.num_nodes(), 0));
  s.cloudlet_open.assign(instance.num_nodes(), 0);
  s.workload.assign(instance.num_nodes(), 0.0);
  return s;
}

int PlacementSolution::vm_count() const {
  int n = 0;
  for (const auto& row : placed)
    for (char c : row) n += c != 0;
  return n;
}

int PlacementSolution::cloudlet_count() const {
  int n = 0;
  for (char c : cloudlet_open) n += c != 0;
  return n;
}

FlowAssignment FlowAssignment::zero(const NetworkInstance& instance) {
  FlowAssignment f;
  f.unprocessed.assign(instance.num_links(), 0.0);
  f.processed.assign(instance.num_links(), 0.0);
  return f;
}

void FlowAssignment::aggregate() {
  std::fill(unprocessed.begin(), unprocessed.end(), 0.0);
  std::fill(processed.begin(), processed.end(), 0.0);
  for (const auto& c : unprocessed_commodities)
    for (const PathFlow& p : c.links) unprocessed.at(static_cast<std::size_t>(p.link)) += p.rate_bps;
  for (const auto& c : processed_commodities)
    for (const PathFlow& p : c.links) processed.at(static_cast<std::size_t>(p.link)) += p.rate_bps;
}

namespace {

bool has_energy_role(Layer src, Layer dst) {
  switch (src) {
    case Layer::Object: return dst == Layer::Relay;
    case Layer::Relay: return dst == Layer::Relay || dst == Layer::Coordinator;
    case Layer::Coordinator: return dst == Layer::Gateway;
    case Layer::Gateway: return dst == Layer::Onu;
    case Layer::Onu: return dst == Layer::Olt;
    case Layer::Olt: return false;
  }
  return false;
}

// Transmit-side energy of a link without the objective weight.
double send_energy(const Link& link, Layer src, const EnergyParams& e) {
  double energy = e.tx(src);
  if (link.medium == Medium::Wireless) energy += e.epsilon * link.distance_m * link.distance_m;
  return energy;
}

}  // namespace

double link_cost_per_bit(const Link& link, const NetworkInstance& instance,
                         const ModelParams& params) {
  const Layer src = instance.layer(link.src);
  const Layer dst = instance.layer(link.dst);
  if (!has_energy_role(src, dst))
    throw ModelError("link " + std::to_string(link.src) + "->" + std::to_string(link.dst) + " (" +
                     std::string(to_string(src)) + "->" + std::string(to_string(dst)) +
                     ") has no energy role");
  const EnergyParams& e = params.energy;
  return e.scale(src) * send_energy(link, src, e) + e.scale(dst) * e.rx(dst);
}

LayerValues traffic_power(const FlowAssignment& flows, const NetworkInstance& instance,
                          const ModelParams& params) {
  if (flows.unprocessed.size() != instance.num_links() || flows.processed.size() != instance.num_links())
    throw ValidationError("flow vectors cover " + std::to_string(flows.unprocessed.size()) +
                          " links, instance has " + std::to_string(instance.num_links()));
  LayerValues power{};
  const EnergyParams& e = params.energy;
  for (std::size_t l = 0; l < instance.num_links(); ++l) {
    const double rate = flows.unprocessed[l] + flows.processed[l];
    if (rate == 0.0) continue;
    const Link& link = instance.link(static_cast<LinkId>(l));
    const Layer src = instance.layer(link.src);
    const Layer dst = instance.layer(link.dst);
    if (!has_energy_role(src, dst))
      throw ModelError("flow on link without energy role: " + std::to_string(link.src) + "->" +
                       std::to_string(link.dst));
    power[index(src)] += rate * send_energy(link, src, e);
    power[index(dst)] += rate * e.rx(dst);
  }
  return power;
}

void update_workloads(PlacementSolution& solution, const NetworkInstance& instance,
                      const ModelParams& params) {
  solution.cloudlet_open.assign(instance.num_nodes(), 0);
  solution.workload.assign(instance.num_nodes(), 0.0);
  for (int v = 0; v < solution.vm_types(); ++v) {
    for (NodeId c : instance.candidates()) {
      if (!solution.is_placed(v, c)) continue;
      solution.cloudlet_open[static_cast<std::size_t>(c)] = 1;
      solution.workload[static_cast<std::size_t>(c)] += params.workload(v, instance.layer(c));
    }
  }
}

LayerValues processing_power(const PlacementSolution& solution, const NetworkInstance& instance,
                             const ModelParams& params) {
  LayerValues power{};
  for (NodeId c : instance.candidates()) {
    const double tw = solution.workload.at(static_cast<std::size_t>(c));
    if (tw == 0.0) continue;
    if (params.capacity_enforced && tw > 1.0 + 1e-9)
      throw CapacityError("cloudlet " + std::to_string(c) + " workload " + std::to_string(tw) +
                          " exceeds capacity");
    const Layer layer = instance.layer(c);
    power[index(layer)] += tw * params.processing.max_power(layer);
  }
  return power;
}

PowerReport combine_report(const LayerValues& processing, const LayerValues& traffic_raw,
                           const ModelParams& params) {
  PowerReport r;
  r.processing_w = processing;
  r.traffic_raw_w = traffic_raw;
  for (Layer l : kAllLayers)
    r.traffic_scaled_w[index(l)] = params.energy.scale(l) * traffic_raw[index(l)];
  r.total_w = r.processing_total() + r.traffic_scaled_total();
  return r;
}

PowerReport total_objective(const PlacementSolution& solution, const FlowAssignment& flows,
                            const NetworkInstance& instance, const ModelParams& params) {
  return combine_report(processing_power(solution, instance, params),
                        traffic_power(flows, instance, params), params);
}

void write_report_csv_header(std::ostream& out) {
  out << "scenario,reduction_pct,layer,processing_w,traffic_w_raw,traffic_w_scaled,total_w\n";
}

void write_report_csv_rows(std::ostream& out, const PowerReport& report, const ModelParams& params) {
  const auto old = out.precision(17);
  const double pct = std::round(params.reduction * 1e8) / 1e6;
  for (Layer l : kAllLayers) {
    out << params.scenario << ',' << std::setprecision(6) << pct << std::setprecision(17) << ',' << to_string(l) << ',' << report.processing_w[index(l)]
        << ',' << report.traffic_raw_w[index(l)] << ',' << report.traffic_scaled_w[index(l)] << ','
        << report.total_w << '\n';
  }
  out.precision(old);
}

}  // namespace ponvirt
