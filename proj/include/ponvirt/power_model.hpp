#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

using LayerValues = std::array<double, kLayerCount>;

// Energy per bit (J/bit) of each element's transmitter and receiver, the
// amplifier coefficient (J/(bit*m^2)) and the networking scaling factor.
struct EnergyParams {
  double e_ot = 50e-9;
  double e_rt = 50e-9;
  double e_rr = 50e-9;
  double e_ct = 50e-9;
  double e_cr = 50e-9;
  double e_gr = 60e-6;
  double e_gt = 15e-9;
  double e_u = 7.5e-9;
  double e_l = 225.6e-12;
  double epsilon = 255e-12;
  double scaling_a = 5.0;

  // Transmit/receive energy of a node at `layer`. Objects never receive and
  // the OLT never transmits on the uplink; both return 0 there.
  double tx(Layer layer) const;
  double rx(Layer layer) const;
  // Objects and gateways are unscaled in the objective.
  double scale(Layer layer) const;
};

struct ProcessingParams {
  LayerValues cpu_power_w{0.0, 4.64, 4.64, 4.64, 4.64, 4.64};
  std::array<int, kLayerCount> cpus{0, 1, 2, 4, 4, 10};

  // Maximum processing power of one element of `layer`.
  double max_power(Layer layer) const { return cpu_power_w[index(layer)] * cpus[index(layer)]; }
};

// Normalized workload of one VM instance, indexed [vm_type][layer]; the
// Object column is unused.
using WorkloadTable = std::vector<LayerValues>;

WorkloadTable default_workloads();

struct ModelParams {
  EnergyParams energy;
  ProcessingParams processing;
  WorkloadTable workloads = default_workloads();
  double demand_bps = 5000.0;
  double reduction = 0.9;
  bool capacity_enforced = true;
  int scenario = 1;
  // Big-M constants; only used by the emitted MILP.
  double beta = 1e7;
  double gamma = 50.0;

  // Fraction of unprocessed volume a VM forwards as processed traffic.
  double remaining_fraction() const { return 1.0 - reduction; }

  double workload(int vm_type, Layer layer) const;
  // Processing power of one type-`vm_type` instance hosted at `layer`.
  double vm_power(int vm_type, Layer layer) const {
    return workload(vm_type, layer) * processing.max_power(layer);
  }

  // Scenario 1: heterogeneous workloads. Scenario 2: every type uses the
  // heaviest workload row. Scenario 3: as 2, with a twice as power hungry
  // OLT CPU.
  static ModelParams for_scenario(int scenario, double reduction);

  // Throws ConfigError for out-of-range values.
  void check(int vm_types) const;
};

struct PowerReport {
  LayerValues processing_w{};
  LayerValues traffic_raw_w{};
  LayerValues traffic_scaled_w{};
  double total_w = 0.0;

  double processing_total() const;
  double traffic_raw_total() const;
  double traffic_scaled_total() const;
};

// Energy (J/bit) to carry one bit over `link`, with each endpoint's energy
// multiplied by its objective weight.
double link_cost_per_bit(const Link& link, const NetworkInstance& instance, const ModelParams& params);

// Unscaled traffic-induced power of each layer from the aggregate link
// rates. Throws ValidationError when the rate vectors do not match the links.
LayerValues traffic_power(const FlowAssignment& flows, const NetworkInstance& instance,
                          const ModelParams& params);

// TW_c * MP_layer(c) summed per layer. Throws CapacityError when a workload
// exceeds 1 and capacity is enforced.
LayerValues processing_power(const PlacementSolution& solution, const NetworkInstance& instance,
                             const ModelParams& params);

// Recomputes H_c and TW_c from the placement indicators.
void update_workloads(PlacementSolution& solution, const NetworkInstance& instance,
                      const ModelParams& params);

// Weighted total: processing + object and gateway traffic + A times the
// relay, coordinator, ONU and OLT traffic.
PowerReport combine_report(const LayerValues& processing, const LayerValues& traffic_raw,
                           const ModelParams& params);

PowerReport total_objective(const PlacementSolution& solution, const FlowAssignment& flows,
                            const NetworkInstance& instance, const ModelParams& params);

// Header: scenario,reduction_pct,layer,processing_w,traffic_w_raw,traffic_w_scaled,total_w
void write_report_csv_header(std::ostream& out);
void write_report_csv_rows(std::ostream& out, const PowerReport& report, const ModelParams& params);

}  // namespace ponvirt
