#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ponvirt/power_model.hpp"
#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

inline constexpr double kFlowTolerance = 1e-6;

// One violated row, named like the emitted model's rows (family plus the
// index suffix, e.g. ucons / "3_12_7").
struct Violation {
  std::string family;
  std::string row_id;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Objective recomputed from the workloads and aggregate link rates.
  PowerReport objective;

  bool ok() const { return violations.empty(); }
  std::map<std::string, int> counts() const;
};

// Checks demand, conservation, aggregation, reduction, placement, cloudlet,
// workload and capacity rows plus nonnegativity and network isolation.
// Violations are reported, never thrown.
ValidationReport validate_solution(const PlacementSolution& solution, const FlowAssignment& flows,
                                   const NetworkInstance& instance, const ModelParams& params);

// constraint_family,row_id,residual
void write_validation_csv(const ValidationReport& report, std::ostream& out);

}  // namespace ponvirt
