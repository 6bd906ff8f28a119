#pragma once

#include <filesystem>
#include <iosfwd>

#include "ponvirt/solution.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

struct ImportedSolution {
  PlacementSolution solution;
  FlowAssignment flows;
};

// Writes `name value` lines using the emitted model's variable names; zero
// values are omitted.
void write_solution_text(const PlacementSolution& solution, const FlowAssignment& flows,
                         const NetworkInstance& instance, std::ostream& out);
void write_solution_text(const PlacementSolution& solution, const FlowAssignment& flows,
                         const NetworkInstance& instance, const std::filesystem::path& path);

// Reads `name value` lines (as written above or by an external solver).
// Placement, cloudlet and workload values are taken as given, aggregates
// from U/P, commodities from xu/xp. Unknown names are ignored; names that
// refer to nodes or links absent from the instance throw ValidationError.
ImportedSolution read_solution_text(std::istream& in, const NetworkInstance& instance);
ImportedSolution read_solution_text(const std::filesystem::path& path, const NetworkInstance& instance);

}  // namespace ponvirt
