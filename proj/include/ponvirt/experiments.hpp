#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ponvirt/eepiv.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/lp_writer.hpp"
#include "ponvirt/power_model.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

enum class Engine { Exact, Eepiv, LpExport };
// Full is the default-size instance, named "paper" on the command line.
enum class Scale { Full, Reduced };

std::string_view to_string(Engine engine);
std::string_view to_string(Scale scale);
Engine parse_engine(std::string_view text);
Scale parse_scale(std::string_view text);

inline const std::vector<double> kDefaultReductions = {0.1, 0.3, 0.5, 0.7, 0.9};

struct SweepSpec {
  std::vector<int> scenarios = {1, 2, 3};
  std::vector<double> reductions = kDefaultReductions;
  std::vector<Engine> engines = {Engine::Eepiv};
  std::vector<std::uint64_t> seeds = {7};
  Scale scale = Scale::Full;
  int reduced_relays = 4;
  int reduced_objects = 50;
  // Base topology; seed and, for the reduced scale, relay and object counts
  // are overridden per cell.
  TopologyConfig topology;
  // Applied on top of each cell's scenario parameters.
  bool capacity_enforced = true;
  double demand_bps = 5000.0;
  SearchLimits limits;
  EepivOptions eepiv;
  // Where lp-export cells write their models.
  std::filesystem::path output_dir;
  ModelFormat model_format = ModelFormat::Lp;
  int jobs = 1;

  // Throws ConfigError for empty selections or out-of-range values.
  void check() const;
  TopologyConfig topology_for(std::uint64_t seed) const;
};

// Number of VM instances of one type hosted at one layer of one network.
struct PlacementCount {
  Layer layer = Layer::Relay;
  int network = kNoNetwork;
  int vm_type = 0;
  int hosted = 0;
};

struct CellResult {
  int scenario = 1;
  double reduction = 0.0;
  Engine engine = Engine::Eepiv;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string message;
  PowerReport report;
  std::vector<PlacementCount> placements;
  int served = 0;
  int vm_count = 0;
  int cloudlet_count = 0;
  double wall_ms = 0.0;
};

struct SweepResult {
  // Ordered by (engine, scenario, reduction, seed) in the order given by the SweepSpec.
  std::vector<CellResult> cells;

  const CellResult* find(Engine engine, int scenario, double reduction, std::uint64_t seed) const;
};

std::vector<PlacementCount> summarize_placement(const PlacementSolution& solution, const NetworkInstance& instance);

// Runs every cell, `spec.jobs` at a time. Cell failures (budget, capacity)
// are recorded in the cell, not thrown; the result does not depend on jobs.
SweepResult run_sweep(const SweepSpec& spec);

struct SavingsRow {
  Engine engine = Engine::Eepiv;
  // "summed": totals summed over reductions; "per_r_mean": per-reduction
  // savings averaged over reductions.
  std::string aggregation;
  int versus_scenario = 2;
  double saving_mean = 0.0;
  double saving_min = 0.0;
  double saving_max = 0.0;
  int seeds = 0;
  double reference = 0.0;
};

// Relative saving of scenario 1 against scenarios 2 and 3: (S_k - S_1) / S_k,
// per seed, then mean/min/max over seeds. Throws ModelError naming missing
// or failed cells, and when fewer than two scenarios are present.
std::vector<SavingsRow> savings_summary(const SweepResult& result);

double relative_saving(double baseline_total, double other_total);

// Target saving (percent) of scenario 1 against `versus_scenario`, reported
// beside the measured one.
double reference_saving(Engine engine, int versus_scenario);

void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_placements_csv(const SweepResult& result, std::ostream& out);
void write_savings_csv(const std::vector<SavingsRow>& rows, std::ostream& out);
void write_cells_csv(const SweepResult& result, std::ostream& out);
// sweep.csv, placements.csv, cells.csv and, when computable, savings.csv.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

// Trend predicates over successful cells of one engine. Each returns false
// when the needed cells are missing.
bool traffic_strictly_decreasing(const SweepResult& result, Engine engine, int scenario, std::uint64_t seed);
bool total_nonincreasing(const SweepResult& result, Engine engine, int scenario, std::uint64_t seed,
                         double rel_tol = 1e-9);
// Every VM of every cell with reduction >= min_reduction sits at a relay.
bool all_vms_at_relays(const SweepResult& result, Engine engine, double min_reduction);
// Processing power S1 <= S2 <= S3 at one reduction and seed.
bool processing_ordered(const SweepResult& result, Engine engine, double reduction, std::uint64_t seed);
int vms_at_layer(const CellResult& cell, Layer layer);

}  // namespace ponvirt
