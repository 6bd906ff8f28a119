#include "ponvirt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "ponvirt/errors.hpp"
#include "ponvirt/milp_model.hpp"

namespace ponvirt {

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::Exact: return "exact";
    case Engine::Eepiv: return "eepiv";
    case Engine::LpExport: return "lp-export";
  }
  return "?";
}

std::string_view to_string(Scale scale) { return scale == Scale::Full ? "paper" : "reduced"; }

Engine parse_engine(std::string_view text) {
  if (text == "exact") return Engine::Exact;
  if (text == "eepiv" || text == "heuristic") return Engine::Eepiv;
  if (text == "lp-export" || text == "lp") return Engine::LpExport;
  throw ConfigError("unknown engine '" + std::string(text) + "' (expected exact, eepiv or lp-export)");
}

Scale parse_scale(std::string_view text) {
  if (text == "paper") return Scale::Full;
  if (text == "reduced") return Scale::Reduced;
  throw ConfigError("unknown scale '" + std::string(text) + "' (expected paper or reduced)");
}

namespace {

double reduction_pct(double r) { return std::round(r * 1e8) / 1e6; }

bool same_reduction(double a, double b) { return std::abs(a - b) <= 1e-12; }

std::string pct_text(double r) {
  std::ostringstream s;
  s << reduction_pct(r);
  return s.str();
}

}  // namespace

void SweepSpec::check() const {
  if (scenarios.empty()) throw ConfigError("sweep needs at least one scenario");
  if (reductions.empty()) throw ConfigError("sweep needs at least one reduction value");
  if (engines.empty()) throw ConfigError("sweep needs at least one engine");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (int s : scenarios)
    if (s < 1 || s > 3) throw ConfigError("scenario must be 1, 2 or 3, got " + std::to_string(s));
  for (double r : reductions)
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("reduction must lie in [0, 1)");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (scale == Scale::Reduced && (reduced_relays < 1 || reduced_objects < 0))
    throw ConfigError("reduced scale needs at least one relay");
}

TopologyConfig SweepSpec::topology_for(std::uint64_t seed) const {
  TopologyConfig t = topology;
  if (scale == Scale::Reduced) {
    const TopologyConfig reduced = TopologyConfig::reduced(reduced_relays, reduced_objects);
    t.relays_per_network = reduced.relays_per_network;
    t.objects_per_network = reduced.objects_per_network;
    t.relay_spacing_m = reduced.relay_spacing_m;
    t.relay_layout = reduced.relay_layout;
  }
  t.rng_seed = seed;
  return t;
}

const CellResult* SweepResult::find(Engine engine, int scenario, double reduction, std::uint64_t seed) const {
  for (const CellResult& c : cells)
    if (c.engine == engine && c.scenario == scenario && same_reduction(c.reduction, reduction) && c.seed == seed)
      return &c;
  return nullptr;
}

std::vector<PlacementCount> summarize_placement(const PlacementSolution& solution, const NetworkInstance& inst) {
  std::map<std::tuple<int, int, int>, int> counts;  // (network, layer, type)
  for (int v = 0; v < solution.vm_types(); ++v)
    for (NodeId c : inst.candidates())
      if (solution.is_placed(v, c)) ++counts[{inst.node(c).network, static_cast<int>(inst.layer(c)), v}];
  std::vector<PlacementCount> out;
  for (const auto& [key, hosted] : counts) {
    const auto [net, layer, v] = key;
    out.push_back(PlacementCount{static_cast<Layer>(layer), net, v, hosted});
  }
  return out;
}

namespace {

void run_cell(const SweepSpec& spec, const NetworkInstance& inst, CellResult& cell) {
  const auto start = std::chrono::steady_clock::now();
  try {
    ModelParams params = ModelParams::for_scenario(cell.scenario, cell.reduction);
    params.capacity_enforced = spec.capacity_enforced;
    params.demand_bps = spec.demand_bps;
    switch (cell.engine) {
      case Engine::Exact: {
        try {
          ExactResult r = solve_exact(inst, params, spec.limits);
          cell.report = r.report;
          cell.placements = summarize_placement(r.solution, inst);
          cell.served = static_cast<int>(r.solution.assignment.size());
          cell.vm_count = r.solution.vm_count();
          cell.cloudlet_count = r.solution.cloudlet_count();
        } catch (const ResourceError& e) {
          throw ResourceError(std::string(e.what()) + "; the exact engine is intended for --scale reduced");
        }
        break;
      }
      case Engine::Eepiv: {
        EepivResult r = run_eepiv(inst, params, spec.eepiv);
        cell.report = r.report;
        cell.placements = summarize_placement(r.solution, inst);
        cell.served = r.served_count;
        cell.vm_count = r.solution.vm_count();
        cell.cloudlet_count = r.solution.cloudlet_count();
        break;
      }
      case Engine::LpExport: {
        if (spec.output_dir.empty()) throw ConfigError("lp-export needs an output directory");
        std::filesystem::create_directories(spec.output_dir);
        const auto path = spec.output_dir / ("model_s" + std::to_string(cell.scenario) + "_r" + pct_text(cell.reduction) +
                                             "_seed" + std::to_string(cell.seed) +
                                             (spec.model_format == ModelFormat::Lp ? ".lp" : ".mps"));
        emit_model(build_model(inst, params), path, spec.model_format);
        cell.message = path.string();
        break;
      }
    }
    cell.ok = true;
  } catch (const Error& e) {
    cell.ok = false;
    cell.message = std::string(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.message = std::string("internal: ") + e.what();
  }
  cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.check();
  std::vector<std::shared_ptr<const NetworkInstance>> instances;
  for (std::uint64_t seed : spec.seeds)
    instances.push_back(std::make_shared<const NetworkInstance>(build_instance(spec.topology_for(seed))));

  SweepResult result;
  std::vector<std::size_t> instance_of;
  for (Engine e : spec.engines)
    for (int s : spec.scenarios)
      for (double r : spec.reductions)
        for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
          CellResult cell;
          cell.engine = e;
          cell.scenario = s;
          cell.reduction = r;
          cell.seed = spec.seeds[k];
          result.cells.push_back(std::move(cell));
          instance_of.push_back(k);
        }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++)
      run_cell(spec, *instances[instance_of[i]], result.cells[i]);
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(result.cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

double relative_saving(double baseline_total, double other_total) {
  if (other_total == 0.0) throw ModelError("cannot compute a saving against a zero total");
  return (other_total - baseline_total) / other_total;
}

double reference_saving(Engine engine, int versus_scenario) {
  if (engine == Engine::Exact) return versus_scenario == 3 ? 19.0 : 17.0;
  return 17.0;
}

std::vector<SavingsRow> savings_summary(const SweepResult& result) {
  std::vector<Engine> engines;
  std::vector<int> scenarios;
  std::vector<double> reductions;
  std::vector<std::uint64_t> seeds;
  for (const CellResult& c : result.cells) {
    if (c.engine == Engine::LpExport) continue;
    if (std::find(engines.begin(), engines.end(), c.engine) == engines.end()) engines.push_back(c.engine);
    if (std::find(scenarios.begin(), scenarios.end(), c.scenario) == scenarios.end()) scenarios.push_back(c.scenario);
    if (std::none_of(reductions.begin(), reductions.end(), [&](double r) { return same_reduction(r, c.reduction); }))
      reductions.push_back(c.reduction);
    if (std::find(seeds.begin(), seeds.end(), c.seed) == seeds.end()) seeds.push_back(c.seed);
  }
  if (engines.empty()) throw ModelError("savings need exact or eepiv cells");
  std::sort(scenarios.begin(), scenarios.end());
  if (scenarios.size() < 2 || scenarios.front() != 1)
    throw ModelError("savings need scenario 1 and at least one of scenarios 2 and 3");

  std::vector<std::string> missing;
  for (Engine e : engines)
    for (int s : scenarios)
      for (double r : reductions)
        for (std::uint64_t seed : seeds) {
          const CellResult* c = result.find(e, s, r, seed);
          if (!c || !c->ok)
            missing.push_back(std::string(to_string(e)) + "/s" + std::to_string(s) + "/r" + pct_text(r) + "/seed" +
                              std::to_string(seed) + (c ? " (failed)" : ""));
        }
  if (!missing.empty()) {
    std::string msg = "savings need every cell; missing:";
    for (const auto& m : missing) msg += " " + m;
    throw ModelError(msg);
  }

  std::vector<SavingsRow> rows;
  for (Engine e : engines) {
    for (int k : scenarios) {
      if (k == 1) continue;
      for (const char* aggregation : {"summed", "per_r_mean"}) {
        std::vector<double> per_seed;
        for (std::uint64_t seed : seeds) {
          if (std::string(aggregation) == "summed") {
            double s1 = 0.0, sk = 0.0;
            for (double r : reductions) {
              s1 += result.find(e, 1, r, seed)->report.total_w;
              sk += result.find(e, k, r, seed)->report.total_w;
            }
            per_seed.push_back(relative_saving(s1, sk));
          } else {
            double acc = 0.0;
            for (double r : reductions)
              acc += relative_saving(result.find(e, 1, r, seed)->report.total_w, result.find(e, k, r, seed)->report.total_w);
            per_seed.push_back(acc / static_cast<double>(reductions.size()));
          }
        }
        SavingsRow row;
        row.engine = e;
        row.aggregation = aggregation;
        row.versus_scenario = k;
        row.seeds = static_cast<int>(per_seed.size());
        double sum = 0.0;
        for (double x : per_seed) sum += x;
        row.saving_mean = sum / static_cast<double>(per_seed.size());
        row.saving_min = *std::min_element(per_seed.begin(), per_seed.end());
        row.saving_max = *std::max_element(per_seed.begin(), per_seed.end());
        row.reference = reference_saving(e, k) / 100.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  const auto old = out.precision(17);
  out << "scenario,reduction_pct,engine,seed,layer,processing_w,traffic_w_raw,traffic_w_scaled,total_w\n";
  for (const CellResult& c : result.cells) {
    if (!c.ok || c.engine == Engine::LpExport) continue;
    for (Layer l : kAllLayers)
      out << c.scenario << ',' << pct_text(c.reduction) << ',' << to_string(c.engine) << ',' << c.seed << ','
          << to_string(l) << ',' << c.report.processing_w[index(l)] << ',' << c.report.traffic_raw_w[index(l)] << ','
          << c.report.traffic_scaled_w[index(l)] << ',' << c.report.total_w << '\n';
  }
  out.precision(old);
}

void write_placements_csv(const SweepResult& result, std::ostream& out) {
  out << "scenario,reduction_pct,engine,seed,layer,network,vm_type,hosted\n";
  for (const CellResult& c : result.cells) {
    if (!c.ok) continue;
    for (const PlacementCount& p : c.placements)
      out << c.scenario << ',' << pct_text(c.reduction) << ',' << to_string(c.engine) << ',' << c.seed << ','
          << to_string(p.layer) << ',' << p.network << ',' << p.vm_type << ',' << p.hosted << '\n';
  }
}

void write_savings_csv(const std::vector<SavingsRow>& rows, std::ostream& out) {
  const auto old = out.precision(17);
  out << "engine,aggregation,versus_scenario,saving_mean,saving_min,saving_max,seeds,reference\n";
  for (const SavingsRow& r : rows)
    out << to_string(r.engine) << ',' << r.aggregation << ',' << r.versus_scenario << ',' << r.saving_mean << ','
        << r.saving_min << ',' << r.saving_max << ',' << r.seeds << ',' << r.reference << '\n';
  out.precision(old);
}

void write_cells_csv(const SweepResult& result, std::ostream& out) {
  const auto old = out.precision(17);
  out << "scenario,reduction_pct,engine,seed,status,total_w,served,vm_count,cloudlet_count,wall_ms,message\n";
  for (const CellResult& c : result.cells) {
    std::string msg = c.message;
    std::replace(msg.begin(), msg.end(), '"', '\'');
    out << c.scenario << ',' << pct_text(c.reduction) << ',' << to_string(c.engine) << ',' << c.seed << ','
        << (c.ok ? "ok" : "failed") << ',' << c.report.total_w << ',' << c.served << ',' << c.vm_count << ','
        << c.cloudlet_count << ',' << c.wall_ms << ",\"" << msg << "\"\n";
  }
  out.precision(old);
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("sweep.csv");
    write_sweep_csv(result, f);
  }
  {
    auto f = open("placements.csv");
    write_placements_csv(result, f);
  }
  {
    auto f = open("cells.csv");
    write_cells_csv(result, f);
  }
  std::vector<SavingsRow> rows;
  try {
    rows = savings_summary(result);
  } catch (const ModelError&) {
    return;
  }
  auto f = open("savings.csv");
  write_savings_csv(rows, f);
}

namespace {

// Successful cells of one (engine, scenario, seed), ascending reduction.
std::vector<const CellResult*> series(const SweepResult& result, Engine engine, int scenario, std::uint64_t seed) {
  std::vector<const CellResult*> out;
  for (const CellResult& c : result.cells)
    if (c.engine == engine && c.scenario == scenario && c.seed == seed) out.push_back(&c);
  std::sort(out.begin(), out.end(), [](const CellResult* a, const CellResult* b) { return a->reduction < b->reduction; });
  return out;
}

}  // namespace

bool traffic_strictly_decreasing(const SweepResult& result, Engine engine, int scenario, std::uint64_t seed) {
  const auto s = series(result, engine, scenario, seed);
  if (s.size() < 2) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]->ok) return false;
    if (i > 0 && !(s[i]->report.traffic_scaled_total() < s[i - 1]->report.traffic_scaled_total())) return false;
  }
  return true;
}

bool total_nonincreasing(const SweepResult& result, Engine engine, int scenario, std::uint64_t seed, double rel_tol) {
  const auto s = series(result, engine, scenario, seed);
  if (s.empty()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]->ok) return false;
    if (i > 0) {
      const double prev = s[i - 1]->report.total_w;
      if (s[i]->report.total_w > prev + rel_tol * std::max(1.0, std::abs(prev))) return false;
    }
  }
  return true;
}

int vms_at_layer(const CellResult& cell, Layer layer) {
  int n = 0;
  for (const PlacementCount& p : cell.placements)
    if (p.layer == layer) n += p.hosted;
  return n;
}

bool all_vms_at_relays(const SweepResult& result, Engine engine, double min_reduction) {
  bool any = false;
  for (const CellResult& c : result.cells) {
    if (c.engine != engine || c.reduction < min_reduction - 1e-12) continue;
    if (!c.ok) return false;
    any = true;
    if (vms_at_layer(c, Layer::Relay) != c.vm_count) return false;
  }
  return any;
}

bool processing_ordered(const SweepResult& result, Engine engine, double reduction, std::uint64_t seed) {
  const CellResult* s1 = result.find(engine, 1, reduction, seed);
  const CellResult* s2 = result.find(engine, 2, reduction, seed);
  const CellResult* s3 = result.find(engine, 3, reduction, seed);
  if (!s1 || !s2 || !s3 || !s1->ok || !s2->ok || !s3->ok) return false;
  const double p1 = s1->report.processing_total();
  const double p2 = s2->report.processing_total();
  const double p3 = s3->report.processing_total();
  const double tol = 1e-9 * std::max({1.0, p1, p2, p3});
  return p1 <= p2 + tol && p2 <= p3 + tol;
}

}  // namespace ponvirt
