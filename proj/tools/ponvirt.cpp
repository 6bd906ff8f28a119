// Command line front end: generate, solve, heuristic, export-lp, sweep,
// validate. Exit 0 on success, 1 on engine errors, 2 on usage and
// configuration errors.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ponvirt/config.hpp"
#include "ponvirt/eepiv.hpp"
#include "ponvirt/errors.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/experiments.hpp"
#include "ponvirt/lp_writer.hpp"
#include "ponvirt/milp_model.hpp"
#include "ponvirt/solution_io.hpp"
#include "ponvirt/validation.hpp"

namespace fs = std::filesystem;
using namespace ponvirt;

namespace {

constexpr const char* kOutputEnv = "PONVIRT_OUTPUT_DIR";
constexpr const char* kDefaultOutput = "ponvirt-out";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string quoted(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return "\"" + s + "\"";
}

long long parse_integer(const std::string& text) {
  long long x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw UsageError("not an integer: '" + text + "'");
  return x;
}

double parse_number(const std::string& text) {
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw UsageError("not a number: '" + text + "'");
  return x;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "1,2,5..8" -> 1 2 5 6 7 8
std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  for (const std::string& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_integer(item));
      continue;
    }
    const long long lo = parse_integer(item.substr(0, dots));
    const long long hi = parse_integer(item.substr(dots + 2));
    if (hi < lo || hi - lo > 100000) throw UsageError("bad range '" + item + "'");
    for (long long x = lo; x <= hi; ++x) out.push_back(x);
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

// Settings shared by the subcommands; flags override the config file.
struct Common {
  std::string config_path;
  std::string output_dir;
  std::optional<long long> seed;
  std::optional<std::string> scale;
  std::optional<int> relays;
  std::optional<int> objects;
  std::optional<int> scenario;
  std::optional<double> reduction;
  bool no_capacity = false;
  std::string instance_dir;

  ConfigFile config;

  void load() {
    if (!config_path.empty()) config = ConfigFile::load(config_path);
  }

  fs::path out_dir() const {
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    if (auto v = config.get("output_dir")) return *v;
    return kDefaultOutput;
  }

  Scale scale_value() const {
    if (scale) return parse_scale(*scale);
    if (auto v = config.get("scale")) return parse_scale(*v);
    return Scale::Full;
  }

  int reduced_relays() const { return relays.value_or(static_cast<int>(config.get_int("reduced_relays", 4))); }
  int reduced_objects() const { return objects.value_or(static_cast<int>(config.get_int("reduced_objects", 50))); }

  TopologyConfig topology() const {
    TopologyConfig t;
    if (scale_value() == Scale::Reduced) {
      const TopologyConfig r = TopologyConfig::reduced(reduced_relays(), reduced_objects());
      t.relays_per_network = r.relays_per_network;
      t.objects_per_network = r.objects_per_network;
      t.relay_spacing_m = r.relay_spacing_m;
      t.relay_layout = r.relay_layout;
    }
    apply_topology(config, t);
    if (seed) {
      if (*seed < 0) throw UsageError("--seed must be nonnegative");
      t.rng_seed = static_cast<std::uint64_t>(*seed);
    }
    return t;
  }

  NetworkInstance instance() const {
    if (!instance_dir.empty()) return read_instance_csv(instance_dir);
    return build_instance(topology());
  }

  ModelParams params() const {
    const int s = scenario.value_or(static_cast<int>(config.get_int("scenario", 1)));
    const double r = reduction.value_or(config.get_double("reduction", 0.9));
    ModelParams p = ModelParams::for_scenario(s, r);
    apply_params(config, p);
    if (no_capacity) p.capacity_enforced = false;
    return p;
  }
};

void add_common(CLI::App* cmd, Common& c, bool engine_flags) {
  cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--output-dir,-o", c.output_dir, "output directory (env PONVIRT_OUTPUT_DIR, config output_dir)");
  cmd->add_option("--seed", c.seed, "topology seed");
  cmd->add_option("--scale", c.scale, "paper or reduced");
  cmd->add_option("--relays", c.relays, "relays per network at reduced scale");
  cmd->add_option("--objects", c.objects, "objects per network at reduced scale");
  if (engine_flags) {
    cmd->add_option("--instance", c.instance_dir, "read the instance from nodes.csv/edges.csv in this directory");
    cmd->add_option("--scenario", c.scenario, "scenario 1, 2 or 3");
    cmd->add_option("--reduction", c.reduction, "traffic reduction r in [0, 1)");
    cmd->add_flag("--no-capacity", c.no_capacity, "drop the TW_c <= 1 capacity rows");
  }
}

void print_placement(const PlacementSolution& s, const NetworkInstance& inst) {
  for (int v = 0; v < s.vm_types(); ++v)
    for (NodeId c : inst.candidates())
      if (s.is_placed(v, c))
        std::cout << "placement vm_type=" << v << " node=" << c << " layer=" << to_string(inst.layer(c))
                  << " network=" << inst.node(c).network << '\n';
}

void write_report(const fs::path& path, const PowerReport& report, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_report_csv_header(out);
  write_report_csv_rows(out, report, params);
}

int run(int argc, char** argv) {
  CLI::App app{"VM and cloudlet placement for IoT over PON"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("generate", "write instance CSVs");
  add_common(gen, common, false);

  auto* solve = app.add_subcommand("solve", "optimal placement with the exact engine");
  add_common(solve, common, true);
  long long max_nodes = 0;
  solve->add_option("--max-nodes", max_nodes, "search node budget");

  auto* heur = app.add_subcommand("heuristic", "greedy placement");
  add_common(heur, common, true);
  bool literal_tpc = false;
  heur->add_flag("--literal-tpc", literal_tpc, "report processing without the OLT plus raw traffic");

  auto* lp = app.add_subcommand("export-lp", "write the MILP as LP or MPS");
  add_common(lp, common, true);
  std::string format = "lp";
  lp->add_option("--format", format, "lp or mps");

  auto* sweep = app.add_subcommand("sweep", "scenario x reduction x engine x seed sweep");
  add_common(sweep, common, false);
  std::optional<std::string> scenarios, reductions, engines, seeds;
  int jobs = 0;
  bool sweep_no_capacity = false;
  sweep->add_option("--scenarios", scenarios, "e.g. 1,2,3");
  sweep->add_option("--reductions", reductions, "e.g. 0.1,0.3,0.5,0.7,0.9");
  sweep->add_option("--engines,--engine", engines, "exact, eepiv, lp-export (comma separated)");
  sweep->add_option("--seeds", seeds, "e.g. 1..10");
  sweep->add_option("--jobs,-j", jobs, "parallel cells");
  sweep->add_flag("--no-capacity", sweep_no_capacity, "drop the TW_c <= 1 capacity rows");

  auto* val = app.add_subcommand("validate", "check a `name value` solution file");
  add_common(val, common, true);
  std::string solution_path;
  val->add_option("--solution", solution_path, "solution file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: kind=usage message=" << quoted(e.what()) << '\n';
    return 2;
  }

  common.load();
  const fs::path out = common.out_dir();

  if (*gen) {
    const NetworkInstance inst = common.instance();
    const fs::path dir = out / "instance";
    write_instance_csv(inst, dir);
    std::cout << "instance " << dir.string() << " nodes=" << inst.num_nodes() << " links=" << inst.num_links()
              << " candidates=" << inst.candidates().size() << '\n';
    return 0;
  }

  if (*solve) {
    const NetworkInstance inst = common.instance();
    const ModelParams params = common.params();
    SearchLimits limits;
    if (max_nodes > 0) limits.max_nodes = static_cast<std::uint64_t>(max_nodes);
    else if (auto v = common.config.get("max_nodes")) limits.max_nodes = static_cast<std::uint64_t>(parse_integer(*v));
    const ExactResult r = solve_exact(inst, params, limits);
    fs::create_directories(out);
    write_report(out / "report.csv", r.report, params);
    write_solution_text(r.solution, r.flows, inst, out / "solution.txt");
    std::cout.precision(17);
    std::cout << "total_w " << r.report.total_w << '\n'
              << "processing_w " << r.report.processing_total() << '\n'
              << "traffic_w " << r.report.traffic_scaled_total() << '\n'
              << "vms " << r.solution.vm_count() << " cloudlets " << r.solution.cloudlet_count() << '\n'
              << "nodes_explored " << r.nodes_explored << '\n';
    print_placement(r.solution, inst);
    return 0;
  }

  if (*heur) {
    const NetworkInstance inst = common.instance();
    const ModelParams params = common.params();
    EepivOptions options;
    options.literal_tpc = literal_tpc || common.config.get_bool("literal_tpc", false);
    const EepivResult r = run_eepiv(inst, params, options);
    fs::create_directories(out);
    write_report(out / "report.csv", r.report, params);
    write_solution_text(r.solution, r.flows, inst, out / "solution.txt");
    std::cout.precision(17);
    std::cout << "total_w " << r.report.total_w << '\n'
              << "tpc_w " << r.tpc_w << '\n'
              << "served " << r.served_count << " of " << inst.objects().size() << '\n'
              << "vms " << r.solution.vm_count() << " cloudlets " << r.solution.cloudlet_count() << '\n';
    print_placement(r.solution, inst);
    return 0;
  }

  if (*lp) {
    const NetworkInstance inst = common.instance();
    const ModelParams params = common.params();
    if (auto v = common.config.get("format"); v && lp->count("--format") == 0) format = *v;
    const ModelFormat f = parse_model_format(format);
    const MilpModel model = build_model(inst, params);
    fs::create_directories(out);
    const fs::path path = out / (f == ModelFormat::Lp ? "model.lp" : "model.mps");
    emit_model(model, path, f);
    std::cout << "model " << path.string() << " variables=" << model.variables.size() << " constraints="
              << model.rows.size() << " binaries=" << model.binary_count() << '\n';
    return 0;
  }

  if (*sweep) {
    SweepSpec spec;
    const ConfigFile& cfg = common.config;
    auto pick = [&](const std::optional<std::string>& flag, const char* key) -> std::optional<std::string> {
      if (flag) return flag;
      return cfg.get(key);
    };
    if (auto v = pick(scenarios, "scenarios")) {
      spec.scenarios.clear();
      for (long long s : parse_int_list(*v)) spec.scenarios.push_back(static_cast<int>(s));
    }
    if (auto v = pick(reductions, "reductions")) spec.reductions = parse_double_list(*v);
    if (auto v = pick(engines, "engines")) {
      spec.engines.clear();
      for (const std::string& e : split(*v, ',')) spec.engines.push_back(parse_engine(e));
    }
    spec.scale = common.scale_value();
    spec.reduced_relays = common.reduced_relays();
    spec.reduced_objects = common.reduced_objects();
    spec.topology = common.topology();
    if (auto v = pick(seeds, "seeds")) {
      spec.seeds.clear();
      for (long long s : parse_int_list(*v)) {
        if (s < 0) throw UsageError("seeds must be nonnegative");
        spec.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    } else {
      spec.seeds = {spec.topology.rng_seed};
    }
    spec.jobs = jobs > 0 ? jobs : static_cast<int>(cfg.get_int("jobs", 1));
    ModelParams base;
    apply_params(cfg, base);
    spec.capacity_enforced = base.capacity_enforced && !sweep_no_capacity;
    spec.demand_bps = base.demand_bps;
    if (auto v = cfg.get("max_nodes")) spec.limits.max_nodes = static_cast<std::uint64_t>(parse_integer(*v));
    spec.output_dir = out / "models";

    const SweepResult result = run_sweep(spec);
    write_sweep_outputs(result, out);
    int failed = 0;
    for (const CellResult& c : result.cells) {
      if (c.ok) continue;
      ++failed;
      std::cerr << "cell failed: scenario=" << c.scenario << " reduction=" << c.reduction << " engine="
                << to_string(c.engine) << " seed=" << c.seed << " reason=" << quoted(c.message) << '\n';
    }
    std::cout << "cells " << result.cells.size() << " failed " << failed << " output " << out.string() << '\n';
    try {
      for (const SavingsRow& row : savings_summary(result))
        std::cout << "saving engine=" << to_string(row.engine) << " aggregation=" << row.aggregation
                  << " vs_scenario=" << row.versus_scenario << " mean=" << 100.0 * row.saving_mean
                  << "% min=" << 100.0 * row.saving_min << "% max=" << 100.0 * row.saving_max
                  << "% reference=" << 100.0 * row.reference << "%\n";
    } catch (const ModelError& e) {
      std::cout << "savings not computed: " << e.what() << '\n';
    }
    return failed == 0 ? 0 : 1;
  }

  if (*val) {
    const NetworkInstance inst = common.instance();
    const ModelParams params = common.params();
    const ImportedSolution imported = read_solution_text(fs::path(solution_path), inst);
    const ValidationReport report = validate_solution(imported.solution, imported.flows, inst, params);
    fs::create_directories(out);
    std::ofstream csv(out / "validation.csv");
    if (!csv) throw IoError("cannot write " + (out / "validation.csv").string());
    write_validation_csv(report, csv);
    std::cout.precision(17);
    std::cout << "violations " << report.violations.size() << '\n' << "total_w " << report.objective.total_w << '\n';
    for (const auto& [family, n] : report.counts()) std::cout << "family " << family << ' ' << n << '\n';
    if (!report.ok()) {
      std::cerr << "error: kind=validation message="
                << quoted(std::to_string(report.violations.size()) + " violated rows, see validation.csv") << '\n';
      return 1;
    }
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: kind=usage message=" << quoted(e.what()) << '\n';
    return 2;
  } catch (const ConfigError& e) {
    // Bad flag or config values are usage errors.
    std::cerr << "error: kind=" << e.kind() << " message=" << quoted(e.what()) << '\n';
    return 2;
  } catch (const ponvirt::Error& e) {
    std::cerr << "error: kind=" << e.kind() << " message=" << quoted(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: kind=internal message=" << quoted(e.what()) << '\n';
    return 1;
  }
}
