#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ponvirt/eepiv.hpp"
#include "ponvirt/errors.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/experiments.hpp"
#include "ponvirt/lp_writer.hpp"
#include "ponvirt/milp_model.hpp"
#include "ponvirt/solution_io.hpp"
#include "ponvirt/validation.hpp"

namespace py = pybind11;
using namespace ponvirt;

namespace {

py::list placement_list(const PlacementSolution& s, const NetworkInstance& inst) {
  py::list out;
  for (int v = 0; v < s.vm_types(); ++v)
    for (NodeId c : inst.candidates())
      if (s.is_placed(v, c))
        out.append(py::dict(py::arg("vm_type") = v, py::arg("node") = c,
                            py::arg("layer") = std::string(to_string(inst.layer(c))),
                            py::arg("network") = inst.node(c).network));
  return out;
}

py::dict layer_dict(const LayerValues& values) {
  py::dict d;
  for (Layer l : kAllLayers) d[py::str(std::string(to_string(l)))] = values[index(l)];
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VM and cloudlet placement for IoT over PON";

  static py::exception<Error> error(m, "PonvirtError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(e.kind()) + ": " + e.what()).c_str());
    }
  });

  py::class_<TopologyConfig>(m, "TopologyConfig")
      .def(py::init<>())
      .def_static("reduced", &TopologyConfig::reduced, py::arg("relays") = 4, py::arg("objects") = 50)
      .def_readwrite("networks", &TopologyConfig::networks)
      .def_readwrite("objects_per_network", &TopologyConfig::objects_per_network)
      .def_readwrite("relays_per_network", &TopologyConfig::relays_per_network)
      .def_readwrite("area_side_m", &TopologyConfig::area_side_m)
      .def_readwrite("relay_spacing_m", &TopologyConfig::relay_spacing_m)
      .def_readwrite("gateway_coordinator_distance_m", &TopologyConfig::gateway_coordinator_distance_m)
      .def_readwrite("rng_seed", &TopologyConfig::rng_seed)
      .def_readwrite("vm_types", &TopologyConfig::vm_types)
      .def_property(
          "relay_layout", [](const TopologyConfig& t) { return std::string(to_string(t.relay_layout)); },
          [](TopologyConfig& t, const std::string& s) { t.relay_layout = parse_relay_layout(s); })
      .def_property(
          "request_assignment", [](const TopologyConfig& t) { return std::string(to_string(t.request_assignment)); },
          [](TopologyConfig& t, const std::string& s) { t.request_assignment = parse_request_assignment(s); });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("for_scenario", &ModelParams::for_scenario, py::arg("scenario"), py::arg("reduction"))
      .def_readwrite("demand_bps", &ModelParams::demand_bps)
      .def_readwrite("reduction", &ModelParams::reduction)
      .def_readwrite("capacity_enforced", &ModelParams::capacity_enforced)
      .def_readwrite("scenario", &ModelParams::scenario)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_property(
          "scaling_a", [](const ModelParams& p) { return p.energy.scaling_a; },
          [](ModelParams& p, double a) { p.energy.scaling_a = a; })
      .def("remaining_fraction", &ModelParams::remaining_fraction);

  py::class_<PowerReport>(m, "PowerReport")
      .def_readonly("total_w", &PowerReport::total_w)
      .def_property_readonly("processing_w", [](const PowerReport& r) { return layer_dict(r.processing_w); })
      .def_property_readonly("traffic_raw_w", [](const PowerReport& r) { return layer_dict(r.traffic_raw_w); })
      .def_property_readonly("traffic_scaled_w", [](const PowerReport& r) { return layer_dict(r.traffic_scaled_w); })
      .def("processing_total", &PowerReport::processing_total)
      .def("traffic_scaled_total", &PowerReport::traffic_scaled_total);

  py::class_<NetworkInstance>(m, "NetworkInstance")
      .def_property_readonly("num_nodes", &NetworkInstance::num_nodes)
      .def_property_readonly("num_links", &NetworkInstance::num_links)
      .def_property_readonly("networks", &NetworkInstance::networks)
      .def_property_readonly("vm_types", &NetworkInstance::vm_types)
      .def_property_readonly("olt", &NetworkInstance::olt)
      .def_property_readonly("candidates", &NetworkInstance::candidates)
      .def_property_readonly("objects", &NetworkInstance::objects)
      .def("layer", [](const NetworkInstance& i, NodeId n) { return std::string(to_string(i.layer(n))); })
      .def("write_csv", [](const NetworkInstance& i, const std::filesystem::path& dir) { write_instance_csv(i, dir); });

  m.def("build_instance", &build_instance, py::arg("config") = TopologyConfig{});
  m.def("read_instance_csv", &read_instance_csv, py::arg("directory"), py::arg("vm_types") = 0);

  m.def(
      "solve_exact",
      [](const NetworkInstance& inst, const ModelParams& params, std::uint64_t max_nodes,
         const std::optional<std::filesystem::path>& solution_path) {
        SearchLimits limits;
        if (max_nodes > 0) limits.max_nodes = max_nodes;
        ExactResult r;
        {
          py::gil_scoped_release release;
          r = solve_exact(inst, params, limits);
        }
        if (solution_path) write_solution_text(r.solution, r.flows, inst, *solution_path);
        return py::dict(py::arg("report") = r.report, py::arg("placements") = placement_list(r.solution, inst),
                        py::arg("vm_count") = r.solution.vm_count(),
                        py::arg("cloudlet_count") = r.solution.cloudlet_count(),
                        py::arg("nodes_explored") = r.nodes_explored);
      },
      py::arg("instance"), py::arg("params"), py::arg("max_nodes") = 0, py::arg("solution_path") = py::none());

  m.def(
      "run_eepiv",
      [](const NetworkInstance& inst, const ModelParams& params, bool literal_tpc,
         const std::optional<std::filesystem::path>& solution_path) {
        EepivOptions options;
        options.literal_tpc = literal_tpc;
        const EepivResult r = run_eepiv(inst, params, options);
        if (solution_path) write_solution_text(r.solution, r.flows, inst, *solution_path);
        return py::dict(py::arg("report") = r.report, py::arg("placements") = placement_list(r.solution, inst),
                        py::arg("vm_count") = r.solution.vm_count(),
                        py::arg("cloudlet_count") = r.solution.cloudlet_count(),
                        py::arg("served_count") = r.served_count, py::arg("tpc_w") = r.tpc_w);
      },
      py::arg("instance"), py::arg("params"), py::arg("literal_tpc") = false, py::arg("solution_path") = py::none());

  m.def(
      "model_counts",
      [](const NetworkInstance& inst, const ModelParams& params) {
        const MilpModel model = build_model(inst, params);
        return py::dict(py::arg("variables") = model.variable_counts(), py::arg("rows") = model.row_counts(),
                        py::arg("binaries") = model.binary_count());
      },
      py::arg("instance"), py::arg("params"));

  m.def(
      "export_model",
      [](const NetworkInstance& inst, const ModelParams& params, const std::filesystem::path& path,
         const std::string& format) { emit_model(build_model(inst, params), path, parse_model_format(format)); },
      py::arg("instance"), py::arg("params"), py::arg("path"), py::arg("format") = "lp");

  m.def(
      "validate_solution_file",
      [](const NetworkInstance& inst, const ModelParams& params, const std::filesystem::path& path) {
        const ImportedSolution s = read_solution_text(path, inst);
        const ValidationReport report = validate_solution(s.solution, s.flows, inst, params);
        py::list violations;
        for (const Violation& v : report.violations)
          violations.append(py::make_tuple(v.family, v.row_id, v.residual));
        return py::dict(py::arg("violations") = violations, py::arg("total_w") = report.objective.total_w);
      },
      py::arg("instance"), py::arg("params"), py::arg("path"));

  m.def(
      "run_sweep",
      [](const std::vector<int>& scenarios, const std::vector<double>& reductions,
         const std::vector<std::string>& engines, const std::vector<std::uint64_t>& seeds, const std::string& scale,
         int jobs) {
        SweepSpec spec;
        spec.scenarios = scenarios;
        spec.reductions = reductions;
        spec.engines.clear();
        for (const auto& e : engines) spec.engines.push_back(parse_engine(e));
        spec.seeds = seeds;
        spec.scale = parse_scale(scale);
        spec.jobs = jobs;
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(spec);
        }
        py::list cells;
        for (const CellResult& c : result.cells)
          cells.append(py::dict(py::arg("scenario") = c.scenario, py::arg("reduction") = c.reduction,
                                py::arg("engine") = std::string(to_string(c.engine)), py::arg("seed") = c.seed,
                                py::arg("ok") = c.ok, py::arg("message") = c.message,
                                py::arg("total_w") = c.report.total_w, py::arg("vm_count") = c.vm_count,
                                py::arg("served") = c.served));
        py::list savings;
        try {
          for (const SavingsRow& r : savings_summary(result))
            savings.append(py::dict(py::arg("engine") = std::string(to_string(r.engine)),
                                    py::arg("aggregation") = r.aggregation, py::arg("versus_scenario") = r.versus_scenario,
                                    py::arg("saving_mean") = r.saving_mean, py::arg("saving_min") = r.saving_min,
                                    py::arg("saving_max") = r.saving_max, py::arg("reference") = r.reference));
        } catch (const ModelError&) {
        }
        return py::dict(py::arg("cells") = cells, py::arg("savings") = savings);
      },
      py::arg("scenarios") = std::vector<int>{1, 2, 3}, py::arg("reductions") = kDefaultReductions,
      py::arg("engines") = std::vector<std::string>{"eepiv"}, py::arg("seeds") = std::vector<std::uint64_t>{7},
      py::arg("scale") = "paper", py::arg("jobs") = 1);
}
