#include <algorithm>

#include "brute_force.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "ponvirt/errors.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/validation.hpp"

using namespace ponvirt;

TEST_CASE("hand-computed chain places the VM at the relay") {
  const NetworkInstance inst = fixtures::chain(10.0, 10.0);
  const ExactResult r = solve_exact(inst, ModelParams::for_scenario(1, 0.9));
  CHECK(r.solution.is_placed(0, 1));
  CHECK(r.solution.vm_count() == 1);
  CHECK(r.report.total_w == doctest::Approx(fixtures::kChainTotalW).epsilon(1e-12));
  CHECK(r.search_objective_w == doctest::Approx(r.report.total_w).epsilon(1e-12));
}

TEST_CASE("matches exhaustive enumeration on tiny instances") {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed)
    for (int scenario : {1, 2, 3})
      for (double r : {0.1, 0.9}) {
        const NetworkInstance inst = build_instance(fixtures::tiny(seed, 2, 2, 3, 2));
        const ModelParams p = ModelParams::for_scenario(scenario, r);
        const ExactResult got = solve_exact(inst, p);
        CHECK(got.report.total_w == doctest::Approx(oracle::brute_force_optimum(inst, p)).epsilon(1e-9));
        ++compared;
      }
  CHECK(compared == 72);
}

TEST_CASE("result satisfies every model row") {
  const NetworkInstance inst = build_instance(fixtures::tiny(3, 2, 3, 5, 2));
  const ModelParams p = ModelParams::for_scenario(1, 0.5);
  const ExactResult r = solve_exact(inst, p);
  const ValidationReport v = validate_solution(r.solution, r.flows, inst, p);
  CHECK(v.ok());
  CHECK(v.objective.total_w == doctest::Approx(r.report.total_w).epsilon(1e-12));
}

TEST_CASE("zero network energy leaves only the cheapest hosts") {
  const NetworkInstance inst = build_instance(fixtures::tiny(5, 2, 2, 4, 2));
  ModelParams p = ModelParams::for_scenario(1, 0.5);
  p.energy = EnergyParams{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5.0};
  // Per requested type: one OLT instance, or the cheapest local host in
  // every requesting network.
  double expected = 0.0;
  for (int v = 0; v < inst.vm_types(); ++v) {
    std::vector<int> nets;
    for (NodeId o : inst.objects())
      if (inst.vm_request(o) == v) nets.push_back(inst.node(o).network);
    std::sort(nets.begin(), nets.end());
    nets.erase(std::unique(nets.begin(), nets.end()), nets.end());
    if (nets.empty()) continue;
    double local = 0.0;
    for (int n [[maybe_unused]] : nets) {
      double best = p.vm_power(v, Layer::Relay);
      for (Layer l : {Layer::Coordinator, Layer::Gateway, Layer::Onu}) best = std::min(best, p.vm_power(v, l));
      local += best;
    }
    expected += std::min(local, p.vm_power(v, Layer::Olt));
  }
  CHECK(solve_exact(inst, p).report.total_w == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("shared VMs move to the OLT when processing dominates") {
  const NetworkInstance inst = build_instance(TopologyConfig::reduced());
  const ExactResult r = solve_exact(inst, ModelParams::for_scenario(2, 0.1));
  int at_olt = 0;
  for (int v = 0; v < inst.vm_types(); ++v) at_olt += r.solution.is_placed(v, inst.olt()) ? 1 : 0;
  CHECK(at_olt == 4);
  CHECK(r.solution.vm_count() == 4);
}

TEST_CASE("dropping capacity never raises the optimum") {
  const NetworkInstance inst = build_instance(fixtures::tiny(8, 2, 2, 6, 3));
  ModelParams p = ModelParams::for_scenario(2, 0.3);
  const double with_cap = solve_exact(inst, p).report.total_w;
  p.capacity_enforced = false;
  CHECK(solve_exact(inst, p).report.total_w <= with_cap + 1e-12);
}

TEST_CASE("deterministic across calls") {
  const NetworkInstance inst = build_instance(fixtures::tiny(9, 2, 3, 5, 2));
  const ModelParams p = ModelParams::for_scenario(3, 0.7);
  const ExactResult a = solve_exact(inst, p);
  const ExactResult b = solve_exact(inst, p);
  CHECK(a.solution.placed == b.solution.placed);
  CHECK(a.report.total_w == b.report.total_w);
}

TEST_CASE("budget exhaustion raises ResourceError") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  SearchLimits limits;
  limits.max_nodes = 1;
  CHECK_THROWS_AS(solve_exact(inst, ModelParams::for_scenario(1, 0.5), limits), ResourceError);
}

TEST_CASE("no host fits raises InfeasibleError") {
  const NetworkInstance inst = fixtures::chain(1.0, 1.0);
  ModelParams p = ModelParams::for_scenario(1, 0.5);
  for (auto& row : p.workloads) row.fill(2.0);
  CHECK_THROWS_AS(solve_exact(inst, p), InfeasibleError);
}

TEST_CASE("instance without objects costs nothing") {
  TopologyConfig c;
  c.objects_per_network = 0;
  c.relays_per_network = 0;
  const ExactResult r = solve_exact(build_instance(c), ModelParams::for_scenario(1, 0.5));
  CHECK(r.report.total_w == 0.0);
  CHECK(r.solution.vm_count() == 0);
}
