#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ponvirt/eepiv.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/milp_model.hpp"
#include "ponvirt/validation.hpp"

using namespace ponvirt;

namespace {

// Random small configuration; relays, objects and types vary per draw.
TopologyConfig draw(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> relays(1, 3), objects(0, 5), types(1, 3), nets(1, 2);
  return fixtures::tiny(rng(), nets(rng), relays(rng), objects(rng), types(rng));
}

constexpr int kDraws = 40;

}  // namespace

TEST_CASE("generated instances satisfy the structural invariants") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < kDraws; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    CHECK_NOTHROW(check_instance(inst));
    for (const Link& l : inst.links()) {
      // Uplink only; relays may also forward to each other.
      const bool relay_hop = inst.layer(l.src) == Layer::Relay && inst.layer(l.dst) == Layer::Relay;
      CHECK((relay_hop || index(inst.layer(l.dst)) > index(inst.layer(l.src))));
      if (inst.layer(l.src) != Layer::Onu) CHECK(inst.node(l.src).network == inst.node(l.dst).network);
    }
  }
}

TEST_CASE("both engines produce solutions that satisfy every row") {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> scen(1, 3);
  std::uniform_real_distribution<double> red(0.0, 0.95);
  for (int i = 0; i < kDraws; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    const ModelParams p = ModelParams::for_scenario(scen(rng), red(rng));
    const ExactResult x = solve_exact(inst, p);
    const ValidationReport vx = validate_solution(x.solution, x.flows, inst, p);
    CHECK(vx.ok());
    CHECK(vx.objective.total_w == doctest::Approx(x.report.total_w).epsilon(1e-12));
    const EepivResult e = run_eepiv(inst, p);
    CHECK(validate_solution(e.solution, e.flows, inst, p).ok());
    CHECK(e.report.total_w >= x.report.total_w - 1e-12);
  }
}

TEST_CASE("optimum is nonincreasing in the reduction") {
  std::mt19937_64 rng(303);
  for (int i = 0; i < kDraws / 2; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    for (int s : {1, 2, 3}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double r : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double t = solve_exact(inst, ModelParams::for_scenario(s, r)).report.total_w;
        CHECK(t <= prev * (1.0 + 1e-12));
        prev = t;
      }
    }
  }
}

TEST_CASE("optimum is ordered across scenarios") {
  std::mt19937_64 rng(404);
  for (int i = 0; i < kDraws / 2; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    for (double r : {0.1, 0.5, 0.9}) {
      const double s1 = solve_exact(inst, ModelParams::for_scenario(1, r)).report.total_w;
      const double s2 = solve_exact(inst, ModelParams::for_scenario(2, r)).report.total_w;
      const double s3 = solve_exact(inst, ModelParams::for_scenario(3, r)).report.total_w;
      CHECK(s1 <= s2 * (1.0 + 1e-12));
      CHECK(s2 <= s3 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("traffic power scales linearly with demand for a fixed placement") {
  std::mt19937_64 rng(505);
  for (int i = 0; i < kDraws / 2; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    ModelParams p = ModelParams::for_scenario(1, 0.5);
    const EepivResult base = run_eepiv(inst, p);
    p.demand_bps *= 3.0;
    const EepivResult tripled = run_eepiv(inst, p);
    CHECK(tripled.solution.placed == base.solution.placed);
    CHECK(tripled.report.traffic_scaled_total() ==
          doctest::Approx(3.0 * base.report.traffic_scaled_total()).epsilon(1e-12));
    CHECK(tripled.report.processing_total() == doctest::Approx(base.report.processing_total()).epsilon(1e-12));
  }
}

TEST_CASE("CSV round trip preserves the optimum and the model") {
  std::mt19937_64 rng(606);
  const auto dir = std::filesystem::temp_directory_path() / "ponvirt_property_roundtrip";
  for (int i = 0; i < 10; ++i) {
    const NetworkInstance inst = build_instance(draw(rng));
    std::filesystem::remove_all(dir);
    write_instance_csv(inst, dir);
    const NetworkInstance back = read_instance_csv(dir, inst.vm_types());
    const ModelParams p = ModelParams::for_scenario(2, 0.3);
    CHECK(solve_exact(back, p).report.total_w == solve_exact(inst, p).report.total_w);
    CHECK(build_model(back, p).variables.size() == build_model(inst, p).variables.size());
  }
  std::filesystem::remove_all(dir);
}
