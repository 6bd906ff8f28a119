#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ponvirt/eepiv.hpp"
#include "ponvirt/errors.hpp"
#include "ponvirt/exact_solver.hpp"
#include "ponvirt/solution_io.hpp"
#include "ponvirt/validation.hpp"

using namespace ponvirt;

TEST_CASE("written solutions read back with the same objective") {
  const NetworkInstance inst = build_instance(fixtures::tiny(2, 2, 3, 5, 2));
  const ModelParams p = ModelParams::for_scenario(1, 0.7);
  const ExactResult r = solve_exact(inst, p);
  std::stringstream text;
  write_solution_text(r.solution, r.flows, inst, text);
  const ImportedSolution back = read_solution_text(text, inst);
  CHECK(back.solution.placed == r.solution.placed);
  CHECK(back.solution.cloudlet_open == r.solution.cloudlet_open);
  const ValidationReport v = validate_solution(back.solution, back.flows, inst, p);
  CHECK(v.ok());
  CHECK(v.objective.total_w == doctest::Approx(r.report.total_w).epsilon(1e-12));
}

TEST_CASE("heuristic solutions round trip too") {
  const NetworkInstance inst = build_instance(TopologyConfig{});
  const ModelParams p = ModelParams::for_scenario(3, 0.3);
  const EepivResult r = run_eepiv(inst, p);
  std::stringstream text;
  write_solution_text(r.solution, r.flows, inst, text);
  const ImportedSolution back = read_solution_text(text, inst);
  const ValidationReport v = validate_solution(back.solution, back.flows, inst, p);
  CHECK(v.ok());
  CHECK(v.objective.total_w == doctest::Approx(r.report.total_w).epsilon(1e-12));
}

TEST_CASE("zero values are omitted") {
  const NetworkInstance inst = fixtures::chain(10.0, 10.0);
  const ExactResult r = solve_exact(inst, ModelParams::for_scenario(1, 0.9));
  std::stringstream text;
  write_solution_text(r.solution, r.flows, inst, text);
  std::string name;
  double value = 0.0;
  int lines = 0;
  while (text >> name >> value) {
    CHECK(value != 0.0);
    ++lines;
  }
  CHECK(lines > 0);
}

TEST_CASE("names outside the instance are rejected") {
  const NetworkInstance inst = fixtures::chain(10.0, 10.0);
  std::istringstream link_missing("xu_0_1_0_3 5000\n");
  CHECK_THROWS_AS(read_solution_text(link_missing, inst), ValidationError);
  std::istringstream node_missing("H_99 1\n");
  CHECK_THROWS_AS(read_solution_text(node_missing, inst), ValidationError);
}

TEST_CASE("unknown names are ignored") {
  const NetworkInstance inst = fixtures::chain(10.0, 10.0);
  std::istringstream in("objective 3.5\nH_1 1\n");
  const ImportedSolution s = read_solution_text(in, inst);
  CHECK(s.solution.cloudlet_open[1] == 1);
}
