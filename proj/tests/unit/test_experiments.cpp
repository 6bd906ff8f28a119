#include <sstream>
#include <string>

#include "doctest.h"
#include "ponvirt/errors.hpp"
#include "ponvirt/experiments.hpp"

using namespace ponvirt;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

SweepSpec eepiv_spec(std::vector<std::uint64_t> seeds) {
  SweepSpec s;
  s.engines = {Engine::Eepiv};
  s.seeds = std::move(seeds);
  return s;
}

}  // namespace

TEST_CASE("relative saving") {
  CHECK(relative_saving(81.0, 100.0) == doctest::Approx(0.19));
  CHECK(relative_saving(100.0, 100.0) == 0.0);
  CHECK(reference_saving(Engine::Exact, 2) == 17.0);
  CHECK(reference_saving(Engine::Exact, 3) == 19.0);
  CHECK(reference_saving(Engine::Eepiv, 2) == 17.0);
  CHECK(reference_saving(Engine::Eepiv, 3) == 17.0);
}

TEST_CASE("sweep selections are checked") {
  SweepSpec s;
  s.reductions.clear();
  CHECK_THROWS_AS(s.check(), ConfigError);
  s = SweepSpec{};
  s.scenarios = {4};
  CHECK_THROWS_AS(s.check(), ConfigError);
  s = SweepSpec{};
  s.jobs = 0;
  CHECK_THROWS_AS(s.check(), ConfigError);
  CHECK_THROWS_AS(run_sweep(s), ConfigError);
}

TEST_CASE("engine and scale names") {
  for (Engine e : {Engine::Exact, Engine::Eepiv, Engine::LpExport}) CHECK(parse_engine(to_string(e)) == e);
  for (Scale s : {Scale::Full, Scale::Reduced}) CHECK(parse_scale(to_string(s)) == s);
  CHECK_THROWS_AS(parse_engine("cplex"), ConfigError);
}

TEST_CASE("one heuristic sweep covers fifteen cells") {
  const SweepResult r = run_sweep(eepiv_spec({7}));
  CHECK(r.cells.size() == 15);
  for (const CellResult& c : r.cells) {
    CHECK(c.ok);
    CHECK(c.served == 100);
    CHECK(c.vm_count == 8);
  }
  REQUIRE(r.find(Engine::Eepiv, 1, 0.5, 7) != nullptr);
  CHECK(r.find(Engine::Eepiv, 1, 0.6, 7) == nullptr);
  for (int s : {1, 2, 3}) {
    CHECK(traffic_strictly_decreasing(r, Engine::Eepiv, s, 7));
    CHECK(total_nonincreasing(r, Engine::Eepiv, s, 7));
  }
  for (double red : kDefaultReductions) CHECK(processing_ordered(r, Engine::Eepiv, red, 7));
}

TEST_CASE("results do not depend on the worker count") {
  SweepSpec a = eepiv_spec({1, 2});
  SweepSpec b = a;
  b.jobs = 3;
  const SweepResult ra = run_sweep(a);
  const SweepResult rb = run_sweep(b);
  REQUIRE(ra.cells.size() == rb.cells.size());
  for (std::size_t i = 0; i < ra.cells.size(); ++i) {
    CHECK(ra.cells[i].scenario == rb.cells[i].scenario);
    CHECK(ra.cells[i].seed == rb.cells[i].seed);
    CHECK(ra.cells[i].report.total_w == rb.cells[i].report.total_w);
  }
}

TEST_CASE("savings summary against both scenarios") {
  const auto rows = savings_summary(run_sweep(eepiv_spec({7})));
  CHECK(rows.size() == 4);
  for (const SavingsRow& row : rows) {
    CHECK(row.seeds == 1);
    CHECK(row.saving_min <= row.saving_mean);
    CHECK(row.saving_mean <= row.saving_max);
    CHECK(row.saving_mean > 0.0);
  }
}

TEST_CASE("savings need two scenarios and complete cells") {
  SweepSpec one = eepiv_spec({7});
  one.scenarios = {1};
  CHECK_THROWS_AS(savings_summary(run_sweep(one)), ModelError);

  SweepSpec starved;
  starved.engines = {Engine::Exact};
  starved.reductions = {0.5};
  starved.limits.max_nodes = 1;
  const SweepResult r = run_sweep(starved);
  for (const CellResult& c : r.cells) {
    CHECK_FALSE(c.ok);
    CHECK(c.message.find("exceeded") != std::string::npos);
  }
  CHECK_THROWS_AS(savings_summary(r), ModelError);
}

TEST_CASE("reduced exact sweep: relays win once traffic shrinks enough") {
  SweepSpec s;
  s.engines = {Engine::Exact};
  s.scale = Scale::Reduced;
  s.seeds = {1};
  const SweepResult r = run_sweep(s);
  for (const CellResult& c : r.cells) CHECK(c.ok);
  CHECK(all_vms_at_relays(r, Engine::Exact, 0.3));
  const CellResult* s2 = r.find(Engine::Exact, 2, 0.1, 1);
  REQUIRE(s2 != nullptr);
  CHECK(vms_at_layer(*s2, Layer::Olt) == s2->vm_count);
}

TEST_CASE("CSV headers") {
  const SweepResult r = run_sweep(eepiv_spec({7}));
  std::ostringstream sweep, placements, savings, cells;
  write_sweep_csv(r, sweep);
  write_placements_csv(r, placements);
  write_savings_csv(savings_summary(r), savings);
  write_cells_csv(r, cells);
  CHECK(first_line(sweep.str()) ==
        "scenario,reduction_pct,engine,seed,layer,processing_w,traffic_w_raw,traffic_w_scaled,total_w");
  CHECK(first_line(placements.str()) == "scenario,reduction_pct,engine,seed,layer,network,vm_type,hosted");
  CHECK(first_line(savings.str()) ==
        "engine,aggregation,versus_scenario,saving_mean,saving_min,saving_max,seeds,reference");
  CHECK(first_line(cells.str()) ==
        "scenario,reduction_pct,engine,seed,status,total_w,served,vm_count,cloudlet_count,wall_ms,message");
  CHECK(sweep.str().find("\n1,10,eepiv,7,relay,") != std::string::npos);
}
