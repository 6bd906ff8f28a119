#include <sstream>

#include "doctest.h"
#include "ponvirt/config.hpp"
#include "ponvirt/errors.hpp"

using namespace ponvirt;

TEST_CASE("key value lines with comments") {
  std::istringstream in("# header\nnetworks = 3\n  seed=11  # trailing\n\nrelay_layout = random\n");
  const ConfigFile c = ConfigFile::parse(in);
  CHECK(c.get("networks") == "3");
  CHECK(c.get("seed") == "11");
  CHECK_FALSE(c.get("vm_types").has_value());
  TopologyConfig t;
  apply_topology(c, t);
  CHECK(t.networks == 3);
  CHECK(t.rng_seed == 11);
  CHECK(t.relay_layout == RelayLayout::Random);
}

TEST_CASE("parameter overrides") {
  std::istringstream in("demand_bps = 1000\ncapacity_enforced = false\nolt_cpu_power_w = 9.28\nepsilon = 0\n");
  const ConfigFile c = ConfigFile::parse(in);
  ModelParams p = ModelParams::for_scenario(1, 0.5);
  apply_params(c, p);
  CHECK(p.demand_bps == 1000.0);
  CHECK_FALSE(p.capacity_enforced);
  CHECK(p.processing.cpu_power_w[index(Layer::Olt)] == 9.28);
  CHECK(p.energy.epsilon == 0.0);
}

TEST_CASE("coordinator position needs both coordinates") {
  std::istringstream in("coordinator_x = 3\ncoordinator_y = 4\n");
  TopologyConfig t;
  apply_topology(ConfigFile::parse(in), t);
  REQUIRE(t.coordinator_position.has_value());
  CHECK(t.coordinator_position->x == 3.0);
  CHECK(t.coordinator_position->y == 4.0);
}

TEST_CASE("typed getters") {
  std::istringstream in("jobs = 4\nliteral_tpc = yes\nscale = reduced\n");
  const ConfigFile c = ConfigFile::parse(in);
  CHECK(c.get_int("jobs", 1) == 4);
  CHECK(c.get_bool("literal_tpc", false));
  CHECK(c.get_double("reduction", 0.25) == 0.25);
  CHECK_THROWS_AS(c.get_int("scale", 0), ConfigError);
}

TEST_CASE("malformed files are rejected") {
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(ConfigFile::parse(unknown), ConfigError);
  std::istringstream no_equals("networks 3\n");
  CHECK_THROWS_AS(ConfigFile::parse(no_equals), ConfigError);
  std::istringstream bad_number("networks = two\n");
  TopologyConfig t;
  CHECK_THROWS_AS(apply_topology(ConfigFile::parse(bad_number), t), ConfigError);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/ponvirt.conf"), ConfigError);
}
