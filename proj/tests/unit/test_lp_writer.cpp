#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ponvirt/errors.hpp"
#include "ponvirt/lp_writer.hpp"

using namespace ponvirt;

namespace {

MilpModel minimal_model() {
  TopologyConfig c;
  c.networks = 1;
  c.objects_per_network = 1;
  c.relays_per_network = 1;
  c.vm_types = 1;
  return build_model(build_instance(c), ModelParams::for_scenario(1, 0.9));
}

}  // namespace

TEST_CASE("LP text reads back with the same counts") {
  const MilpModel m = minimal_model();
  std::stringstream lp;
  write_lp(m, lp);
  const LpStats s = read_lp_stats(lp);
  CHECK(s.variables == 63);
  CHECK(s.constraints == 83);
  CHECK(s.binaries == 10);
}

TEST_CASE("LP text keeps the section order") {
  std::stringstream lp;
  write_lp(minimal_model(), lp);
  const std::string t = lp.str();
  const auto min = t.find("Minimize");
  const auto st = t.find("Subject To");
  const auto bounds = t.find("Bounds");
  const auto bin = t.find("Binary");
  const auto end = t.rfind("End");
  CHECK(min < st);
  CHECK(st < bounds);
  CHECK(bounds < bin);
  CHECK(bin < end);
  std::string line;
  std::istringstream in(t);
  while (std::getline(in, line)) CHECK(line.size() <= 255);
}

TEST_CASE("default instance exports and reads back") {
  const MilpModel m = build_model(build_instance(TopologyConfig{}), ModelParams::for_scenario(2, 0.5));
  std::stringstream lp;
  write_lp(m, lp);
  const LpStats s = read_lp_stats(lp);
  CHECK(s.variables == static_cast<int>(m.variables.size()));
  CHECK(s.constraints == static_cast<int>(m.rows.size()));
  CHECK(s.binaries == m.binary_count());
}

TEST_CASE("MPS has every section and integer markers") {
  std::stringstream mps;
  write_mps(minimal_model(), mps);
  const std::string t = mps.str();
  for (const char* section : {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"})
    CHECK(t.find(section) != std::string::npos);
  CHECK(t.find("'INTORG'") != std::string::npos);
  CHECK(t.find("'INTEND'") != std::string::npos);
  CHECK(t.find(" BV ") != std::string::npos);
}

TEST_CASE("names file lists every variable in order") {
  const MilpModel m = minimal_model();
  std::stringstream csv;
  write_names_csv(m, csv);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "name,family,type,lower,upper");
  std::size_t i = 0;
  while (std::getline(csv, line)) {
    REQUIRE(i < m.variables.size());
    CHECK(line.rfind(m.variables[i].name + ",", 0) == 0);
    ++i;
  }
  CHECK(i == m.variables.size());
}

TEST_CASE("emit writes the model and its names file") {
  const auto dir = std::filesystem::temp_directory_path() / "ponvirt_lp_writer_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  emit_model(minimal_model(), dir / "model.mps", ModelFormat::Mps);
  CHECK(std::filesystem::exists(dir / "model.mps"));
  CHECK(std::filesystem::exists(dir / "model.names.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("format names and malformed input") {
  CHECK(parse_model_format("lp") == ModelFormat::Lp);
  CHECK(parse_model_format("mps") == ModelFormat::Mps);
  CHECK_THROWS_AS(parse_model_format("xml"), ConfigError);
  std::istringstream junk("Maximize\n obj: x\nEnd\n");
  CHECK_THROWS_AS(read_lp_stats(junk), IoError);
}
