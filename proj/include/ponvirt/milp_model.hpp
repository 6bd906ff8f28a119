#pragma once

#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ponvirt/power_model.hpp"
#include "ponvirt/topology.hpp"

namespace ponvirt {

enum class VarType { Continuous, Binary };
enum class RowSense { Le, Ge, Eq };

struct Variable {
  std::string name;
  std::string family;
  VarType type = VarType::Continuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::string family;
  std::vector<Term> terms;
  RowSense sense = RowSense::Eq;
  double rhs = 0.0;
};

// Symbolic MILP. Variable families and their names:
//   Iv_{c}_{v}          binary, VM type v placed at candidate c
//   H_{c}               binary, cloudlet built at c
//   TW_{c}              total normalized workload of c
//   xo_{o}_{c}          object o's demand served at c (for its requested type)
//   yo_{o}_{c}          object o's unprocessed traffic towards c
//   xu_{o}_{c}_{x}_{y}  that traffic on link x->y
//   U_{x}_{y}           aggregate unprocessed traffic on x->y
//   pt_{c}_{l}          processed traffic from c to the OLT l
//   xp_{c}_{l}_{x}_{y}  that traffic on link x->y
//   P_{x}_{y}           aggregate processed traffic on x->y
// Row families: demand, split, ucons, uagg, reduce, pcons, pagg, place_lo,
// place_hi, open_lo, open_hi, workload and, with capacity enforced, capacity.
struct MilpModel {
  std::string name = "ponvirt";
  std::vector<Variable> variables;
  std::vector<Row> rows;
  std::vector<Term> objective;

  int add_variable(std::string name, std::string family, VarType type = VarType::Continuous);
  // -1 when absent.
  int find(const std::string& name) const;

  std::map<std::string, int> variable_counts() const;
  std::map<std::string, int> row_counts() const;
  int binary_count() const;

 private:
  std::unordered_map<std::string, int> index_;
};

// Throws ModelError when the instance requests VM types the parameters do
// not describe.
MilpModel build_model(const NetworkInstance& instance, const ModelParams& params);

}  // namespace ponvirt
