#pragma once

#include <filesystem>
#include <iosfwd>

#include "ponvirt/milp_model.hpp"

namespace ponvirt {

enum class ModelFormat { Lp, Mps };

ModelFormat parse_model_format(std::string_view text);

// CPLEX LP text: Minimize / Subject To / Bounds / Binary / End.
void write_lp(const MilpModel& model, std::ostream& out);
// Free-format MPS with integer markers around binary columns.
void write_mps(const MilpModel& model, std::ostream& out);
// name,family,type,lower,upper: one line per variable in model order.
void write_names_csv(const MilpModel& model, std::ostream& out);

// Writes `path` in the given format plus `<path stem>.names.csv` beside it.
// Throws IoError when a file cannot be written.
void emit_model(const MilpModel& model, const std::filesystem::path& path, ModelFormat format);

struct LpStats {
  int variables = 0;
  int constraints = 0;
  int binaries = 0;
};

// Token-level reader for files produced by write_lp. Throws IoError on
// malformed input.
LpStats read_lp_stats(std::istream& in);

}  // namespace ponvirt
