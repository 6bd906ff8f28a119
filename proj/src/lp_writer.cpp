#include "ponvirt/lp_writer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ponvirt/errors.hpp"

namespace ponvirt {

namespace {

constexpr std::size_t kLineWidth = 200;

std::string number(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Appends tokens to `out`, breaking lines before kLineWidth.
class LineWrapper {
 public:
  explicit LineWrapper(std::ostream& out) : out_(out) {}
  void put(const std::string& token) {
    if (width_ > 0 && width_ + token.size() + 1 > kLineWidth) {
      out_ << "\n   ";
      width_ = 3;
    }
    out_ << ' ' << token;
    width_ += token.size() + 1;
  }
  void end() {
    out_ << '\n';
    width_ = 0;
  }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

void put_terms(LineWrapper& w, const MilpModel& m, const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    const double mag = std::abs(t.coef);
    if (t.coef < 0.0) w.put("-");
    else if (!first) w.put("+");
    if (mag != 1.0) w.put(number(mag));
    w.put(m.variables[static_cast<std::size_t>(t.var)].name);
    first = false;
  }
  if (first) w.put("0 " + m.variables.front().name);
}

const char* sense_text(RowSense s) {
  switch (s) {
    case RowSense::Le: return "<=";
    case RowSense::Ge: return ">=";
    case RowSense::Eq: return "=";
  }
  return "=";
}

}  // namespace

ModelFormat parse_model_format(std::string_view text) {
  if (text == "lp") return ModelFormat::Lp;
  if (text == "mps") return ModelFormat::Mps;
  throw ConfigError("unknown model format '" + std::string(text) + "' (expected lp or mps)");
}

void write_lp(const MilpModel& m, std::ostream& out) {
  if (m.variables.empty()) throw ModelError("model has no variables");
  out << "\\ " << m.name << ": " << m.variables.size() << " variables, " << m.rows.size() << " constraints\n";
  out << "Minimize\n";
  LineWrapper w(out);
  w.put("obj:");
  put_terms(w, m, m.objective);
  w.end();
  out << "Subject To\n";
  for (const Row& r : m.rows) {
    w.put(r.name + ":");
    put_terms(w, m, r.terms);
    w.put(sense_text(r.sense));
    w.put(number(r.rhs));
    w.end();
  }
  out << "Bounds\n";
  for (const Variable& v : m.variables) {
    if (v.type == VarType::Binary) continue;
    if (v.lower == 0.0 && std::isinf(v.upper)) continue;
    out << ' ' << number(v.lower) << " <= " << v.name << " <= " << (std::isinf(v.upper) ? "+inf" : number(v.upper))
        << '\n';
  }
  out << "Binary\n";
  for (const Variable& v : m.variables)
    if (v.type == VarType::Binary) {
      w.put(v.name);
    }
  w.end();
  out << "End\n";
}

void write_mps(const MilpModel& m, std::ostream& out) {
  out << "NAME " << m.name << '\n';
  out << "ROWS\n N obj\n";
  for (const Row& r : m.rows) {
    const char s = r.sense == RowSense::Le ? 'L' : r.sense == RowSense::Ge ? 'G' : 'E';
    out << ' ' << s << ' ' << r.name << '\n';
  }
  std::vector<std::vector<std::pair<int, double>>> columns(m.variables.size());
  for (const Term& t : m.objective) columns[static_cast<std::size_t>(t.var)].emplace_back(-1, t.coef);
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (const Term& t : m.rows[i].terms) columns[static_cast<std::size_t>(t.var)].emplace_back(static_cast<int>(i), t.coef);
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < m.variables.size(); ++j) {
    const Variable& v = m.variables[j];
    const bool binary = v.type == VarType::Binary;
    if (binary != in_int) {
      out << " MARKER" << marker++ << " 'MARKER' " << (binary ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = binary;
    }
    if (columns[j].empty()) out << ' ' << v.name << " obj 0\n";
    for (auto [row, coef] : columns[j])
      out << ' ' << v.name << ' ' << (row < 0 ? std::string("obj") : m.rows[static_cast<std::size_t>(row)].name) << ' '
          << number(coef) << '\n';
  }
  if (in_int) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  for (const Row& r : m.rows)
    if (r.rhs != 0.0) out << " rhs " << r.name << ' ' << number(r.rhs) << '\n';
  out << "BOUNDS\n";
  for (const Variable& v : m.variables) {
    if (v.type == VarType::Binary) {
      out << " BV bnd " << v.name << '\n';
      continue;
    }
    if (v.lower != 0.0) out << " LO bnd " << v.name << ' ' << number(v.lower) << '\n';
    if (!std::isinf(v.upper)) out << " UP bnd " << v.name << ' ' << number(v.upper) << '\n';
  }
  out << "ENDATA\n";
}

void write_names_csv(const MilpModel& m, std::ostream& out) {
  out << "name,family,type,lower,upper\n";
  for (const Variable& v : m.variables)
    out << v.name << ',' << v.family << ',' << (v.type == VarType::Binary ? "binary" : "continuous") << ','
        << number(v.lower) << ',' << (std::isinf(v.upper) ? "inf" : number(v.upper)) << '\n';
}

void emit_model(const MilpModel& model, const std::filesystem::path& path, ModelFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == ModelFormat::Lp) write_lp(model, out);
  else write_mps(model, out);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
  auto names_path = path;
  names_path.replace_extension(".names.csv");
  std::ofstream names(names_path);
  if (!names) throw IoError("cannot write " + names_path.string());
  write_names_csv(model, names);
  if (!names) throw IoError("failed writing " + names_path.string());
}

LpStats read_lp_stats(std::istream& in) {
  enum class Section { None, Objective, Constraints, Bounds, Binary, Done };
  Section section = Section::None;
  std::set<std::string> vars, binaries;
  LpStats stats;
  std::string line;
  auto is_number = [](const std::string& t) {
    double x = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    return res.ec == std::errc() && res.ptr == t.data() + t.size();
  };
  auto is_operator = [](const std::string& t) {
    return t == "+" || t == "-" || t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "+inf" ||
           t == "-inf" || t == "inf";
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Minimize") { section = Section::Objective; continue; }
    if (line == "Subject To") { section = Section::Constraints; continue; }
    if (line == "Bounds") { section = Section::Bounds; continue; }
    if (line == "Binary") { section = Section::Binary; continue; }
    if (line == "End") { section = Section::Done; continue; }
    if (section == Section::None || section == Section::Done)
      throw IoError("unexpected LP content outside sections: " + line);
    std::istringstream tokens(line);
    std::string t;
    while (tokens >> t) {
      if (t.back() == ':') {
        if (section == Section::Constraints) ++stats.constraints;
        continue;
      }
      if (is_number(t) || is_operator(t)) continue;
      vars.insert(t);
      if (section == Section::Binary) binaries.insert(t);
    }
  }
  if (section != Section::Done) throw IoError("LP text ends without End");
  stats.variables = static_cast<int>(vars.size());
  stats.binaries = static_cast<int>(binaries.size());
  return stats;
}

}  // namespace ponvirt
