#include "ponvirt/solution_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ponvirt/errors.hpp"

namespace ponvirt {

namespace {

std::string number(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void put(std::ostream& out, const std::string& name, double value) {
  if (value != 0.0) out << name << ' ' << number(value) << '\n';
}

std::string edge(const NetworkInstance& inst, LinkId l) {
  const Link& k = inst.link(l);
  return std::to_string(k.src) + "_" + std::to_string(k.dst);
}

}  // namespace

void write_solution_text(const PlacementSolution& solution, const FlowAssignment& flows,
                         const NetworkInstance& inst, std::ostream& out) {
  const NodeId olt = inst.olt();
  for (NodeId c : inst.candidates())
    for (int v = 0; v < solution.vm_types(); ++v)
      put(out, "Iv_" + std::to_string(c) + "_" + std::to_string(v), solution.is_placed(v, c) ? 1.0 : 0.0);
  for (NodeId c : inst.candidates()) {
    put(out, "H_" + std::to_string(c), solution.cloudlet_open[static_cast<std::size_t>(c)] ? 1.0 : 0.0);
    put(out, "TW_" + std::to_string(c), solution.workload[static_cast<std::size_t>(c)]);
  }
  std::map<std::pair<NodeId, NodeId>, double> share;
  for (const ServiceShare& s : solution.assignment) share[{s.object, s.cloudlet}] += s.rate_bps;
  for (auto [key, rate] : share) {
    const std::string suffix = std::to_string(key.first) + "_" + std::to_string(key.second);
    put(out, "xo_" + suffix, rate);
    put(out, "yo_" + suffix, rate);
  }
  for (const auto& c : flows.unprocessed_commodities)
    for (const PathFlow& p : c.links)
      put(out, "xu_" + std::to_string(c.object) + "_" + std::to_string(c.cloudlet) + "_" + edge(inst, p.link), p.rate_bps);
  for (std::size_t l = 0; l < inst.num_links(); ++l) put(out, "U_" + edge(inst, static_cast<LinkId>(l)), flows.unprocessed[l]);
  for (const auto& c : flows.processed_commodities) {
    const std::string suffix = std::to_string(c.cloudlet) + "_" + std::to_string(olt);
    put(out, "pt_" + suffix, c.rate_bps);
    for (const PathFlow& p : c.links) put(out, "xp_" + suffix + "_" + edge(inst, p.link), p.rate_bps);
  }
  for (std::size_t l = 0; l < inst.num_links(); ++l) put(out, "P_" + edge(inst, static_cast<LinkId>(l)), flows.processed[l]);
}

void write_solution_text(const PlacementSolution& solution, const FlowAssignment& flows,
                         const NetworkInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_solution_text(solution, flows, inst, out);
  if (!out) throw IoError("failed writing " + path.string());
}

ImportedSolution read_solution_text(std::istream& in, const NetworkInstance& inst) {
  ImportedSolution r;
  r.solution = PlacementSolution::empty(inst);
  r.flows = FlowAssignment::zero(inst);
  const auto n = static_cast<long long>(inst.num_nodes());

  auto node_at = [&](long long id, const std::string& name) {
    if (id < 0 || id >= n) throw ValidationError("variable " + name + " names node " + std::to_string(id) + " outside the instance");
    return static_cast<NodeId>(id);
  };
  auto link_at = [&](long long x, long long y, const std::string& name) {
    const auto l = inst.find_link(node_at(x, name), node_at(y, name));
    if (!l) throw ValidationError("variable " + name + " names nonexistent link " + std::to_string(x) + "->" + std::to_string(y));
    return *l;
  };

  std::map<std::pair<NodeId, NodeId>, UnprocessedCommodity> upt;
  std::map<NodeId, ProcessedCommodity> pt;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name, value_text;
    if (!(ls >> name) || name[0] == '#') continue;
    if (!(ls >> value_text)) throw IoError("line " + std::to_string(line_no) + ": missing value for " + name);
    double value = 0.0;
    auto res = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (res.ec != std::errc() || res.ptr != value_text.data() + value_text.size())
      throw IoError("line " + std::to_string(line_no) + ": bad value '" + value_text + "'");

    const auto cut = name.find('_');
    if (cut == std::string::npos) continue;
    const std::string family = name.substr(0, cut);
    std::vector<long long> ids;
    std::istringstream parts(name.substr(cut + 1));
    std::string part;
    bool numeric = true;
    while (std::getline(parts, part, '_')) {
      long long x = 0;
      auto pr = std::from_chars(part.data(), part.data() + part.size(), x);
      if (pr.ec != std::errc() || pr.ptr != part.data() + part.size()) numeric = false;
      ids.push_back(x);
    }
    if (!numeric) continue;
    auto want = [&](std::size_t k) {
      if (ids.size() != k) throw ValidationError("variable " + name + " has " + std::to_string(ids.size()) + " indices, expected " + std::to_string(k));
    };

    if (family == "Iv") {
      want(2);
      const NodeId c = node_at(ids[0], name);
      if (ids[1] < 0 || ids[1] >= inst.vm_types()) throw ValidationError("variable " + name + " names unknown VM type");
      r.solution.placed[static_cast<std::size_t>(ids[1])][static_cast<std::size_t>(c)] = value > 0.5;
    } else if (family == "H") {
      want(1);
      r.solution.cloudlet_open[static_cast<std::size_t>(node_at(ids[0], name))] = value > 0.5;
    } else if (family == "TW") {
      want(1);
      r.solution.workload[static_cast<std::size_t>(node_at(ids[0], name))] = value;
    } else if (family == "xo") {
      want(2);
      const NodeId o = node_at(ids[0], name);
      const NodeId c = node_at(ids[1], name);
      if (inst.layer(o) != Layer::Object) throw ValidationError("variable " + name + " does not start at an object");
      if (value != 0.0) r.solution.assignment.push_back(ServiceShare{o, inst.vm_request(o), c, value});
    } else if (family == "xu") {
      want(4);
      const NodeId o = node_at(ids[0], name);
      const NodeId c = node_at(ids[1], name);
      const LinkId l = link_at(ids[2], ids[3], name);
      auto& com = upt[{o, c}];
      com.object = o;
      com.cloudlet = c;
      if (value != 0.0) com.links.push_back({l, value});
    } else if (family == "yo") {
      want(2);
      const NodeId o = node_at(ids[0], name);
      const NodeId c = node_at(ids[1], name);
      auto& com = upt[{o, c}];
      com.object = o;
      com.cloudlet = c;
      com.rate_bps = value;
    } else if (family == "pt") {
      want(2);
      const NodeId c = node_at(ids[0], name);
      auto& com = pt[c];
      com.cloudlet = c;
      com.olt = node_at(ids[1], name);
      com.rate_bps = value;
    } else if (family == "xp") {
      want(4);
      const NodeId c = node_at(ids[0], name);
      auto& com = pt[c];
      com.cloudlet = c;
      com.olt = node_at(ids[1], name);
      const LinkId l = link_at(ids[2], ids[3], name);
      if (value != 0.0) com.links.push_back({l, value});
    } else if (family == "U") {
      want(2);
      r.flows.unprocessed[static_cast<std::size_t>(link_at(ids[0], ids[1], name))] = value;
    } else if (family == "P") {
      want(2);
      r.flows.processed[static_cast<std::size_t>(link_at(ids[0], ids[1], name))] = value;
    }
  }
  for (auto& [key, com] : upt)
    if (com.rate_bps != 0.0 || !com.links.empty()) r.flows.unprocessed_commodities.push_back(std::move(com));
  for (auto& [key, com] : pt)
    if (com.rate_bps != 0.0 || !com.links.empty()) r.flows.processed_commodities.push_back(std::move(com));
  std::sort(r.solution.assignment.begin(), r.solution.assignment.end(),
            [](const ServiceShare& a, const ServiceShare& b) {
              return std::pair{a.object, a.cloudlet} < std::pair{b.object, b.cloudlet};
            });
  return r;
}

ImportedSolution read_solution_text(const std::filesystem::path& path, const NetworkInstance& inst) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_solution_text(in, inst);
}

}  // namespace ponvirt
