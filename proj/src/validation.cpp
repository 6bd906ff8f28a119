#include "ponvirt/validation.hpp"

#include <cmath>
#include <ostream>
#include <set>

namespace ponvirt {

std::map<std::string, int> ValidationReport::counts() const {
  std::map<std::string, int> c;
  for (const Violation& v : violations) ++c[v.family];
  return c;
}

namespace {

std::string ids(std::initializer_list<long long> parts) {
  std::string s;
  for (long long p : parts) {
    if (!s.empty()) s += '_';
    s += std::to_string(p);
  }
  return s;
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void equal(const char* family, std::string row, double residual, double tol = kFlowTolerance) {
    if (!(std::abs(residual) <= tol)) report_.violations.push_back({family, std::move(row), residual});
  }
  // Row of the form expression >= 0.
  void at_least(const char* family, std::string row, double residual, double tol = kFlowTolerance) {
    if (!(residual >= -tol)) report_.violations.push_back({family, std::move(row), residual});
  }
  void at_most(const char* family, std::string row, double residual, double tol = kFlowTolerance) {
    if (!(residual <= tol)) report_.violations.push_back({family, std::move(row), residual});
  }

 private:
  ValidationReport& report_;
};

bool valid_link(const NetworkInstance& inst, LinkId l) {
  return l >= 0 && static_cast<std::size_t>(l) < inst.num_links();
}

}  // namespace

ValidationReport validate_solution(const PlacementSolution& solution, const FlowAssignment& flows,
                                   const NetworkInstance& inst, const ModelParams& params) {
  ValidationReport report;
  Checker check(report);
  const std::size_t n = inst.num_nodes();
  const std::size_t links = inst.num_links();
  const NodeId olt = inst.olt();
  const int types = inst.vm_types();

  if (solution.vm_types() != types || solution.cloudlet_open.size() != n || solution.workload.size() != n) {
    report.violations.push_back({"shape", "solution", static_cast<double>(solution.vm_types())});
    return report;
  }
  if (flows.unprocessed.size() != links || flows.processed.size() != links) {
    report.violations.push_back({"shape", "flows", static_cast<double>(flows.unprocessed.size())});
    return report;
  }

  // Demand and isolation.
  std::vector<double> demand(n, 0.0);
  std::vector<std::vector<double>> served(static_cast<std::size_t>(types), std::vector<double>(n, 0.0));
  std::map<std::pair<NodeId, NodeId>, double> share_rate;
  for (const ServiceShare& s : solution.assignment) {
    const bool known = s.object >= 0 && static_cast<std::size_t>(s.object) < n && s.cloudlet >= 0 &&
                       static_cast<std::size_t>(s.cloudlet) < n;
    if (!known || inst.layer(s.object) != Layer::Object || !inst.is_candidate(s.cloudlet)) {
      report.violations.push_back({"isolation", ids({s.object, s.cloudlet}), s.rate_bps});
      continue;
    }
    check.at_least("bounds", "xo_" + ids({s.object, s.cloudlet}), s.rate_bps);
    if (!inst.visible(inst.node(s.object).network, s.cloudlet))
      report.violations.push_back({"isolation", ids({s.object, s.cloudlet}), s.rate_bps});
    if (s.vm_type != inst.vm_request(s.object))
      report.violations.push_back({"demand", ids({s.object}) + "_type", static_cast<double>(s.vm_type)});
    demand[static_cast<std::size_t>(s.object)] += s.rate_bps;
    if (s.vm_type >= 0 && s.vm_type < types)
      served[static_cast<std::size_t>(s.vm_type)][static_cast<std::size_t>(s.cloudlet)] += s.rate_bps;
    share_rate[{s.object, s.cloudlet}] += s.rate_bps;
  }
  for (NodeId o : inst.objects())
    check.equal("demand", ids({o}), demand[static_cast<std::size_t>(o)] - params.demand_bps);

  // Unprocessed commodities: split, conservation, aggregation.
  std::map<std::pair<NodeId, NodeId>, const UnprocessedCommodity*> upt;
  for (const auto& c : flows.unprocessed_commodities) upt[{c.object, c.cloudlet}] = &c;
  std::vector<double> inflow(n, 0.0);
  std::vector<double> u_sum(links, 0.0);
  std::set<std::pair<NodeId, NodeId>> keys;
  for (const auto& [k, r] : share_rate) keys.insert(k);
  for (const auto& [k, c] : upt) keys.insert(k);
  for (const auto& key : keys) {
    const auto [o, c] = key;
    const auto it = upt.find(key);
    const UnprocessedCommodity* com = it == upt.end() ? nullptr : it->second;
    const auto sr = share_rate.find(key);
    const double xo = sr == share_rate.end() ? 0.0 : sr->second;
    const double yo = com ? com->rate_bps : 0.0;
    check.equal("split", ids({o, c}), yo - xo);
    if (c >= 0 && static_cast<std::size_t>(c) < n) inflow[static_cast<std::size_t>(c)] += yo;
    std::map<NodeId, double> net;
    net[o] -= yo;
    net[c] += yo;
    if (com) {
      for (const PathFlow& p : com->links) {
        if (!valid_link(inst, p.link)) {
          report.violations.push_back({"ucons", ids({o, c}) + "_link" + std::to_string(p.link), p.rate_bps});
          continue;
        }
        check.at_least("bounds", "xu_" + ids({o, c, p.link}), p.rate_bps);
        const Link& k = inst.link(p.link);
        net[k.src] += p.rate_bps;
        net[k.dst] -= p.rate_bps;
        u_sum[static_cast<std::size_t>(p.link)] += p.rate_bps;
      }
    }
    for (const auto& [x, residual] : net) check.equal("ucons", ids({o, c, x}), residual);
  }
  for (std::size_t l = 0; l < links; ++l) {
    const Link& k = inst.link(static_cast<LinkId>(l));
    check.at_least("bounds", "U_" + ids({k.src, k.dst}), flows.unprocessed[l]);
    check.equal("uagg", ids({k.src, k.dst}), flows.unprocessed[l] - u_sum[l]);
  }

  // Processed commodities: reduction, conservation, aggregation.
  const double f = params.remaining_fraction();
  std::vector<double> pt(n, 0.0);
  std::vector<double> p_sum(links, 0.0);
  std::map<NodeId, const ProcessedCommodity*> ptc;
  for (const auto& c : flows.processed_commodities) {
    if (c.cloudlet < 0 || static_cast<std::size_t>(c.cloudlet) >= n || c.cloudlet == olt || c.olt != olt ||
        !inst.is_candidate(c.cloudlet)) {
      report.violations.push_back({"reduce", ids({c.cloudlet, c.olt}), c.rate_bps});
      continue;
    }
    ptc[c.cloudlet] = &c;
    pt[static_cast<std::size_t>(c.cloudlet)] += c.rate_bps;
  }
  for (NodeId c : inst.candidates()) {
    if (c == olt) continue;
    check.equal("reduce", ids({c, olt}), pt[static_cast<std::size_t>(c)] - f * inflow[static_cast<std::size_t>(c)]);
    const auto it = ptc.find(c);
    const double rate = it == ptc.end() ? 0.0 : it->second->rate_bps;
    std::map<NodeId, double> net;
    net[c] -= rate;
    net[olt] += rate;
    if (it != ptc.end()) {
      for (const PathFlow& p : it->second->links) {
        if (!valid_link(inst, p.link)) {
          report.violations.push_back({"pcons", ids({c, olt}) + "_link" + std::to_string(p.link), p.rate_bps});
          continue;
        }
        check.at_least("bounds", "xp_" + ids({c, olt, p.link}), p.rate_bps);
        const Link& k = inst.link(p.link);
        if (!inst.is_candidate(k.src) || !inst.is_candidate(k.dst))
          report.violations.push_back({"pcons", ids({c, olt, k.src, k.dst}), p.rate_bps});
        net[k.src] += p.rate_bps;
        net[k.dst] -= p.rate_bps;
        p_sum[static_cast<std::size_t>(p.link)] += p.rate_bps;
      }
    }
    for (const auto& [x, residual] : net) check.equal("pcons", ids({c, olt, x}), residual);
  }
  for (std::size_t l = 0; l < links; ++l) {
    const Link& k = inst.link(static_cast<LinkId>(l));
    check.at_least("bounds", "P_" + ids({k.src, k.dst}), flows.processed[l]);
    check.equal("pagg", ids({k.src, k.dst}), flows.processed[l] - p_sum[l]);
  }

  // Placement, cloudlets, workloads.
  for (int v = 0; v < types; ++v) {
    for (std::size_t x = 0; x < n; ++x) {
      const double i = solution.placed[static_cast<std::size_t>(v)][x] ? 1.0 : 0.0;
      const double s = served[static_cast<std::size_t>(v)][x];
      if (!inst.is_candidate(static_cast<NodeId>(x))) {
        if (i != 0.0) report.violations.push_back({"placement", ids({v, static_cast<long long>(x)}), i});
        continue;
      }
      check.at_least("place_lo", ids({v, static_cast<long long>(x)}), s - i);
      check.at_most("place_hi", ids({v, static_cast<long long>(x)}), s - params.beta * i);
    }
  }
  for (NodeId c : inst.candidates()) {
    const auto ci = static_cast<std::size_t>(c);
    double count = 0.0;
    double tw = 0.0;
    for (int v = 0; v < types; ++v) {
      if (!solution.placed[static_cast<std::size_t>(v)][ci]) continue;
      count += 1.0;
      tw += params.workload(v, inst.layer(c));
    }
    const double h = solution.cloudlet_open[ci] ? 1.0 : 0.0;
    check.at_least("open_lo", ids({c}), count - h, 0.0);
    check.at_most("open_hi", ids({c}), count - params.gamma * h, 0.0);
    check.equal("workload", ids({c}), solution.workload[ci] - tw, 1e-9);
    if (params.capacity_enforced) check.at_most("capacity", ids({c}), solution.workload[ci] - 1.0, 1e-9);
  }

  LayerValues processing{};
  for (NodeId c : inst.candidates()) {
    const Layer layer = inst.layer(c);
    processing[index(layer)] += solution.workload[static_cast<std::size_t>(c)] * params.processing.max_power(layer);
  }
  report.objective = combine_report(processing, traffic_power(flows, inst, params), params);
  return report;
}

void write_validation_csv(const ValidationReport& report, std::ostream& out) {
  const auto old = out.precision(17);
  out << "constraint_family,row_id,residual\n";
  for (const Violation& v : report.violations) out << v.family << ',' << v.row_id << ',' << v.residual << '\n';
  out.precision(old);
}

}  // namespace ponvirt
