#include "ponvirt/milp_model.hpp"

#include <deque>

#include "ponvirt/errors.hpp"

namespace ponvirt {

int MilpModel::add_variable(std::string var_name, std::string family, VarType type) {
  const int id = static_cast<int>(variables.size());
  auto [it, inserted] = index_.emplace(var_name, id);
  if (!inserted) throw ModelError("duplicate variable " + var_name);
  Variable v;
  v.name = std::move(var_name);
  v.family = std::move(family);
  v.type = type;
  if (type == VarType::Binary) v.upper = 1.0;
  variables.push_back(std::move(v));
  return id;
}

int MilpModel::find(const std::string& var_name) const {
  auto it = index_.find(var_name);
  return it == index_.end() ? -1 : it->second;
}

std::map<std::string, int> MilpModel::variable_counts() const {
  std::map<std::string, int> counts;
  for (const Variable& v : variables) ++counts[v.family];
  return counts;
}

std::map<std::string, int> MilpModel::row_counts() const {
  std::map<std::string, int> counts;
  for (const Row& r : rows) ++counts[r.family];
  return counts;
}

int MilpModel::binary_count() const {
  int n = 0;
  for (const Variable& v : variables) n += v.type == VarType::Binary;
  return n;
}

namespace {

std::string join(std::string_view prefix, std::initializer_list<long long> parts) {
  std::string s(prefix);
  for (long long p : parts) {
    s += '_';
    s += std::to_string(p);
  }
  return s;
}

// Nodes reachable from `from` along links with allowed[l] set; reverse
// follows links backwards.
std::vector<char> reach(const NetworkInstance& inst, NodeId from, const std::vector<char>& allowed, bool reverse) {
  std::vector<char> seen(inst.num_nodes(), 0);
  std::deque<NodeId> queue{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (LinkId l : reverse ? inst.in_links(x) : inst.out_links(x)) {
      if (!allowed[static_cast<std::size_t>(l)]) continue;
      const NodeId y = reverse ? inst.link(l).src : inst.link(l).dst;
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        queue.push_back(y);
      }
    }
  }
  return seen;
}

// Adds one conservation row per node touched by a commodity's links.
void add_conservation(MilpModel& m, const NetworkInstance& inst, std::string_view family, const std::string& prefix,
                      const std::vector<std::pair<LinkId, int>>& arcs, NodeId source, NodeId sink, int rate_var) {
  std::map<NodeId, std::vector<Term>> by_node;
  by_node[source];
  by_node[sink];
  for (auto [l, var] : arcs) {
    by_node[inst.link(l).src].push_back({var, 1.0});
    by_node[inst.link(l).dst].push_back({var, -1.0});
  }
  for (auto& [x, terms] : by_node) {
    if (x == source) terms.push_back({rate_var, -1.0});
    if (x == sink) terms.push_back({rate_var, 1.0});
    m.rows.push_back(Row{prefix + "_" + std::to_string(x), std::string(family), std::move(terms), RowSense::Eq, 0.0});
  }
}

}  // namespace

MilpModel build_model(const NetworkInstance& inst, const ModelParams& params) {
  params.check(inst.vm_types());
  for (NodeId o : inst.objects()) {
    const int v = inst.vm_request(o);
    if (v < 0 || v >= inst.vm_types())
      throw ModelError("object " + std::to_string(o) + " requests VM type " + std::to_string(v) + " outside 0.." +
                       std::to_string(inst.vm_types() - 1));
  }
  MilpModel m;
  const int types = inst.vm_types();
  const NodeId olt = inst.olt();
  const auto& cands = inst.candidates();
  const std::vector<char> all(inst.num_links(), 1);
  std::vector<char> cand_links(inst.num_links(), 0);
  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    const Link& k = inst.link(static_cast<LinkId>(l));
    cand_links[l] = inst.is_candidate(k.src) && inst.is_candidate(k.dst);
  }

  std::vector<std::vector<int>> iv(inst.num_nodes(), std::vector<int>(static_cast<std::size_t>(types), -1));
  std::vector<int> h(inst.num_nodes(), -1), tw(inst.num_nodes(), -1);
  for (NodeId c : cands) {
    for (int v = 0; v < types; ++v)
      iv[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] = m.add_variable(join("Iv", {c, v}), "Iv", VarType::Binary);
  }
  for (NodeId c : cands) h[static_cast<std::size_t>(c)] = m.add_variable(join("H", {c}), "H", VarType::Binary);
  for (NodeId c : cands) tw[static_cast<std::size_t>(c)] = m.add_variable(join("TW", {c}), "TW");

  std::vector<int> u(inst.num_links(), -1), p(inst.num_links(), -1);
  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    const Link& k = inst.link(static_cast<LinkId>(l));
    u[l] = m.add_variable(join("U", {k.src, k.dst}), "U");
  }
  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    if (!cand_links[l]) continue;
    const Link& k = inst.link(static_cast<LinkId>(l));
    p[l] = m.add_variable(join("P", {k.src, k.dst}), "P");
  }

  std::vector<std::vector<char>> reaches_cand(inst.num_nodes());
  for (NodeId c : cands) reaches_cand[static_cast<std::size_t>(c)] = reach(inst, c, all, true);

  std::vector<std::vector<Term>> uagg(inst.num_links()), pagg(inst.num_links());
  // served[v][c]: xo variables of type-v objects at c.
  std::vector<std::vector<std::vector<Term>>> served(static_cast<std::size_t>(types),
                                                     std::vector<std::vector<Term>>(inst.num_nodes()));
  std::vector<std::vector<Term>> inflow(inst.num_nodes());

  for (NodeId o : inst.objects()) {
    const int v = inst.vm_request(o);
    const int net = inst.node(o).network;
    const auto from_o = reach(inst, o, all, false);
    std::vector<Term> demand;
    for (NodeId c : cands) {
      if (!inst.visible(net, c)) continue;
      const int xo = m.add_variable(join("xo", {o, c}), "xo");
      const int yo = m.add_variable(join("yo", {o, c}), "yo");
      demand.push_back({xo, 1.0});
      served[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)].push_back({xo, 1.0});
      inflow[static_cast<std::size_t>(c)].push_back({yo, 1.0});
      m.rows.push_back(Row{join("split", {o, c}), "split", {{yo, 1.0}, {xo, -1.0}}, RowSense::Eq, 0.0});

      const auto& to_c = reaches_cand[static_cast<std::size_t>(c)];
      std::vector<std::pair<LinkId, int>> arcs;
      for (std::size_t l = 0; l < inst.num_links(); ++l) {
        const Link& k = inst.link(static_cast<LinkId>(l));
        if (!from_o[static_cast<std::size_t>(k.src)] || !to_c[static_cast<std::size_t>(k.dst)]) continue;
        const int var = m.add_variable(join("xu", {o, c, k.src, k.dst}), "xu");
        arcs.emplace_back(static_cast<LinkId>(l), var);
        uagg[l].push_back({var, -1.0});
      }
      add_conservation(m, inst, "ucons", join("ucons", {o, c}), arcs, o, c, yo);
    }
    m.rows.push_back(Row{join("demand", {o}), "demand", std::move(demand), RowSense::Eq, params.demand_bps});
  }

  const double f = params.remaining_fraction();
  const auto to_olt = reach(inst, olt, cand_links, true);
  for (NodeId c : cands) {
    if (c == olt) continue;
    const int pt = m.add_variable(join("pt", {c, olt}), "pt");
    std::vector<Term> reduce{{pt, 1.0}};
    for (const Term& t : inflow[static_cast<std::size_t>(c)]) reduce.push_back({t.var, -f});
    m.rows.push_back(Row{join("reduce", {c, olt}), "reduce", std::move(reduce), RowSense::Eq, 0.0});

    const auto from_c = reach(inst, c, cand_links, false);
    std::vector<std::pair<LinkId, int>> arcs;
    for (std::size_t l = 0; l < inst.num_links(); ++l) {
      if (!cand_links[l]) continue;
      const Link& k = inst.link(static_cast<LinkId>(l));
      if (!from_c[static_cast<std::size_t>(k.src)] || !to_olt[static_cast<std::size_t>(k.dst)]) continue;
      const int var = m.add_variable(join("xp", {c, olt, k.src, k.dst}), "xp");
      arcs.emplace_back(static_cast<LinkId>(l), var);
      pagg[l].push_back({var, -1.0});
    }
    add_conservation(m, inst, "pcons", join("pcons", {c, olt}), arcs, c, olt, pt);
  }

  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    const Link& k = inst.link(static_cast<LinkId>(l));
    auto terms = std::move(uagg[l]);
    terms.insert(terms.begin(), Term{u[l], 1.0});
    m.rows.push_back(Row{join("uagg", {k.src, k.dst}), "uagg", std::move(terms), RowSense::Eq, 0.0});
  }
  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    if (p[l] < 0) continue;
    const Link& k = inst.link(static_cast<LinkId>(l));
    auto terms = std::move(pagg[l]);
    terms.insert(terms.begin(), Term{p[l], 1.0});
    m.rows.push_back(Row{join("pagg", {k.src, k.dst}), "pagg", std::move(terms), RowSense::Eq, 0.0});
  }

  for (int v = 0; v < types; ++v) {
    for (NodeId c : cands) {
      const int i = iv[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)];
      auto lo = served[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
      auto hi = lo;
      lo.push_back({i, -1.0});
      hi.push_back({i, -params.beta});
      m.rows.push_back(Row{join("place_lo", {v, c}), "place_lo", std::move(lo), RowSense::Ge, 0.0});
      m.rows.push_back(Row{join("place_hi", {v, c}), "place_hi", std::move(hi), RowSense::Le, 0.0});
    }
  }
  for (NodeId c : cands) {
    const auto ci = static_cast<std::size_t>(c);
    std::vector<Term> lo, hi, work{{tw[ci], 1.0}};
    for (int v = 0; v < types; ++v) {
      const int i = iv[ci][static_cast<std::size_t>(v)];
      lo.push_back({i, 1.0});
      hi.push_back({i, 1.0});
      const double w = params.workload(v, inst.layer(c));
      if (w != 0.0) work.push_back({i, -w});
    }
    lo.push_back({h[ci], -1.0});
    hi.push_back({h[ci], -params.gamma});
    m.rows.push_back(Row{join("open_lo", {c}), "open_lo", std::move(lo), RowSense::Ge, 0.0});
    m.rows.push_back(Row{join("open_hi", {c}), "open_hi", std::move(hi), RowSense::Le, 0.0});
    m.rows.push_back(Row{join("workload", {c}), "workload", std::move(work), RowSense::Eq, 0.0});
    if (params.capacity_enforced)
      m.rows.push_back(Row{join("capacity", {c}), "capacity", {{tw[ci], 1.0}}, RowSense::Le, 1.0});
  }

  for (NodeId c : cands) {
    const double mp = params.processing.max_power(inst.layer(c));
    if (mp != 0.0) m.objective.push_back({tw[static_cast<std::size_t>(c)], mp});
  }
  for (std::size_t l = 0; l < inst.num_links(); ++l) {
    const double cost = link_cost_per_bit(inst.link(static_cast<LinkId>(l)), inst, params);
    if (cost == 0.0) continue;
    m.objective.push_back({u[l], cost});
    if (p[l] >= 0) m.objective.push_back({p[l], cost});
  }
  return m;
}

}  // namespace ponvirt
