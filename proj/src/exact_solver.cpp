#include "ponvirt/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>

#include "ponvirt/errors.hpp"
#include "ponvirt/routing.hpp"

namespace ponvirt {
namespace {

constexpr double kCapacityTol = 1e-9;

double tie_tol(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

// One way to host a single VM type inside one network: the instances it
// opens there and where each requesting object is served.
struct TypeConfig {
  double cost = 0.0;
  std::vector<char> open;        // parallel to the network's candidates
  std::vector<NodeId> target;    // parallel to the network's clients of the type
};

bool lex_less(const std::vector<char>& a, const std::vector<char>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class ExactSearch {
 public:
  ExactSearch(const NetworkInstance& instance, const ModelParams& params, const SearchLimits& limits)
      : inst_(instance),
        params_(params),
        limits_(limits),
        routes_(instance, params, PathRule::Cheapest),
        types_(instance.vm_types()),
        nets_(instance.networks()),
        olt_(instance.olt()) {
    cands_.resize(static_cast<std::size_t>(nets_));
    for (NodeId c : instance.candidates()) {
      const int n = instance.node(c).network;
      if (n != kNoNetwork) cands_[static_cast<std::size_t>(n)].push_back(c);
    }
    clients_.assign(static_cast<std::size_t>(nets_), std::vector<std::vector<NodeId>>(static_cast<std::size_t>(types_)));
    if (params.demand_bps > 0.0) {
      for (NodeId o : instance.objects()) {
        const int v = instance.vm_request(o);
        if (v < 0 || v >= types_) throw ModelError("object " + std::to_string(o) + " requests unknown VM type");
        clients_[static_cast<std::size_t>(instance.node(o).network)][static_cast<std::size_t>(v)].push_back(o);
      }
    }
    serve_.assign(instance.num_nodes(), {});
    for (NodeId o : instance.objects()) {
      auto& row = serve_[static_cast<std::size_t>(o)];
      row.assign(instance.num_nodes(), kUnreachable);
      for (NodeId c : instance.candidates())
        if (instance.visible(instance.node(o).network, c)) row[static_cast<std::size_t>(c)] = routes_.service_cost(o, c, params);
    }
  }

  ExactResult run() {
    std::vector<int> demanded;
    for (int v = 0; v < types_; ++v) {
      bool any = false;
      for (int n = 0; n < nets_; ++n) any = any || !clients(n, v).empty();
      if (any) demanded.push_back(v);
    }
    if (demanded.size() > 20) throw ResourceError("too many requested VM types for the exact engine");

    struct Choice {
      double bound;
      std::uint32_t mask;
    };
    std::vector<Choice> choices;
    for (std::uint32_t mask = 0; mask < (1u << demanded.size()); ++mask) {
      double olt_load = 0.0;
      double bound = 0.0;
      bool feasible = true;
      for (std::size_t i = 0; i < demanded.size() && feasible; ++i) {
        const int v = demanded[i];
        const bool at_olt = (mask >> i) & 1u;
        if (at_olt) {
          olt_load += workload(v, olt_);
          bound += vm_power(v, olt_);
        }
        for (int n = 0; n < nets_ && feasible; ++n) {
          const auto opt = optimum(n, v, at_olt);
          if (!opt) feasible = false;
          else bound += *opt;
        }
      }
      if (params_.capacity_enforced && olt_load > 1.0 + kCapacityTol) feasible = false;
      if (feasible) choices.push_back({bound, mask});
    }
    std::stable_sort(choices.begin(), choices.end(),
                     [](const Choice& a, const Choice& b) { return a.bound < b.bound; });

    std::optional<double> best;
    std::vector<char> best_bits;
    std::vector<std::vector<TypeConfig>> best_configs;  // [network][type]
    for (const Choice& choice : choices) {
      if (best && choice.bound > *best + tie_tol(*best)) break;
      std::vector<char> olt_types(static_cast<std::size_t>(types_), 0);
      double total = 0.0;
      for (std::size_t i = 0; i < demanded.size(); ++i) {
        if ((choice.mask >> i) & 1u) {
          olt_types[static_cast<std::size_t>(demanded[i])] = 1;
          total += vm_power(demanded[i], olt_);
        }
      }
      std::vector<std::vector<TypeConfig>> configs(static_cast<std::size_t>(nets_));
      bool feasible = true;
      for (int n = 0; n < nets_ && feasible; ++n) {
        auto sub = solve_network(n, olt_types);
        if (!sub) {
          feasible = false;
          break;
        }
        total += sub->first;
        configs[static_cast<std::size_t>(n)] = std::move(sub->second);
      }
      if (!feasible) continue;
      // An OLT instance nobody uses breaks the placement rule; the same
      // choice without it is cheaper or equal and is examined separately.
      bool olt_used_ok = true;
      for (int v = 0; v < types_; ++v) {
        if (!olt_types[static_cast<std::size_t>(v)]) continue;
        bool used = false;
        for (int n = 0; n < nets_; ++n)
          for (NodeId t : configs[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)].target) used = used || t == olt_;
        olt_used_ok = olt_used_ok && used;
      }
      if (!olt_used_ok) continue;
      std::vector<char> bits = global_bits(configs, olt_types);
      const bool better = !best || total < *best - tie_tol(*best) ||
                          (std::abs(total - *best) <= tie_tol(*best) && lex_less(bits, best_bits));
      if (better) {
        best = total;
        best_bits = std::move(bits);
        best_configs = std::move(configs);
      }
    }

    if (!best) throw InfeasibleError(infeasibility_message(demanded));
    return assemble(*best, best_bits, best_configs);
  }

 private:
  const std::vector<NodeId>& clients(int n, int v) const {
    return clients_[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)];
  }
  double serve(NodeId o, NodeId c) const {
    return serve_[static_cast<std::size_t>(o)][static_cast<std::size_t>(c)];
  }
  double workload(int v, NodeId c) const { return params_.workload(v, inst_.layer(c)); }
  double vm_power(int v, NodeId c) const { return params_.vm_power(v, inst_.layer(c)); }
  bool fits_alone(int v, NodeId c) const {
    return !params_.capacity_enforced || workload(v, c) <= 1.0 + kCapacityTol;
  }

  void tick() {
    if (++nodes_ > limits_.max_nodes)
      throw ResourceError("exact search exceeded " + std::to_string(limits_.max_nodes) +
                          " nodes; use a reduced instance, the heuristic, or export the model");
  }

  // Branch and bound over the candidates of network `n` for type `v`. The
  // bound is the opened instances' power plus every object's cheapest
  // service among candidates not yet closed, plus the cheapest instance
  // still needed when nothing can serve the network yet. With `optimize`,
  // the threshold tightens to the best leaf and only the optimum is kept;
  // otherwise every configuration within the threshold is collected.
  std::vector<TypeConfig> enumerate(int n, int v, bool olt_available, double threshold, bool optimize) {
    const auto& cs = cands_[static_cast<std::size_t>(n)];
    const auto& objs = clients(n, v);
    std::vector<TypeConfig> out;
    if (objs.empty()) {
      out.push_back(TypeConfig{0.0, std::vector<char>(cs.size(), 0), {}});
      return out;
    }
    // Branching order: most attractive candidates first.
    std::vector<std::size_t> order;
    std::vector<double> score(cs.size(), 0.0);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (!fits_alone(v, cs[k])) continue;
      order.push_back(k);
      score[k] = vm_power(v, cs[k]);
      for (NodeId o : objs) score[k] += serve(o, cs[k]);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

    enum State : char { Free, Open, Closed };
    std::vector<char> state(cs.size(), Closed);
    for (std::size_t k : order) state[k] = Free;

    const double olt_cost_flag = olt_available ? 0.0 : kUnreachable;
    auto bound_of = [&](double open_cost, bool& feasible) {
      double routing = 0.0;
      feasible = true;
      for (NodeId o : objs) {
        double m = olt_available ? serve(o, olt_) : kUnreachable;
        for (std::size_t k : order)
          if (state[k] != Closed) m = std::min(m, serve(o, cs[k]));
        if (m == kUnreachable) {
          feasible = false;
          return kUnreachable;
        }
        routing += m;
      }
      double extra = 0.0;
      bool any_open = false;
      for (std::size_t k : order) any_open = any_open || state[k] == Open;
      if (!any_open && olt_cost_flag == kUnreachable) {
        double m = kUnreachable;
        for (std::size_t k : order)
          if (state[k] == Free) m = std::min(m, vm_power(v, cs[k]));
        if (m == kUnreachable) {
          feasible = false;
          return kUnreachable;
        }
        extra = m;
      }
      return open_cost + routing + extra;
    };

    auto leaf = [&](double open_cost) {
      TypeConfig cfg;
      cfg.open.assign(cs.size(), 0);
      cfg.target.reserve(objs.size());
      std::vector<char> used(cs.size(), 0);
      double routing = 0.0;
      for (NodeId o : objs) {
        NodeId best_node = -1;
        double best_cost = kUnreachable;
        std::size_t best_k = cs.size();
        for (std::size_t k = 0; k < cs.size(); ++k) {
          if (state[k] != Open) continue;
          const double c = serve(o, cs[k]);
          if (c < best_cost || (c == best_cost && cs[k] < best_node)) {
            best_cost = c;
            best_node = cs[k];
            best_k = k;
          }
        }
        if (olt_available) {
          const double c = serve(o, olt_);
          if (c < best_cost) {
            best_cost = c;
            best_node = olt_;
            best_k = cs.size();
          }
        }
        if (best_node < 0 || best_cost == kUnreachable) return std::optional<TypeConfig>{};
        if (best_k < cs.size()) used[best_k] = 1;
        routing += best_cost;
        cfg.target.push_back(best_node);
      }
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (state[k] == Open && !used[k]) return std::optional<TypeConfig>{};
        cfg.open[k] = state[k] == Open;
      }
      cfg.cost = open_cost + routing;
      return std::optional<TypeConfig>{std::move(cfg)};
    };

    auto dfs = [&](auto&& self, std::size_t depth, double open_cost) -> void {
      tick();
      bool feasible = true;
      const double bound = bound_of(open_cost, feasible);
      if (!feasible || bound > threshold + tie_tol(threshold)) return;
      if (depth == order.size()) {
        auto cfg = leaf(open_cost);
        if (!cfg || cfg->cost > threshold + tie_tol(threshold)) return;
        if (optimize) {
          if (out.empty() || cfg->cost < out[0].cost - tie_tol(out[0].cost) ||
              (std::abs(cfg->cost - out[0].cost) <= tie_tol(out[0].cost) && lex_less(cfg->open, out[0].open))) {
            out.assign(1, std::move(*cfg));
            threshold = std::min(threshold, out[0].cost);
          }
        } else {
          out.push_back(std::move(*cfg));
        }
        return;
      }
      const std::size_t k = order[depth];
      state[k] = Open;
      self(self, depth + 1, open_cost + vm_power(v, cs[k]));
      state[k] = Closed;
      self(self, depth + 1, open_cost);
      state[k] = Free;
    };
    dfs(dfs, 0, 0.0);
    std::stable_sort(out.begin(), out.end(), [](const TypeConfig& a, const TypeConfig& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return lex_less(a.open, b.open);
    });
    return out;
  }

  using Key = std::tuple<int, int, bool>;

  std::optional<double> optimum(int n, int v, bool olt_available) {
    const Key key{n, v, olt_available};
    auto it = optimum_.find(key);
    if (it == optimum_.end()) {
      auto best = enumerate(n, v, olt_available, kUnreachable, true);
      std::optional<double> value;
      if (!best.empty()) value = best[0].cost;
      it = optimum_.emplace(key, value).first;
    }
    return it->second;
  }

  const std::vector<TypeConfig>& configs_within(int n, int v, bool olt_available, double threshold) {
    const Key key{n, v, olt_available};
    auto it = configs_.find(key);
    if (it == configs_.end() || it->second.first < threshold) {
      auto list = enumerate(n, v, olt_available, threshold, false);
      it = configs_.insert_or_assign(key, std::pair{threshold, std::move(list)}).first;
    }
    return it->second.second;
  }

  // Best combination of per-type configurations for network `n` under the
  // capacity limit, given which types the OLT hosts.
  std::optional<std::pair<double, std::vector<TypeConfig>>> solve_network(int n, const std::vector<char>& olt_types) {
    const auto& cs = cands_[static_cast<std::size_t>(n)];
    std::vector<double> opt(static_cast<std::size_t>(types_), 0.0);
    double sum_opt = 0.0;
    double cap = 1.0;
    for (int v = 0; v < types_; ++v) {
      const bool flag = olt_types[static_cast<std::size_t>(v)];
      const auto o = optimum(n, v, flag);
      if (!o) return std::nullopt;
      opt[static_cast<std::size_t>(v)] = *o;
      sum_opt += *o;
      for (NodeId c : cs) cap += vm_power(v, c);
      for (NodeId obj : clients(n, v)) {
        double worst = 0.0;
        for (NodeId c : cs)
          if (serve(obj, c) < kUnreachable) worst = std::max(worst, serve(obj, c));
        if (flag) worst = std::max(worst, serve(obj, olt_));
        cap += worst;
      }
    }
    std::vector<double> rest(static_cast<std::size_t>(types_) + 1, 0.0);
    for (int v = types_ - 1; v >= 0; --v) rest[static_cast<std::size_t>(v)] = rest[static_cast<std::size_t>(v) + 1] + opt[static_cast<std::size_t>(v)];

    double slack = std::max(1e-9 * sum_opt, 1e-12);
    while (true) {
      std::vector<const std::vector<TypeConfig>*> lists;
      for (int v = 0; v < types_; ++v)
        lists.push_back(&configs_within(n, v, olt_types[static_cast<std::size_t>(v)], opt[static_cast<std::size_t>(v)] + slack));

      double ub = sum_opt + slack;
      std::optional<double> best;
      std::vector<char> best_bits;
      std::vector<std::size_t> pick(static_cast<std::size_t>(types_), 0), best_pick;
      std::vector<double> load(cs.size(), 0.0);

      auto combine = [&](auto&& self, int v, double running) -> void {
        tick();
        if (v == types_) {
          std::vector<char> bits;
          bits.reserve(static_cast<std::size_t>(types_) * cs.size());
          for (int t = 0; t < types_; ++t) {
            const auto& open = (*lists[static_cast<std::size_t>(t)])[pick[static_cast<std::size_t>(t)]].open;
            bits.insert(bits.end(), open.begin(), open.end());
          }
          const bool better = !best || running < *best - tie_tol(*best) ||
                              (std::abs(running - *best) <= tie_tol(*best) && lex_less(bits, best_bits));
          if (better) {
            best = running;
            best_bits = std::move(bits);
            best_pick = pick;
            ub = std::min(ub, running);
          }
          return;
        }
        const auto& list = *lists[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < list.size(); ++i) {
          const TypeConfig& cfg = list[i];
          if (running + cfg.cost + rest[static_cast<std::size_t>(v) + 1] > ub + tie_tol(ub)) break;
          bool fits = true;
          if (params_.capacity_enforced) {
            for (std::size_t k = 0; k < cs.size() && fits; ++k)
              if (cfg.open[k] && load[k] + workload(v, cs[k]) > 1.0 + kCapacityTol) fits = false;
          }
          if (!fits) continue;
          for (std::size_t k = 0; k < cs.size(); ++k)
            if (cfg.open[k]) load[k] += workload(v, cs[k]);
          pick[static_cast<std::size_t>(v)] = i;
          self(self, v + 1, running + cfg.cost);
          for (std::size_t k = 0; k < cs.size(); ++k)
            if (cfg.open[k]) load[k] -= workload(v, cs[k]);
        }
      };
      combine(combine, 0, 0.0);

      if (best) {
        std::vector<TypeConfig> chosen;
        for (int v = 0; v < types_; ++v)
          chosen.push_back((*lists[static_cast<std::size_t>(v)])[best_pick[static_cast<std::size_t>(v)]]);
        return std::pair{*best, std::move(chosen)};
      }
      if (slack >= cap) return std::nullopt;
      slack *= 16.0;
    }
  }

  std::vector<char> global_bits(const std::vector<std::vector<TypeConfig>>& configs,
                                const std::vector<char>& olt_types) const {
    const auto& all = inst_.candidates();
    std::vector<char> bits(static_cast<std::size_t>(types_) * all.size(), 0);
    for (int v = 0; v < types_; ++v) {
      std::size_t base = static_cast<std::size_t>(v) * all.size();
      for (std::size_t i = 0; i < all.size(); ++i) {
        const NodeId c = all[i];
        const int n = inst_.node(c).network;
        if (n == kNoNetwork) {
          bits[base + i] = olt_types[static_cast<std::size_t>(v)];
          continue;
        }
        const auto& cs = cands_[static_cast<std::size_t>(n)];
        const auto k = static_cast<std::size_t>(std::lower_bound(cs.begin(), cs.end(), c) - cs.begin());
        bits[base + i] = configs[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)].open[k];
      }
    }
    return bits;
  }

  std::string infeasibility_message(const std::vector<int>& demanded) {
    std::vector<int> binding;
    for (int v : demanded) {
      bool alone = fits_alone(v, olt_);
      for (int n = 0; n < nets_; ++n) {
        if (clients(n, v).empty()) continue;
        bool any = false;
        for (NodeId c : cands_[static_cast<std::size_t>(n)]) any = any || fits_alone(v, c);
        alone = alone || any;
      }
      if (!alone) binding.push_back(v);
    }
    if (binding.empty()) binding = demanded;
    std::ostringstream msg;
    msg << "no capacity-feasible placement for VM types";
    for (int v : binding) msg << ' ' << v;
    return msg.str();
  }

  ExactResult assemble(double total, const std::vector<char>& bits,
                       const std::vector<std::vector<TypeConfig>>& configs) {
    ExactResult r;
    r.solution = PlacementSolution::empty(inst_);
    const auto& all = inst_.candidates();
    for (int v = 0; v < types_; ++v)
      for (std::size_t i = 0; i < all.size(); ++i)
        r.solution.placed[static_cast<std::size_t>(v)][static_cast<std::size_t>(all[i])] =
            bits[static_cast<std::size_t>(v) * all.size() + i];
    for (int n = 0; n < nets_; ++n) {
      for (int v = 0; v < types_; ++v) {
        const auto& objs = clients(n, v);
        const auto& cfg = configs[static_cast<std::size_t>(n)][static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < objs.size(); ++i)
          r.solution.assignment.push_back(ServiceShare{objs[i], v, cfg.target[i], params_.demand_bps});
      }
    }
    std::sort(r.solution.assignment.begin(), r.solution.assignment.end(),
              [](const ServiceShare& a, const ServiceShare& b) { return a.object < b.object; });
    update_workloads(r.solution, inst_, params_);
    r.flows = build_flows(inst_, params_, routes_, r.solution.assignment);
    r.report = total_objective(r.solution, r.flows, inst_, params_);
    r.search_objective_w = total;
    r.nodes_explored = nodes_;
    return r;
  }

  const NetworkInstance& inst_;
  const ModelParams& params_;
  SearchLimits limits_;
  RouteTable routes_;
  int types_;
  int nets_;
  NodeId olt_;
  std::vector<std::vector<NodeId>> cands_;
  std::vector<std::vector<std::vector<NodeId>>> clients_;
  std::vector<std::vector<double>> serve_;
  std::map<Key, std::optional<double>> optimum_;
  std::map<Key, std::pair<double, std::vector<TypeConfig>>> configs_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExactResult solve_exact(const NetworkInstance& instance, const ModelParams& params, const SearchLimits& limits) {
  params.check(instance.vm_types());
  ExactSearch search(instance, params, limits);
  return search.run();
}

}  // namespace ponvirt
