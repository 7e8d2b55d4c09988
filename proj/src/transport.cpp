#include "mpot/transport.hpp"

#include <cmath>
#include <ostream>

namespace mpot {

std::string_view to_string(Method m) noexcept {
  return m == Method::Bipartite ? "bipartite" : "multipartite";
}

FlowChart flow_chart_from_solution(const FlowNetwork& net, const FlowSolution& sol) {
  if (net.kind != NetworkKind::Multipartite) {
    throw Error(ErrorKind::InvalidArgument, "flow charts come from layered networks only");
  }
  const NodeIndexer index(net.shape);
  const int d = net.shape.rank();
  FlowChart flows{net.shape, std::vector<std::vector<FlowEntry<std::int64_t>>>(static_cast<std::size_t>(d))};
  for (int axis = 0; axis < d; ++axis) {
    auto& family = flows.families[static_cast<std::size_t>(axis)];
    for (auto e = net.layer_arc_offsets[static_cast<std::size_t>(axis)];
         e < net.layer_arc_offsets[static_cast<std::size_t>(axis) + 1]; ++e) {
      if (sol.flow[e] == 0) continue;
      const Index head = index.bin(net.heads[e]);
      family.push_back({index.bin(net.tails[e]), net.shape.coord(head, axis), sol.flow[e]});
    }
  }
  return flows;
}

IntegerPlan plan_from_solution(const FlowNetwork& net, const FlowSolution& sol) {
  if (net.kind != NetworkKind::Bipartite) {
    throw Error(ErrorKind::InvalidArgument, "plans come directly from bipartite networks only");
  }
  const Index n = net.shape.size();
  IntegerPlan plan{net.shape, {}};
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    if (sol.flow[e] != 0) plan.entries.push_back({net.tails[e], net.heads[e] - n, sol.flow[e]});
  }
  return plan;
}

TransportPlan to_rational(const IntegerPlan& plan) {
  TransportPlan out{plan.shape, {}};
  out.entries.reserve(plan.entries.size());
  for (const auto& e : plan.entries) out.entries.push_back({e.source, e.target, Rational(e.mass)});
  return out;
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  auto coords = [&](Index bin) {
    std::string s;
    for (int a = 0; a < plan.shape.rank(); ++a) {
      if (a) s += ' ';
      s += std::to_string(plan.shape.coord(bin, a));
    }
    return s;
  };
  out << "source,target,mass\n";
  for (const auto& e : plan.entries) out << coords(e.source) << ',' << coords(e.target) << ',' << e.mass << '\n';
}

DistanceResult optimal_transport(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost,
                                 const TransportOptions& options) {
  const auto net = options.method == Method::Bipartite ? build_bipartite(mu, nu, cost)
                                                       : build_multipartite(mu, nu, cost);
  const auto sol = solve(net, options.solver);
  if (sol.status != SolveStatus::Optimal) throw Error(ErrorKind::Infeasible, "flow network has no feasible flow");

  DistanceResult r;
  r.cost = sol.objective;
  r.total = mu.total();
  r.distance = static_cast<double>(sol.objective) / static_cast<double>(mu.total());
  r.stats = sol.stats;
  r.nodes = net.node_count;
  r.arcs = static_cast<std::int64_t>(net.arc_count());
  if (options.want_plan) {
    r.plan = options.method == Method::Bipartite ? to_rational(plan_from_solution(net, sol))
                                                 : flows_to_plan(flow_chart_from_solution(net, sol));
  }
  return r;
}

DistanceResult wasserstein(const Histogram& mu, const Histogram& nu, int p, const TransportOptions& options) {
  if (!(mu.shape() == nu.shape())) throw Error(ErrorKind::ShapeMismatch, "histograms live on different grids");
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "order p must be >= 1");
  if (!(options.grid_spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  const auto cost = power_cost(mu.shape(), p);
  auto r = optimal_transport(integerize(mu, options.target_total), integerize(nu, options.target_total), cost, options);
  r.distance = options.grid_spacing * std::pow(static_cast<double>(r.cost) / static_cast<double>(r.total), 1.0 / p);
  return r;
}

double emd(const Histogram& mu, const Histogram& nu, const SeparableCost& cost, const TransportOptions& options) {
  if (!(mu.shape() == nu.shape())) throw Error(ErrorKind::ShapeMismatch, "histograms live on different grids");
  const auto r =
      optimal_transport(integerize(mu, options.target_total), integerize(nu, options.target_total), cost, options);
  return static_cast<double>(r.cost) / static_cast<double>(r.total);
}

}  // namespace mpot
