#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mpot/cost.hpp"
#include "mpot/error.hpp"
#include "mpot/flow_network.hpp"
#include "mpot/histogram.hpp"
#include "mpot/network_simplex.hpp"

namespace mpot {

using Rational = boost::multiprecision::cpp_rational;

template <typename Mass>
struct PlanEntry {
  Index source;
  Index target;
  Mass mass;
};

/// Sparse coupling between two histograms on the same grid.
template <typename Mass>
struct BasicTransportPlan {
  GridShape shape;
  std::vector<PlanEntry<Mass>> entries;
};

using TransportPlan = BasicTransportPlan<Rational>;
using IntegerPlan = BasicTransportPlan<std::int64_t>;

/// One arc of a flow family: mass moving from bin `from` of layer i-1 to the
/// bin obtained by setting coordinate i of `from` to `to`.
template <typename Mass>
struct FlowEntry {
  Index from;
  Index to;
  Mass value;
};

/// Per-axis flow families; family i moves mass along axis i only.
template <typename Mass>
struct BasicFlowChart {
  GridShape shape;
  std::vector<std::vector<FlowEntry<Mass>>> families;
};

using FlowChart = BasicFlowChart<std::int64_t>;

// ---------------------------------------------------------------------------
// Marginals and costs

template <typename Mass>
std::vector<Mass> source_marginal(const BasicTransportPlan<Mass>& plan) {
  std::vector<Mass> m(static_cast<std::size_t>(plan.shape.size()), Mass(0));
  for (const auto& e : plan.entries) m[static_cast<std::size_t>(e.source)] += e.mass;
  return m;
}

template <typename Mass>
std::vector<Mass> target_marginal(const BasicTransportPlan<Mass>& plan) {
  std::vector<Mass> m(static_cast<std::size_t>(plan.shape.size()), Mass(0));
  for (const auto& e : plan.entries) m[static_cast<std::size_t>(e.target)] += e.mass;
  return m;
}

template <typename Mass>
Mass plan_cost(const BasicTransportPlan<Mass>& plan, const SeparableCost& cost) {
  Mass total(0);
  for (const auto& e : plan.entries) total += Mass(ground_cost(cost, e.source, e.target)) * e.mass;
  return total;
}

/// Mass leaving each source bin (first family).
template <typename Mass>
std::vector<Mass> source_marginal(const BasicFlowChart<Mass>& flows) {
  std::vector<Mass> m(static_cast<std::size_t>(flows.shape.size()), Mass(0));
  if (flows.families.empty()) return m;
  for (const auto& e : flows.families.front()) m[static_cast<std::size_t>(e.from)] += e.value;
  return m;
}

/// Mass arriving at each target bin (last family).
template <typename Mass>
std::vector<Mass> target_marginal(const BasicFlowChart<Mass>& flows) {
  std::vector<Mass> m(static_cast<std::size_t>(flows.shape.size()), Mass(0));
  if (flows.families.empty()) return m;
  const int axis = static_cast<int>(flows.families.size()) - 1;
  for (const auto& e : flows.families.back()) {
    m[static_cast<std::size_t>(flows.shape.with_coord(e.from, axis, e.to))] += e.value;
  }
  return m;
}

/// Sum over families of table_i(a_i, b_i) times the flow value.
template <typename Mass>
Mass flow_cost(const BasicFlowChart<Mass>& flows, const SeparableCost& cost) {
  if (!(flows.shape == cost.shape())) throw Error(ErrorKind::ShapeMismatch, "flow chart and cost grids differ");
  Mass total(0);
  for (std::size_t i = 0; i < flows.families.size(); ++i) {
    const int axis = static_cast<int>(i);
    for (const auto& e : flows.families[i]) {
      total += Mass(cost(axis, flows.shape.coord(e.from, axis), e.to)) * e.value;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Plan <-> flow chart

namespace detail {

template <typename Mass>
void canonicalize(std::vector<FlowEntry<Mass>>& family) {
  std::sort(family.begin(), family.end(),
            [](const auto& a, const auto& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  std::size_t out = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (out > 0 && family[out - 1].from == family[k].from && family[out - 1].to == family[k].to) {
      family[out - 1].value += family[k].value;
    } else {
      family[out++] = family[k];
    }
  }
  family.resize(out);
  std::erase_if(family, [](const auto& e) { return e.value == Mass(0); });
}

template <typename Mass>
void check_flow_chart(const BasicFlowChart<Mass>& flows) {
  const auto& shape = flows.shape;
  if (static_cast<int>(flows.families.size()) != shape.rank()) {
    throw Error(ErrorKind::InconsistentFlows, "flow chart needs one family per axis");
  }
  for (std::size_t i = 0; i < flows.families.size(); ++i) {
    const Index len = shape.dim(static_cast<int>(i));
    for (const auto& e : flows.families[i]) {
      if (e.from < 0 || e.from >= shape.size() || e.to < 0 || e.to >= len) {
        throw Error(ErrorKind::IndexOutOfRange, "flow entry outside the grid in family " + std::to_string(i));
      }
      if (e.value < Mass(0)) throw Error(ErrorKind::InconsistentFlows, "negative flow value");
    }
  }
  // connection conditions: what family i delivers to a node leaves it in family i+1
  const auto n = static_cast<std::size_t>(shape.size());
  for (std::size_t i = 0; i + 1 < flows.families.size(); ++i) {
    std::vector<Mass> balance(n, Mass(0));
    for (const auto& e : flows.families[i]) {
      balance[static_cast<std::size_t>(shape.with_coord(e.from, static_cast<int>(i), e.to))] += e.value;
    }
    for (const auto& e : flows.families[i + 1]) balance[static_cast<std::size_t>(e.from)] -= e.value;
    for (std::size_t z = 0; z < n; ++z) {
      if (balance[z] != Mass(0)) {
        throw Error(ErrorKind::InconsistentFlows, "connection condition fails between families " + std::to_string(i) +
                                                      " and " + std::to_string(i + 1) + " at bin " + std::to_string(z));
      }
    }
  }
}

}  // namespace detail

/// Marginalizes a coupling onto the per-axis flow families: family i sums the
/// plan over source coordinates before i and target coordinates after i.
template <typename Mass>
BasicFlowChart<Mass> plan_to_flows(const BasicTransportPlan<Mass>& plan) {
  const auto& shape = plan.shape;
  const int d = shape.rank();
  BasicFlowChart<Mass> flows{shape, std::vector<std::vector<FlowEntry<Mass>>>(static_cast<std::size_t>(d))};
  for (const auto& e : plan.entries) {
    if (e.source < 0 || e.source >= shape.size() || e.target < 0 || e.target >= shape.size()) {
      throw Error(ErrorKind::InvalidPlan, "plan entry outside the grid");
    }
    if (e.mass < Mass(0)) throw Error(ErrorKind::InvalidPlan, "negative plan mass");
    if (e.mass == Mass(0)) continue;
    Index node = e.source;  // (b_1..b_i, a_{i+1}..a_d) as the walk proceeds
    for (int axis = 0; axis < d; ++axis) {
      const Index b = shape.coord(e.target, axis);
      flows.families[static_cast<std::size_t>(axis)].push_back({node, b, e.mass});
      node = shape.with_coord(node, axis, b);
    }
  }
  for (auto& f : flows.families) detail::canonicalize(f);
  return flows;
}

/// Rebuilds a coupling from a flow chart by iterated gluing: the partial
/// coupling over (source, layer-i node) is extended through family i+1 in
/// proportion to each node's outgoing flow. Arithmetic is exact.
template <typename Mass>
TransportPlan flows_to_plan(const BasicFlowChart<Mass>& input) {
  BasicFlowChart<Mass> flows = input;
  for (auto& f : flows.families) detail::canonicalize(f);
  detail::check_flow_chart(flows);
  const auto& shape = flows.shape;
  const int d = shape.rank();

  struct Partial {
    Index source;
    Index node;
    Rational mass;
  };
  std::vector<Partial> current;
  current.reserve(flows.families.front().size());
  for (const auto& e : flows.families.front()) {
    current.push_back({e.from, shape.with_coord(e.from, 0, e.to), Rational(e.value)});
  }

  for (int axis = 1; axis < d; ++axis) {
    const auto& family = flows.families[static_cast<std::size_t>(axis)];
    // family is sorted by `from`; index each node's outgoing range
    std::unordered_map<Index, std::pair<std::size_t, std::size_t>> range;
    std::unordered_map<Index, Rational> outflow;
    for (std::size_t k = 0; k < family.size();) {
      std::size_t j = k;
      Rational sum(0);
      while (j < family.size() && family[j].from == family[k].from) sum += Rational(family[j++].value);
      range.emplace(family[k].from, std::make_pair(k, j));
      outflow.emplace(family[k].from, std::move(sum));
      k = j;
    }
    std::vector<Partial> next;
    next.reserve(current.size());
    for (const auto& p : current) {
      const auto it = range.find(p.node);
      if (it == range.end()) throw Error(ErrorKind::InconsistentFlows, "mass reaches a node with no outflow");
      const Rational& out = outflow.at(p.node);
      for (std::size_t k = it->second.first; k < it->second.second; ++k) {
        next.push_back({p.source, shape.with_coord(p.node, axis, family[k].to),
                        p.mass * Rational(family[k].value) / out});
      }
    }
    current = std::move(next);
  }

  TransportPlan plan{shape, {}};
  plan.entries.reserve(current.size());
  for (auto& p : current) plan.entries.push_back({p.source, p.node, std::move(p.mass)});
  std::sort(plan.entries.begin(), plan.entries.end(),
            [](const auto& a, const auto& b) { return std::tie(a.source, a.target) < std::tie(b.source, b.target); });
  return plan;
}

/// Flow chart carried by an optimal flow on a layered network.
FlowChart flow_chart_from_solution(const FlowNetwork& net, const FlowSolution& sol);
/// Coupling carried by an optimal flow on a bipartite network.
IntegerPlan plan_from_solution(const FlowNetwork& net, const FlowSolution& sol);

TransportPlan to_rational(const IntegerPlan& plan);

/// Plan CSV: `source_coords,target_coords,mass` with coordinates joined by
/// spaces and masses written as exact fractions.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);

// ---------------------------------------------------------------------------
// Distances

enum class Method { Bipartite, Multipartite };

std::string_view to_string(Method m) noexcept;

struct TransportOptions {
  Method method = Method::Multipartite;
  std::int64_t target_total = kDefaultTargetTotal;
  bool want_plan = false;
  double grid_spacing = 1.0;  // physical distance between adjacent bin centres
  SolverOptions solver;
};

struct DistanceResult {
  std::int64_t cost = 0;   // exact optimal objective on integerized masses
  std::int64_t total = 0;  // integerized total mass
  double distance = 0.0;   // spacing * (cost / total)^(1/p)
  std::optional<TransportPlan> plan;
  SolverStats stats;
  std::int64_t nodes = 0;
  std::int64_t arcs = 0;
};

/// Exact optimum for already integerized masses with an arbitrary separable
/// cost. `distance` is left at cost / total.
DistanceResult optimal_transport(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost,
                                 const TransportOptions& options = {});

/// Order-p Wasserstein distance with ground cost sum_i |x_i - y_i|^p.
DistanceResult wasserstein(const Histogram& mu, const Histogram& nu, int p, const TransportOptions& options = {});

/// Optimal cost divided by the transported mass.
double emd(const Histogram& mu, const Histogram& nu, const SeparableCost& cost, const TransportOptions& options = {});

}  // namespace mpot
