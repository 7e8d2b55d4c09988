#include "mpot/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "mpot/error.hpp"

namespace mpot::oracle {
namespace {

struct ResidualArc {
  int to;
  std::int64_t capacity;
  std::int64_t cost;
  int reverse;  // index of the paired arc in adj[to]
};

}  // namespace

OracleSolution ssp_solve(const FlowNetwork& net) {
  validate(net);
  // super source s and super sink t turn the supplies into capacities
  const int n = net.node_count;
  const int s = n;
  const int t = n + 1;
  std::vector<std::vector<ResidualArc>> adj(static_cast<std::size_t>(n + 2));
  auto add = [&](int u, int v, std::int64_t cap, std::int64_t cost) {
    auto& fu = adj[static_cast<std::size_t>(u)];
    auto& fv = adj[static_cast<std::size_t>(v)];
    fu.push_back({v, cap, cost, static_cast<int>(fv.size())});
    fv.push_back({u, 0, -cost, static_cast<int>(fu.size()) - 1});
  };

  std::int64_t required = 0;
  for (int u = 0; u < n; ++u) {
    const auto b = net.supply[static_cast<std::size_t>(u)];
    if (b > 0) {
      add(s, u, b, 0);
      required += b;
    } else if (b < 0) {
      add(u, t, -b, 0);
    }
  }
  // uncapacitated arcs: no single arc ever needs more than the total supply
  for (std::size_t e = 0; e < net.arc_count(); ++e) add(net.tails[e], net.heads[e], required, net.costs[e]);

  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  const auto nodes = static_cast<std::size_t>(n + 2);
  std::vector<std::int64_t> potential(nodes, 0);  // valid since all costs >= 0
  std::vector<std::int64_t> dist(nodes);
  std::vector<char> dead(nodes);
  std::vector<char> on_path(nodes, 0);
  std::vector<std::size_t> next_arc(nodes);
  std::vector<std::pair<int, std::size_t>> path;

  std::int64_t sent = 0;
  std::int64_t objective = 0;
  while (sent < required) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[static_cast<std::size_t>(s)] = 0;
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0, s);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d != dist[static_cast<std::size_t>(u)]) continue;
      if (u == t) break;
      const auto& arcs = adj[static_cast<std::size_t>(u)];
      for (std::size_t k = 0; k < arcs.size(); ++k) {
        const auto& a = arcs[k];
        if (a.capacity == 0) continue;
        const auto reduced = a.cost + potential[static_cast<std::size_t>(u)] - potential[static_cast<std::size_t>(a.to)];
        const auto nd = d + reduced;
        if (nd < dist[static_cast<std::size_t>(a.to)]) {
          dist[static_cast<std::size_t>(a.to)] = nd;
          heap.emplace(nd, a.to);
        }
      }
    }
    if (dist[static_cast<std::size_t>(t)] >= inf) throw Error(ErrorKind::Infeasible, "supplies cannot reach demands");
    // the search stops once t is settled; anything unsettled is at least
    // dist[t] away, so capping there keeps all residual reduced costs >= 0
    const auto cap = dist[static_cast<std::size_t>(t)];
    for (std::size_t u = 0; u < nodes; ++u) potential[u] += std::min(dist[u], cap);

    // augment along every zero reduced cost path from s to t; each one is a
    // shortest path, the Dijkstra tree path among them
    auto reduced = [&](int u, const ResidualArc& a) {
      return a.cost + potential[static_cast<std::size_t>(u)] - potential[static_cast<std::size_t>(a.to)];
    };
    std::fill(dead.begin(), dead.end(), 0);
    std::fill(next_arc.begin(), next_arc.end(), 0);
    path.clear();
    const auto sent_before = sent;
    int u = s;
    while (sent < required) {
      if (u == t) {
        std::int64_t push = required - sent;
        for (const auto& [v, k] : path) push = std::min(push, adj[static_cast<std::size_t>(v)][k].capacity);
        for (const auto& [v, k] : path) {
          auto& a = adj[static_cast<std::size_t>(v)][k];
          a.capacity -= push;
          adj[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.reverse)].capacity += push;
          objective += push * a.cost;
        }
        sent += push;
        for (const auto& [v, k] : path) on_path[static_cast<std::size_t>(v)] = 0;
        path.clear();
        u = s;
        continue;
      }
      const auto& arcs = adj[static_cast<std::size_t>(u)];
      auto& k = next_arc[static_cast<std::size_t>(u)];
      while (k < arcs.size() && (arcs[k].capacity == 0 || dead[static_cast<std::size_t>(arcs[k].to)] ||
                                 on_path[static_cast<std::size_t>(arcs[k].to)] || reduced(u, arcs[k]) != 0))
        ++k;
      if (k < arcs.size()) {
        on_path[static_cast<std::size_t>(u)] = 1;
        path.emplace_back(u, k);
        u = arcs[k].to;
      } else {
        dead[static_cast<std::size_t>(u)] = 1;
        if (u == s) break;
        u = path.back().first;
        path.pop_back();
        on_path[static_cast<std::size_t>(u)] = 0;
        ++next_arc[static_cast<std::size_t>(u)];
      }
    }
    for (const auto& [v, k] : path) on_path[static_cast<std::size_t>(v)] = 0;
    if (sent == sent_before) throw std::logic_error("no admissible path after a shortest path search");
  }
  return {objective, OracleMethod::SuccessiveShortestPath};
}

OracleSolution enumerate_tiny(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost) {
  if (!(mu.shape() == nu.shape()) || !(mu.shape() == cost.shape())) {
    throw Error(ErrorKind::ShapeMismatch, "enumeration needs a common grid");
  }
  if (mu.total() != nu.total()) throw Error(ErrorKind::UnbalancedTotals, "totals differ");
  if (mu.total() > kEnumerationMaxTotal || mu.size() > kEnumerationMaxBins) {
    throw Error(ErrorKind::TooLarge, "enumeration is limited to total <= 6 on at most 4 bins");
  }
  const auto n = static_cast<std::size_t>(mu.size());
  std::vector<std::int64_t> row_left(n);
  std::vector<std::int64_t> col_left(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_left[i] = mu[static_cast<Index>(i)];
    col_left[i] = nu[static_cast<Index>(i)];
  }

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  // fill the coupling cell by cell in row-major order
  std::function<void(std::size_t, std::int64_t)> visit = [&](std::size_t cell, std::int64_t acc) {
    if (cell == n * n) {
      for (auto r : row_left) {
        if (r != 0) return;
      }
      for (auto c : col_left) {
        if (c != 0) return;
      }
      best = std::min(best, acc);
      return;
    }
    const std::size_t x = cell / n;
    const std::size_t y = cell % n;
    const auto c = ground_cost(cost, static_cast<Index>(x), static_cast<Index>(y));
    const auto limit = std::min(row_left[x], col_left[y]);
    for (std::int64_t k = 0; k <= limit; ++k) {
      row_left[x] -= k;
      col_left[y] -= k;
      visit(cell + 1, acc + k * c);
      row_left[x] += k;
      col_left[y] += k;
    }
  };
  visit(0, 0);
  if (best == std::numeric_limits<std::int64_t>::max()) throw Error(ErrorKind::Infeasible, "no coupling found");
  return {best, OracleMethod::Enumeration};
}

}  // namespace mpot::oracle
