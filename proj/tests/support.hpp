#pragma once

#include <random>
#include <vector>

#include "mpot/mpot.hpp"

namespace mpot::testing {

// Integer masses uniform in [lo, hi] per bin, scaled to `total` with the
// library's largest-remainder rounding.
inline IntegerHistogram random_histogram(std::mt19937_64& rng, const GridShape& shape, std::int64_t total,
                                         int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> mass(lo, hi);
  std::vector<double> values(static_cast<std::size_t>(shape.size()));
  for (auto& v : values) v = mass(rng);
  values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)] += 1.0;  // never all zero
  return integerize(from_dense(shape, values), total);
}

inline Histogram as_real(const IntegerHistogram& h) { return h.cast<double>(); }

// Random network on `nodes` nodes with `arcs` distinct arcs and balanced supplies.
inline FlowNetwork random_network(std::mt19937_64& rng, int nodes, int arcs, std::int64_t max_cost,
                                  std::int64_t max_supply) {
  FlowNetwork net;
  net.node_count = nodes;
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  std::uniform_int_distribution<std::int64_t> cost(0, max_cost);
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(nodes), std::vector<bool>(static_cast<std::size_t>(nodes)));
  while (static_cast<int>(net.arc_count()) < arcs) {
    const int u = pick(rng);
    const int v = pick(rng);
    if (u == v || used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) continue;
    used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    net.add_arc(u, v, cost(rng));
  }
  net.supply.assign(static_cast<std::size_t>(nodes), 0);
  std::uniform_int_distribution<std::int64_t> amount(0, max_supply);
  for (int k = 0; k < nodes / 2; ++k) {
    const int u = pick(rng);
    const int v = pick(rng);
    if (u == v) continue;
    const auto a = amount(rng);
    net.supply[static_cast<std::size_t>(u)] += a;
    net.supply[static_cast<std::size_t>(v)] -= a;
  }
  return net;
}

}  // namespace mpot::testing
