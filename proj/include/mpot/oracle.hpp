#pragma once

#include <cstdint>
#include <string_view>

#include "mpot/cost.hpp"
#include "mpot/flow_network.hpp"
#include "mpot/histogram.hpp"

namespace mpot::oracle {

// Reference solvers for tests and the `verify` command. They share no code
// with the network simplex and favour clarity over speed.

enum class OracleMethod { SuccessiveShortestPath, Enumeration };

struct OracleSolution {
  std::int64_t objective = 0;
  OracleMethod method = OracleMethod::SuccessiveShortestPath;
};

/// Successive shortest augmenting paths with Dijkstra on reduced costs.
/// Throws Infeasible when the supplies cannot be routed.
OracleSolution ssp_solve(const FlowNetwork& net);

inline constexpr std::int64_t kEnumerationMaxTotal = 6;
inline constexpr Index kEnumerationMaxBins = 4;

/// Exhaustive search over every integral coupling with the given marginals.
OracleSolution enumerate_tiny(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost);

}  // namespace mpot::oracle
