#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "mpot/flow_network.hpp"

namespace mpot {

enum class SolveStatus { Optimal, Infeasible };

struct SolverOptions {
  std::int64_t block_size = 0;      // 0 selects ceil(sqrt(arc count))
  bool validate_each_pivot = false; // full tree audit after every pivot; tests only
};

struct SolverStats {
  std::int64_t pivots = 0;
  std::int64_t block_size = 0;
  double seconds = 0.0;
};

struct FlowSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t objective = 0;
  std::vector<std::int64_t> flow;       // one per arc of the network
  std::vector<std::int64_t> potential;  // one per node; reduced cost = cost + pi[tail] - pi[head]
  SolverStats stats;
};

/// Block-search pricing. Scans arcs cyclically from where the previous scan
/// stopped, one block at a time, and returns the most negative reduced cost
/// arc of the first block that has one.
class BlockSearch {
 public:
  BlockSearch(std::size_t arc_count, std::size_t block_size)
      : arcs_(arc_count), block_(block_size == 0 ? 1 : block_size) {}

  static std::size_t default_block_size(std::size_t arc_count) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arc_count)))));
  }

  /// `reduced(e)` returns the signed reduced cost of arc e (0 for basic arcs).
  template <typename ReducedCost>
  std::optional<std::size_t> next(ReducedCost&& reduced) {
    if (arcs_ == 0) return std::nullopt;
    std::int64_t best = 0;
    std::size_t best_arc = 0;
    std::size_t left = block_;
    std::size_t e = next_;
    for (std::size_t scanned = 0; scanned < arcs_; ++scanned) {
      const std::int64_t c = reduced(e);
      if (c < best) {
        best = c;
        best_arc = e;
      }
      if (++e == arcs_) e = 0;
      if (--left == 0) {
        if (best < 0) break;
        left = block_;
      }
    }
    if (best >= 0) return std::nullopt;
    next_ = e;
    return best_arc;
  }

  std::size_t position() const noexcept { return next_; }

 private:
  std::size_t arcs_;
  std::size_t block_;
  std::size_t next_ = 0;
};

/// Exact primal network simplex for uncapacitated networks with integer data.
FlowSolution solve(const FlowNetwork& net, const SolverOptions& options = {});

/// Optimality certificate checks on a returned solution.
struct CertificateReport {
  bool conservation = true;           // inflow - outflow = -supply at every node
  bool nonnegative = true;            // all flows >= 0
  bool dual_feasible = true;          // every reduced cost >= 0
  bool complementary_slackness = true;  // flow > 0 implies reduced cost == 0
  bool objective_matches = true;      // objective equals sum of cost * flow

  bool ok() const noexcept {
    return conservation && nonnegative && dual_feasible && complementary_slackness && objective_matches;
  }
};

CertificateReport check_certificates(const FlowNetwork& net, const FlowSolution& sol);

}  // namespace mpot
