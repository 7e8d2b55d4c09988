#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mpot/cost.hpp"
#include "mpot/grid.hpp"
#include "mpot/histogram.hpp"

namespace mpot {

using NodeId = std::int32_t;

enum class NetworkKind { Generic, Bipartite, Multipartite };

/// Uncapacitated min-cost-flow instance stored as parallel arc arrays.
/// Supply is positive at sources and negative at sinks.
struct FlowNetwork {
  NetworkKind kind = NetworkKind::Generic;
  GridShape shape;                   // empty for generic networks
  NodeId node_count = 0;
  std::vector<NodeId> tails;
  std::vector<NodeId> heads;
  std::vector<std::int64_t> costs;
  std::vector<std::int64_t> supply;  // one per node
  std::vector<std::size_t> layer_arc_offsets;  // arcs of stage l are [off[l], off[l+1])

  std::size_t arc_count() const noexcept { return tails.size(); }
  int layer_count() const noexcept;

  void add_arc(NodeId tail, NodeId head, std::int64_t cost) {
    tails.push_back(tail);
    heads.push_back(head);
    costs.push_back(cost);
  }

  /// Bytes held by the per-arc arrays.
  std::size_t arc_bytes() const noexcept {
    return arc_count() * (sizeof(NodeId) * 2 + sizeof(std::int64_t));
  }
};

/// Checks structural invariants (ids in range, no self loops, nonnegative
/// costs, zero net supply); throws on violation.
void validate(const FlowNetwork& net);

/// Maps between flat node ids and (layer, grid point) for layered networks.
/// Layer l holds the points whose first l axes already carry target
/// coordinates; ids are contiguous per layer.
class NodeIndexer {
 public:
  explicit NodeIndexer(GridShape shape) : shape_(std::move(shape)) {}

  NodeId encode(int layer, Index bin) const noexcept { return static_cast<NodeId>(layer * shape_.size() + bin); }
  NodeId encode(int layer, std::span<const Index> coords) const { return encode(layer, shape_.flat(coords)); }
  int layer(NodeId id) const noexcept { return static_cast<int>(id / shape_.size()); }
  Index bin(NodeId id) const noexcept { return id % shape_.size(); }
  std::vector<Index> coords(NodeId id) const { return shape_.coords(bin(id)); }
  const GridShape& shape() const noexcept { return shape_; }

 private:
  GridShape shape_;
};

std::int64_t bipartite_arc_count(const GridShape& shape);
std::int64_t multipartite_arc_count(const GridShape& shape);

/// Complete bipartite network: every source bin connects to every target bin
/// with arc cost c(x, y).
FlowNetwork build_bipartite(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost);

/// Layered network with d+1 copies of the grid. Stage l arcs change only
/// coordinate l and cost table_l(a, b).
FlowNetwork build_multipartite(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost);

/// DIMACS min-cost-flow text (`p min`, `n`, `a` lines, 1-based ids).
void write_dimacs(std::ostream& out, const FlowNetwork& net);

}  // namespace mpot
