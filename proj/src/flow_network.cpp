#include "mpot/flow_network.hpp"

#include <limits>
#include <ostream>
#include <string>

#include "mpot/error.hpp"

namespace mpot {
namespace {

void check_pair(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost) {
  if (!(mu.shape() == nu.shape())) throw Error(ErrorKind::ShapeMismatch, "source and target grids differ");
  if (!(mu.shape() == cost.shape())) throw Error(ErrorKind::ShapeMismatch, "cost grid differs from histogram grid");
  if (mu.total() != nu.total()) {
    throw Error(ErrorKind::UnbalancedTotals,
                "source total " + std::to_string(mu.total()) + " != target total " + std::to_string(nu.total()));
  }
  std::int64_t bound = 0;
  if (__builtin_mul_overflow(cost.max_cost(), mu.total(), &bound)) {
    throw Error(ErrorKind::Overflow, "max ground cost times total mass exceeds 64-bit range");
  }
}

void check_node_count(std::int64_t nodes) {
  if (nodes > std::numeric_limits<NodeId>::max()) {
    throw Error(ErrorKind::TooLarge, std::to_string(nodes) + " nodes exceed the node id range");
  }
}

}  // namespace

int FlowNetwork::layer_count() const noexcept {
  return layer_arc_offsets.empty() ? 0 : static_cast<int>(layer_arc_offsets.size());
}

void validate(const FlowNetwork& net) {
  if (net.heads.size() != net.tails.size() || net.costs.size() != net.tails.size()) {
    throw Error(ErrorKind::LengthMismatch, "arc arrays have different lengths");
  }
  if (static_cast<NodeId>(net.supply.size()) != net.node_count) {
    throw Error(ErrorKind::LengthMismatch, "supply vector must have one entry per node");
  }
  std::int64_t balance = 0;
  for (auto s : net.supply) {
    if (__builtin_add_overflow(balance, s, &balance)) throw Error(ErrorKind::Overflow, "supply sum overflows");
  }
  if (balance != 0) throw Error(ErrorKind::UnbalancedTotals, "supplies sum to " + std::to_string(balance));
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    const auto u = net.tails[e];
    const auto v = net.heads[e];
    if (u < 0 || u >= net.node_count || v < 0 || v >= net.node_count) {
      throw Error(ErrorKind::IndexOutOfRange, "arc " + std::to_string(e) + " has an endpoint outside the network");
    }
    if (u == v) throw Error(ErrorKind::InvalidArgument, "arc " + std::to_string(e) + " is a self loop");
    if (net.costs[e] < 0) throw Error(ErrorKind::InvalidArgument, "arc " + std::to_string(e) + " has negative cost");
  }
}

std::int64_t bipartite_arc_count(const GridShape& shape) {
  std::int64_t arcs = 0;
  if (__builtin_mul_overflow(shape.size(), shape.size(), &arcs)) return std::numeric_limits<std::int64_t>::max();
  return arcs;
}

std::int64_t multipartite_arc_count(const GridShape& shape) {
  std::int64_t per_layer = 0;
  for (auto n : shape.dims()) per_layer += n;
  return shape.size() * per_layer;
}

FlowNetwork build_bipartite(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost) {
  check_pair(mu, nu, cost);
  const auto& shape = mu.shape();
  const Index n = shape.size();
  check_node_count(2 * n);
  const auto arcs = bipartite_arc_count(shape);
  if (arcs > static_cast<std::int64_t>(std::numeric_limits<std::int32_t>::max()) * 4) {
    throw Error(ErrorKind::TooLarge, std::to_string(arcs) + " bipartite arcs");
  }

  FlowNetwork net;
  net.kind = NetworkKind::Bipartite;
  net.shape = shape;
  net.node_count = static_cast<NodeId>(2 * n);
  net.supply.resize(static_cast<std::size_t>(2 * n));
  for (Index x = 0; x < n; ++x) {
    net.supply[static_cast<std::size_t>(x)] = mu[x];
    net.supply[static_cast<std::size_t>(n + x)] = -nu[x];
  }
  net.tails.resize(static_cast<std::size_t>(arcs));
  net.heads.resize(static_cast<std::size_t>(arcs));
  net.costs.resize(static_cast<std::size_t>(arcs));

  const int d = shape.rank();
  std::vector<Index> xc(static_cast<std::size_t>(d));
  std::vector<Index> yc(static_cast<std::size_t>(d));
  std::size_t e = 0;
  for (Index x = 0; x < n; ++x) {
    shape.unflat(x, xc);
    std::fill(yc.begin(), yc.end(), 0);
    for (Index y = 0; y < n; ++y, ++e) {
      std::int64_t c = 0;
      for (int a = 0; a < d; ++a) c += cost(a, xc[static_cast<std::size_t>(a)], yc[static_cast<std::size_t>(a)]);
      net.tails[e] = static_cast<NodeId>(x);
      net.heads[e] = static_cast<NodeId>(n + y);
      net.costs[e] = c;
      // odometer increment, last axis fastest
      for (int a = d - 1; a >= 0; --a) {
        if (++yc[static_cast<std::size_t>(a)] < shape.dim(a)) break;
        yc[static_cast<std::size_t>(a)] = 0;
      }
    }
  }
  net.layer_arc_offsets = {0, static_cast<std::size_t>(arcs)};
  return net;
}

FlowNetwork build_multipartite(const IntegerHistogram& mu, const IntegerHistogram& nu, const SeparableCost& cost) {
  check_pair(mu, nu, cost);
  const auto& shape = mu.shape();
  const Index n = shape.size();
  const int d = shape.rank();
  check_node_count(static_cast<std::int64_t>(d + 1) * n);
  const NodeIndexer index(shape);

  FlowNetwork net;
  net.kind = NetworkKind::Multipartite;
  net.shape = shape;
  net.node_count = static_cast<NodeId>((d + 1) * n);
  net.supply.assign(static_cast<std::size_t>(net.node_count), 0);
  for (Index x = 0; x < n; ++x) {
    net.supply[static_cast<std::size_t>(index.encode(0, x))] = mu[x];
    net.supply[static_cast<std::size_t>(index.encode(d, x))] = -nu[x];
  }

  const auto arcs = static_cast<std::size_t>(multipartite_arc_count(shape));
  net.tails.reserve(arcs);
  net.heads.reserve(arcs);
  net.costs.reserve(arcs);
  net.layer_arc_offsets.push_back(0);
  for (int axis = 0; axis < d; ++axis) {
    const Index len = shape.dim(axis);
    for (Index z = 0; z < n; ++z) {
      const Index from = shape.coord(z, axis);
      const NodeId tail = index.encode(axis, z);
      for (Index to = 0; to < len; ++to) {
        net.add_arc(tail, index.encode(axis + 1, shape.with_coord(z, axis, to)), cost(axis, from, to));
      }
    }
    net.layer_arc_offsets.push_back(net.arc_count());
  }
  return net;
}

void write_dimacs(std::ostream& out, const FlowNetwork& net) {
  std::int64_t total = 0;
  for (auto s : net.supply) {
    if (s > 0) total += s;
  }
  out << "c uncapacitated instance; arc capacity set to total supply\n";
  out << "p min " << net.node_count << ' ' << net.arc_count() << '\n';
  for (NodeId u = 0; u < net.node_count; ++u) {
    if (const auto s = net.supply[static_cast<std::size_t>(u)]; s != 0) out << "n " << u + 1 << ' ' << s << '\n';
  }
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    out << "a " << net.tails[e] + 1 << ' ' << net.heads[e] + 1 << " 0 " << total << ' ' << net.costs[e] << '\n';
  }
}

}  // namespace mpot
