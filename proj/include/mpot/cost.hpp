#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "mpot/grid.hpp"

namespace mpot {

using CostTable = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Ground cost c(x, y) = sum_i table_i(x_i, y_i) over a grid.
class SeparableCost {
 public:
  SeparableCost(GridShape shape, std::vector<CostTable> tables);

  const GridShape& shape() const noexcept { return shape_; }
  int rank() const noexcept { return shape_.rank(); }
  const CostTable& table(int axis) const { return tables_[static_cast<std::size_t>(axis)]; }

  std::int64_t operator()(int axis, Index from, Index to) const noexcept {
    return tables_[static_cast<std::size_t>(axis)](from, to);
  }

  /// Largest value of c(x, y) over the grid.
  std::int64_t max_cost() const noexcept { return max_cost_; }

 private:
  GridShape shape_;
  std::vector<CostTable> tables_;
  std::int64_t max_cost_ = 0;
};

/// table_i(a, b) = |a - b|^p on every axis.
SeparableCost power_cost(const GridShape& shape, int p);

std::int64_t ground_cost(const SeparableCost& cost, std::span<const Index> x, std::span<const Index> y);
/// Same as above with flat bin indices.
std::int64_t ground_cost(const SeparableCost& cost, Index x, Index y);

/// Reads per-axis tables, each introduced by `# axis: i, size: N` and followed
/// by N rows of N integers. Axes are 0-based and may appear in any order.
SeparableCost parse_cost_tables(std::istream& in, const GridShape& shape);
SeparableCost load_cost_tables(const std::filesystem::path& path, const GridShape& shape);
void write_cost_tables(std::ostream& out, const SeparableCost& cost);

}  // namespace mpot
