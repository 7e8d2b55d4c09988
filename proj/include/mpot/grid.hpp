#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mpot {

using Index = std::int64_t;

/// Per-axis sizes of a regular d-dimensional grid. Bins are addressed
/// row-major (last axis fastest) with 0-based coordinates.
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<Index> dims);
  GridShape(std::initializer_list<Index> dims) : GridShape(std::vector<Index>(dims)) {}

  int rank() const noexcept { return static_cast<int>(dims_.size()); }
  Index size() const noexcept { return size_; }
  Index dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  std::span<const Index> dims() const noexcept { return dims_; }
  Index stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  Index flat(std::span<const Index> coords) const;
  void unflat(Index flat, std::span<Index> coords) const;
  std::vector<Index> coords(Index flat) const;

  /// Coordinate along one axis without decoding the whole point.
  Index coord(Index flat, int axis) const noexcept {
    return (flat / strides_[static_cast<std::size_t>(axis)]) % dims_[static_cast<std::size_t>(axis)];
  }
  /// Same point with the coordinate along `axis` replaced by `value`.
  Index with_coord(Index flat, int axis, Index value) const noexcept {
    const auto a = static_cast<std::size_t>(axis);
    return flat + (value - coord(flat, axis)) * strides_[a];
  }

  friend bool operator==(const GridShape& a, const GridShape& b) noexcept { return a.dims_ == b.dims_; }

 private:
  std::vector<Index> dims_;
  std::vector<Index> strides_;
  Index size_ = 0;
};

}  // namespace mpot
