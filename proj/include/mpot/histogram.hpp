#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mpot/error.hpp"
#include "mpot/grid.hpp"

namespace mpot {

/// Nonnegative mass over a regular grid, one entry per bin in row-major
/// order. Immutable once constructed.
template <typename Scalar>
class BasicHistogram {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicHistogram(GridShape shape, Vector mass) : shape_(std::move(shape)), mass_(std::move(mass)) {
    if (mass_.size() != shape_.size()) {
      throw Error(ErrorKind::LengthMismatch, "histogram has " + std::to_string(mass_.size()) +
                                                 " values, grid has " + std::to_string(shape_.size()) + " bins");
    }
    total_ = Scalar(0);
    for (Eigen::Index i = 0; i < mass_.size(); ++i) {
      if (!(mass_[i] >= Scalar(0))) {
        throw Error(ErrorKind::NegativeMass, "bin " + std::to_string(i) + " has negative or NaN mass");
      }
      if constexpr (std::is_integral_v<Scalar>) {
        if (__builtin_add_overflow(total_, mass_[i], &total_)) {
          throw Error(ErrorKind::Overflow, "histogram total overflows");
        }
      } else {
        total_ += mass_[i];
      }
    }
    if (!(total_ > Scalar(0))) throw Error(ErrorKind::ZeroTotal, "histogram has no mass");
  }

  const GridShape& shape() const noexcept { return shape_; }
  const Vector& mass() const noexcept { return mass_; }
  Scalar total() const noexcept { return total_; }
  Index size() const noexcept { return shape_.size(); }
  Scalar operator[](Index bin) const { return mass_[static_cast<Eigen::Index>(bin)]; }

  template <typename Other>
  BasicHistogram<Other> cast() const {
    return BasicHistogram<Other>(shape_, mass_.template cast<Other>());
  }

 private:
  GridShape shape_;
  Vector mass_;
  Scalar total_{};
};

using Histogram = BasicHistogram<double>;
using IntegerHistogram = BasicHistogram<std::int64_t>;

inline constexpr std::int64_t kDefaultTargetTotal = 10'000'000;

Histogram from_dense(const GridShape& shape, std::span<const double> values);

/// Counts points per bin. `points` holds one point per row; bins are
/// half-open except the last one on each axis, and out-of-range points are
/// clamped to the nearest boundary bin.
Histogram bin_points(const Eigen::Ref<const Eigen::MatrixXd>& points, const GridShape& shape,
                     std::span<const std::pair<double, double>> bounds);

/// Scales masses to integers summing exactly to `target_total` using
/// largest-remainder rounding; ties go to the lowest bin index.
IntegerHistogram integerize(const Histogram& h, std::int64_t target_total = kDefaultTargetTotal);

}  // namespace mpot
