#include "mpot/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpot {

Histogram from_dense(const GridShape& shape, std::span<const double> values) {
  if (static_cast<Index>(values.size()) != shape.size()) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(shape.size()) + " values, got " +
                                               std::to_string(values.size()));
  }
  Histogram::Vector mass = Eigen::Map<const Histogram::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return Histogram(shape, std::move(mass));
}

Histogram bin_points(const Eigen::Ref<const Eigen::MatrixXd>& points, const GridShape& shape,
                     std::span<const std::pair<double, double>> bounds) {
  const int d = shape.rank();
  if (points.rows() == 0) throw Error(ErrorKind::EmptyInput, "no points to bin");
  if (points.cols() != d) {
    throw Error(ErrorKind::LengthMismatch, "points have " + std::to_string(points.cols()) + " columns, grid has " +
                                               std::to_string(d) + " axes");
  }
  if (static_cast<int>(bounds.size()) != d) {
    throw Error(ErrorKind::LengthMismatch, "need one (min,max) bound per axis");
  }
  for (int a = 0; a < d; ++a) {
    const auto [lo, hi] = bounds[static_cast<std::size_t>(a)];
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error(ErrorKind::DegenerateBounds, "axis " + std::to_string(a) + " bounds must satisfy min < max");
    }
  }

  Histogram::Vector mass = Histogram::Vector::Zero(static_cast<Eigen::Index>(shape.size()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    Index bin = 0;
    for (int a = 0; a < d; ++a) {
      const auto [lo, hi] = bounds[static_cast<std::size_t>(a)];
      const Index n = shape.dim(a);
      const double t = std::floor((points(r, a) - lo) / (hi - lo) * static_cast<double>(n));
      // NaN coordinates land in bin 0 via the clamp below
      Index k = std::isnan(t) ? 0 : static_cast<Index>(std::clamp(t, 0.0, static_cast<double>(n - 1)));
      bin += k * shape.stride(a);
    }
    mass[static_cast<Eigen::Index>(bin)] += 1.0;
  }
  return Histogram(shape, std::move(mass));
}

IntegerHistogram integerize(const Histogram& h, std::int64_t target_total) {
  if (target_total < 1) throw Error(ErrorKind::InvalidArgument, "target_total must be >= 1");

  const auto n = static_cast<std::size_t>(h.size());
  const long double scale = static_cast<long double>(target_total) / static_cast<long double>(h.total());

  IntegerHistogram::Vector out(static_cast<Eigen::Index>(n));
  std::vector<long double> remainder(n, 0.0L);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = h.mass()[static_cast<Eigen::Index>(i)];
    if (m == 0.0) {
      out[static_cast<Eigen::Index>(i)] = 0;
      remainder[i] = -1.0L;  // never receives a rounding unit
      continue;
    }
    const long double q = static_cast<long double>(m) * scale;
    long double base = std::floor(q);
    const long double nearest = std::nearbyint(q);
    // snap quotients that are integral up to rounding noise
    if (std::fabs(q - nearest) <= 1e-9L * std::max(1.0L, q)) base = nearest;
    out[static_cast<Eigen::Index>(i)] = static_cast<std::int64_t>(base);
    remainder[i] = std::max(0.0L, q - base);
    assigned += static_cast<std::int64_t>(base);
  }

  std::int64_t deficit = target_total - assigned;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (deficit > 0) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    // cycle in case rounding noise left more units than positive remainders
    while (deficit > 0) {
      for (std::size_t k = 0; k < n && deficit > 0; ++k) {
        if (remainder[order[k]] < 0.0L) break;
        ++out[static_cast<Eigen::Index>(order[k])];
        --deficit;
      }
    }
  } else if (deficit < 0) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] < remainder[b]; });
    while (deficit < 0) {
      for (std::size_t k = 0; k < n && deficit < 0; ++k) {
        auto& v = out[static_cast<Eigen::Index>(order[k])];
        if (v > 0) {
          --v;
          ++deficit;
        }
      }
    }
  }
  return IntegerHistogram(h.shape(), std::move(out));
}

}  // namespace mpot
