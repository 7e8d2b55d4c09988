#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mpot/cost.hpp"
#include "mpot/error.hpp"
#include "mpot/histogram.hpp"

namespace mpot {

/// How the ground cost is scaled before forming exp(-lambda * C / scale).
enum class CostNormalization { None, Median, Max };

struct SinkhornConfig {
  double lambda = 1.0;
  int max_iters = 10'000;
  double marginal_tol = 1e-9;      // L1 violation of the row marginal
  double underflow_floor = 1e-300; // smallest admissible kernel product entry
  CostNormalization normalization = CostNormalization::Median;
};

template <typename Scalar>
struct BasicSinkhornResult {
  Scalar upper_bound = 0;   // cost of the rounded feasible coupling, unit-mass scale
  int iterations = 0;
  bool converged = false;
  Scalar marginal_error = 0;
  std::vector<Scalar> error_history;  // marginal error after each iteration
  std::int64_t kernel_entries = 0;    // scalars held by the kernel representation
};

using SinkhornResult = BasicSinkhornResult<double>;

/// Observer called after every iteration with full-grid scaling vectors
/// (zero on bins without mass).
template <typename Scalar>
using SinkhornObserver = std::function<void(int, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&,
                                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>;

/// Percentage excess of `ub` over the exact optimum.
inline double gap(double exact_cost, double ub) {
  if (!(exact_cost > 0.0)) throw Error(ErrorKind::ZeroOptimum, "gap is undefined for a zero optimum");
  return (ub - exact_cost) / exact_cost * 100.0;
}

/// Scale used by `normalization`, computed over all pairs of grid points
/// (not just the supports) from the per-axis value distributions.
inline double cost_scale(const SeparableCost& cost, CostNormalization normalization) {
  switch (normalization) {
    case CostNormalization::None:
      return 1.0;
    case CostNormalization::Max:
      return cost.max_cost() > 0 ? static_cast<double>(cost.max_cost()) : 1.0;
    case CostNormalization::Median:
      break;
  }
  // distribution of c(x, y) as a convolution of per-axis distributions
  std::map<std::int64_t, double> dist{{0, 1.0}};
  for (int a = 0; a < cost.rank(); ++a) {
    std::map<std::int64_t, double> axis;
    const auto& t = cost.table(a);
    for (Index i = 0; i < t.rows(); ++i) {
      for (Index j = 0; j < t.cols(); ++j) axis[t(i, j)] += 1.0;
    }
    std::map<std::int64_t, double> next;
    for (const auto& [v1, c1] : dist) {
      for (const auto& [v2, c2] : axis) next[v1 + v2] += c1 * c2;
    }
    dist = std::move(next);
  }
  double count = 0.0;
  for (const auto& kv : dist) count += kv.second;
  // value at 0-based rank r of the sorted multiset
  auto at_rank = [&](double r) {
    double seen = 0.0;
    for (const auto& [v, c] : dist) {
      seen += c;
      if (r < seen) return static_cast<double>(v);
    }
    return static_cast<double>(dist.rbegin()->first);
  };
  const double half = std::floor(count / 2.0);
  const double median = std::fmod(count, 2.0) == 1.0 ? at_rank(half) : 0.5 * (at_rank(half - 1.0) + at_rank(half));
  return median > 0.0 ? median : 1.0;
}

namespace detail {

inline void check_sinkhorn_inputs(const Histogram& mu, const Histogram& nu, const SeparableCost& cost,
                                  const SinkhornConfig& cfg) {
  if (!(mu.shape() == nu.shape()) || !(mu.shape() == cost.shape())) {
    throw Error(ErrorKind::ShapeMismatch, "histograms and cost must share a grid");
  }
  if (!(cfg.lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  if (!(cfg.marginal_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "marginal_tol must be positive");
  if (cfg.max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
}

template <typename Vector>
void check_underflow(const Vector& kv, const Vector& target, double floor, const char* side) {
  for (Eigen::Index i = 0; i < kv.size(); ++i) {
    if (target[i] > 0 && !(kv[i] >= floor)) {
      throw Error(ErrorKind::NumericalUnderflow,
                  std::string("kernel product underflowed on the ") + side + " side; lower lambda");
    }
  }
}

// Elementwise target / kernel product, zero where the target has no mass.
template <typename Vector>
Vector scale_to(const Vector& target, const Vector& kv) {
  Vector out(target.size());
  for (Eigen::Index i = 0; i < target.size(); ++i) out[i] = target[i] > 0 ? target[i] / kv[i] : 0;
  return out;
}

}  // namespace detail

/// Sinkhorn scaling on the dense kernel restricted to the supports of the
/// two histograms. UB is the cost of the coupling after rounding onto the
/// transport polytope.
template <typename Scalar = double>
BasicSinkhornResult<Scalar> sinkhorn(const Histogram& mu, const Histogram& nu, const SeparableCost& cost,
                                     const SinkhornConfig& cfg, const SinkhornObserver<Scalar>& observer = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::check_sinkhorn_inputs(mu, nu, cost, cfg);

  std::vector<Index> rows;
  std::vector<Index> cols;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0) rows.push_back(i);
    if (nu[i] > 0) cols.push_back(i);
  }
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  Vector a(nr);
  Vector b(nc);
  for (Eigen::Index i = 0; i < nr; ++i) a[i] = Scalar(mu[rows[static_cast<std::size_t>(i)]] / mu.total());
  for (Eigen::Index j = 0; j < nc; ++j) b[j] = Scalar(nu[cols[static_cast<std::size_t>(j)]] / nu.total());

  const Scalar scale = Scalar(cost_scale(cost, cfg.normalization));
  Matrix C(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      C(i, j) = Scalar(ground_cost(cost, rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]));
    }
  }
  const Matrix K = (-Scalar(cfg.lambda) / scale * C).array().exp().matrix();

  BasicSinkhornResult<Scalar> res;
  res.kernel_entries = static_cast<std::int64_t>(K.size());

  Vector u(nr);
  Vector v = Vector::Ones(nc);
  Vector kv = K * v;
  Vector full_u;
  Vector full_v;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    detail::check_underflow(kv, a, cfg.underflow_floor, "row");
    u = detail::scale_to(a, kv);
    const Vector ktu = K.transpose() * u;
    detail::check_underflow(ktu, b, cfg.underflow_floor, "column");
    v = detail::scale_to(b, ktu);
    kv = K * v;
    res.marginal_error = (u.cwiseProduct(kv) - a).template lpNorm<1>();
    res.error_history.push_back(res.marginal_error);
    res.iterations = it;
    if (observer) {
      full_u = Vector::Zero(mu.size());
      full_v = Vector::Zero(nu.size());
      for (Eigen::Index i = 0; i < nr; ++i) full_u[rows[static_cast<std::size_t>(i)]] = u[i];
      for (Eigen::Index j = 0; j < nc; ++j) full_v[cols[static_cast<std::size_t>(j)]] = v[j];
      observer(it, full_u, full_v);
    }
    if (res.marginal_error < cfg.marginal_tol) {
      res.converged = true;
      break;
    }
  }

  // round onto the transport polytope: shrink rows, shrink columns, then
  // spread the remaining deficits as a rank-one correction
  Matrix P = u.asDiagonal() * K * v.asDiagonal();
  const Vector x = (a.array() / P.rowwise().sum().array()).min(Scalar(1)).matrix();
  P = x.asDiagonal() * P;
  const Vector y = (b.array() / P.colwise().sum().transpose().array()).min(Scalar(1)).matrix();
  P = P * y.asDiagonal();
  const Vector err_r = a - P.rowwise().sum();
  const Vector err_c = b - P.colwise().sum().transpose();
  const Scalar err_mass = err_r.template lpNorm<1>();
  if (err_mass > 0) P += err_r * err_c.transpose() / err_mass;
  res.upper_bound = (C.array() * P.array()).sum();
  return res;
}

/// Sinkhorn on a 2-D grid that applies the kernel as K1 * V * K2^T on the
/// reshaped scaling vector, so only the two per-axis kernels are stored.
template <typename Scalar = double>
BasicSinkhornResult<Scalar> improved_sinkhorn_2d(const Histogram& mu, const Histogram& nu, const SeparableCost& cost,
                                                 const SinkhornConfig& cfg,
                                                 const SinkhornObserver<Scalar>& observer = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  detail::check_sinkhorn_inputs(mu, nu, cost, cfg);
  if (mu.shape().rank() != 2) throw Error(ErrorKind::InvalidArgument, "improved Sinkhorn needs a 2-D grid");

  const Eigen::Index n1 = mu.shape().dim(0);
  const Eigen::Index n2 = mu.shape().dim(1);
  const Vector a = (mu.mass() / mu.total()).template cast<Scalar>();
  const Vector b = (nu.mass() / nu.total()).template cast<Scalar>();

  const Scalar scale = Scalar(cost_scale(cost, cfg.normalization));
  const Matrix C1 = cost.table(0).template cast<Scalar>();
  const Matrix C2 = cost.table(1).template cast<Scalar>();
  const Matrix K1 = (-Scalar(cfg.lambda) / scale * C1).array().exp().matrix();
  const Matrix K2 = (-Scalar(cfg.lambda) / scale * C2).array().exp().matrix();

  // (A kron B) x  ==  vec_rowmajor(A * X * B^T)
  auto kron_apply = [n1, n2](const Matrix& A, const Matrix& B, const Vector& x) {
    Eigen::Map<const RowMajor> X(x.data(), n1, n2);
    Vector out(n1 * n2);
    Eigen::Map<RowMajor>(out.data(), n1, n2).noalias() = A * X * B.transpose();
    return out;
  };
  auto kernel = [&](const Vector& x) { return kron_apply(K1, K2, x); };
  auto kernel_t = [&](const Vector& x) {
    Eigen::Map<const RowMajor> X(x.data(), n1, n2);
    Vector out(n1 * n2);
    Eigen::Map<RowMajor>(out.data(), n1, n2).noalias() = K1.transpose() * X * K2;
    return out;
  };

  BasicSinkhornResult<Scalar> res;
  res.kernel_entries = static_cast<std::int64_t>(K1.size() + K2.size());

  Vector u(a.size());
  Vector v = Vector::Zero(b.size());
  for (Eigen::Index j = 0; j < b.size(); ++j) v[j] = b[j] > 0 ? Scalar(1) : Scalar(0);
  Vector kv = kernel(v);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    detail::check_underflow(kv, a, cfg.underflow_floor, "row");
    u = detail::scale_to(a, kv);
    const Vector ktu = kernel_t(u);
    detail::check_underflow(ktu, b, cfg.underflow_floor, "column");
    v = detail::scale_to(b, ktu);
    kv = kernel(v);
    res.marginal_error = (u.cwiseProduct(kv) - a).template lpNorm<1>();
    res.error_history.push_back(res.marginal_error);
    res.iterations = it;
    if (observer) observer(it, u, v);
    if (res.marginal_error < cfg.marginal_tol) {
      res.converged = true;
      break;
    }
  }

  // same rounding as the dense variant, expressed through kernel products
  const Vector r = u.cwiseProduct(kernel(v));
  Vector ur = u;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (r[i] > 0) ur[i] *= std::min(Scalar(1), a[i] / r[i]);
  }
  const Vector c = v.cwiseProduct(kernel_t(ur));
  Vector vr = v;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (c[j] > 0) vr[j] *= std::min(Scalar(1), b[j] / c[j]);
  }
  const Vector err_r = a - ur.cwiseProduct(kernel(vr));
  const Vector err_c = b - vr.cwiseProduct(kernel_t(ur));

  // <C, diag(u) K diag(v)> with K o C = (K1 o C1) kron K2 + K1 kron (K2 o C2)
  const Matrix KC1 = K1.cwiseProduct(C1);
  const Matrix KC2 = K2.cwiseProduct(C2);
  Scalar ub = ur.dot(kron_apply(KC1, K2, vr) + kron_apply(K1, KC2, vr));
  const Scalar err_mass = err_r.template lpNorm<1>();
  if (err_mass > 0) {
    // C = C1 kron J + J kron C2 with J the all-ones matrix, so C e only
    // needs the row and column sums of the reshaped e
    Eigen::Map<const RowMajor> E(err_c.data(), n1, n2);
    Eigen::Map<const RowMajor> R(err_r.data(), n1, n2);
    const Vector along1 = C1 * E.rowwise().sum();
    const Vector along2 = C2 * E.colwise().sum().transpose();
    const Scalar correction = R.rowwise().sum().dot(along1) + R.colwise().sum().transpose().dot(along2);
    ub += correction / err_mass;
  }
  res.upper_bound = ub;
  return res;
}

}  // namespace mpot
