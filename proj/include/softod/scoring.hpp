#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "softod/error.hpp"
#include "softod/types.hpp"

namespace softod {

enum class Metric { Euclidean, Manhattan, Chebyshev };

// Which end of the sorted distance list feeds the score. `Nearest` is the
// usual kNN outlier score; `Farthest` averages the k largest distances.
enum class NeighborRule { Nearest, Farthest };

constexpr std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Chebyshev: return "chebyshev";
  }
  return "euclidean";
}

constexpr std::string_view to_string(NeighborRule r) {
  return r == NeighborRule::Nearest ? "nearest" : "farthest";
}

template <typename Scalar>
struct BasicDistanceScore {
  Scalar d = 0;
  TimeIndex t = 0;
  Eigen::Index window_size = 0;
};

using DistanceScore = BasicDistanceScore<double>;

// Sigmoid-mapped outlier magnitude, always strictly inside (0, 1).
template <typename Scalar>
struct BasicMagnitude {
  Scalar lambda;
};

using Magnitude = BasicMagnitude<double>;

namespace detail {

template <typename DerivedA, typename DerivedB>
void check_same_dims(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(a.rows()) + " dimensions, got " +
                    std::to_string(b.rows()));
  }
}

}  // namespace detail

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pairwise_distance(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b,
                                            Metric metric = Metric::Euclidean) {
  detail::check_same_dims(a, b);
  switch (metric) {
    case Metric::Manhattan: return (a - b).template lpNorm<1>();
    case Metric::Chebyshev: return (a - b).template lpNorm<Eigen::Infinity>();
    case Metric::Euclidean: break;
  }
  return (a - b).norm();
}

// Distances from `x` to every column of `population`.
template <typename DerivedX, typename DerivedP>
VectorX<typename DerivedX::Scalar> distances_to_columns(const Eigen::MatrixBase<DerivedX>& x,
                                                        const Eigen::MatrixBase<DerivedP>& population,
                                                        Metric metric = Metric::Euclidean) {
  detail::check_same_dims(x, population);
  const auto diff = population.colwise() - x;
  switch (metric) {
    case Metric::Manhattan: return diff.cwiseAbs().colwise().sum().transpose();
    case Metric::Chebyshev: return diff.cwiseAbs().colwise().maxCoeff().transpose();
    case Metric::Euclidean: break;
  }
  return diff.colwise().norm().transpose();
}

// Mean distance from `x` to its k nearest (or farthest) columns of
// `population`. The caller is responsible for leaving `x` itself out.
template <typename DerivedX, typename DerivedP>
typename DerivedX::Scalar knn_distance(const Eigen::MatrixBase<DerivedX>& x,
                                       const Eigen::MatrixBase<DerivedP>& population,
                                       Eigen::Index k, Metric metric = Metric::Euclidean,
                                       NeighborRule rule = NeighborRule::Nearest) {
  using Scalar = typename DerivedX::Scalar;
  if (k < 1 || population.cols() < k) {
    throw Error(ErrorCode::PopulationTooSmall,
                "need at least k=" + std::to_string(k) + " population members, have " +
                    std::to_string(population.cols()));
  }
  VectorX<Scalar> dist = distances_to_columns(x, population, metric);
  Scalar* first = dist.data();
  Scalar* last = first + dist.size();
  if (rule == NeighborRule::Nearest) {
    std::nth_element(first, first + (k - 1), last);
  } else {
    std::nth_element(first, first + (k - 1), last, std::greater<Scalar>());
  }
  return dist.head(k).sum() / static_cast<Scalar>(k);
}

template <typename Scalar, typename DerivedP>
BasicDistanceScore<Scalar> knn_score(const BasicDataVector<Scalar>& x,
                                     const Eigen::MatrixBase<DerivedP>& population, Eigen::Index k,
                                     Metric metric = Metric::Euclidean,
                                     NeighborRule rule = NeighborRule::Nearest) {
  return {knn_distance(x.values, population, k, metric, rule), x.t, population.cols()};
}

// lambda = 1 / (1 + exp(-alpha * d + beta)). Results that round to 0 or 1 in
// floating point are pulled back to the nearest representable interior value.
template <typename Scalar>
BasicMagnitude<Scalar> magnitude(Scalar d, Scalar alpha, Scalar beta) {
  using std::exp;
  const Scalar lambda = Scalar(1) / (Scalar(1) + exp(-alpha * d + beta));
  constexpr Scalar lo = std::numeric_limits<Scalar>::min();
  constexpr Scalar hi = Scalar(1) - std::numeric_limits<Scalar>::epsilon() / Scalar(2);
  return {std::clamp(lambda, lo, hi)};
}

}  // namespace softod
