#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "softod/error.hpp"
#include "softod/scoring.hpp"

using namespace softod;

namespace {

MatrixX<double> row(std::initializer_list<double> xs) {
  MatrixX<double> m(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index j = 0;
  for (const double x : xs) m(0, j++) = x;
  return m;
}

VectorX<double> vec(std::initializer_list<double> xs) {
  VectorX<double> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const double x : xs) v(i++) = x;
  return v;
}

// Sort-everything reference for the kNN mean distance.
double brute_knn(const VectorX<double>& x, const MatrixX<double>& pop, Eigen::Index k) {
  std::vector<double> d;
  for (Eigen::Index j = 0; j < pop.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (x(i) - pop(i, j)) * (x(i) - pop(i, j));
    d.push_back(std::sqrt(s));
  }
  std::sort(d.begin(), d.end());
  return std::accumulate(d.begin(), d.begin() + k, 0.0) / static_cast<double>(k);
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_DOUBLE_EQ(pairwise_distance(vec({1, 2}), vec({1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(pairwise_distance(vec({0}), vec({3})), 3.0);
  EXPECT_DOUBLE_EQ(pairwise_distance(vec({0, 0}), vec({3, 4})), 5.0);
  EXPECT_DOUBLE_EQ(pairwise_distance(vec({0, 0}), vec({3, 4}), Metric::Manhattan), 7.0);
  EXPECT_DOUBLE_EQ(pairwise_distance(vec({0, 0}), vec({3, 4}), Metric::Chebyshev), 4.0);
}

TEST(Distance, DimensionMismatch) {
  try {
    pairwise_distance(vec({0, 0}), vec({1, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Knn, Examples) {
  EXPECT_DOUBLE_EQ(knn_distance(vec({10}), row({0, 0, 0}), 2), 10.0);
  EXPECT_DOUBLE_EQ(knn_distance(vec({3}), row({1, 2, 4}), 2), 1.0);
  EXPECT_DOUBLE_EQ(knn_distance(vec({5}), row({5, 5, 9}), 2), 0.0);
  EXPECT_DOUBLE_EQ(knn_distance(vec({3}), row({1, 2, 4}), 2, Metric::Euclidean,
                                NeighborRule::Farthest),
                   1.5);
}

TEST(Knn, ScoreCarriesIndexAndPopulationSize) {
  const DataVector x{vec({3}), 42};
  const auto s = knn_score(x, row({1, 2, 4}), 2);
  EXPECT_DOUBLE_EQ(s.d, 1.0);
  EXPECT_EQ(s.t, 42);
  EXPECT_EQ(s.window_size, 3);
}

TEST(Knn, PopulationTooSmall) {
  for (const Eigen::Index k : {Eigen::Index{0}, Eigen::Index{4}}) {
    try {
      knn_distance(vec({3}), row({1, 2, 4}), k);
      FAIL() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::PopulationTooSmall);
    }
  }
}

TEST(Knn, PropertiesOnRandomPopulations) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index dims = 1 + rep % 6;
    const Eigen::Index n = 3 + rep % 15;
    MatrixX<double> pop(dims, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < dims; ++i) pop(i, j) = g(rng);
    VectorX<double> x(dims);
    for (Eigen::Index i = 0; i < dims; ++i) x(i) = g(rng);

    double prev = -1.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
      const double d = knn_distance(x, pop, k);
      EXPECT_GE(d, 0.0);
      EXPECT_NEAR(d, brute_knn(x, pop, k), 1e-12);
      EXPECT_GE(d, prev - 1e-12);  // non-decreasing in k
      prev = d;
    }
    EXPECT_NEAR(knn_distance(x, pop, n), distances_to_columns(x, pop).mean(), 1e-12);

    // Column order does not matter.
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    MatrixX<double> shuffled(dims, n);
    for (Eigen::Index j = 0; j < n; ++j) shuffled.col(j) = pop.col(perm[static_cast<std::size_t>(j)]);
    const Eigen::Index k = 1 + rep % n;
    EXPECT_NEAR(knn_distance(x, pop, k), knn_distance(x, shuffled, k), 1e-12);

    // A point beyond the current k-th neighbour leaves the score unchanged.
    MatrixX<double> grown(dims, n + 1);
    grown.leftCols(n) = pop;
    grown.col(n) = x + VectorX<double>::Constant(dims, 1e6);
    EXPECT_DOUBLE_EQ(knn_distance(x, pop, k), knn_distance(x, grown, k));
  }
}

TEST(Magnitude, Examples) {
  EXPECT_DOUBLE_EQ(magnitude(1.0, 2.0, 2.0).lambda, 0.5);
  EXPECT_NEAR(magnitude(0.0, 2.0, 2.0).lambda, 0.11920292202211755, 1e-15);
  EXPECT_NEAR(magnitude(10.0, 2.0, 2.0).lambda, 1.0, 1e-7);
  EXPECT_LT(magnitude(10.0, 2.0, 2.0).lambda, 1.0);
}

TEST(Magnitude, StaysInsideOpenInterval) {
  for (const double d : {0.0, 1e-300, 50.0, 1e3, 1e300}) {
    const double l = magnitude(d, 2.0, 2.0).lambda;
    EXPECT_GT(l, 0.0) << d;
    EXPECT_LT(l, 1.0) << d;
  }
  EXPECT_GT(magnitude(0.0, 2.0, 800.0).lambda, 0.0);
}

TEST(Magnitude, StrictlyIncreasingOnRandomPairs) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    ASSERT_LT(magnitude(a, 2.0, 2.0).lambda, magnitude(b, 2.0, 2.0).lambda) << a << " " << b;
  }
}
