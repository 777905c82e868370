#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "softod/error.hpp"
#include "softod/oracle.hpp"
#include "softod/trend.hpp"

using namespace softod;

namespace {

std::vector<double> iota_times(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1);
  return t;
}

// Random series where roughly `tie_share` of the values repeat an earlier one.
std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double tie_share) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    if (!v.empty() && u(rng) < tie_share) {
      std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
      v.push_back(v[pick(rng)]);
    } else {
      v.push_back(u(rng));
    }
  }
  return v;
}

void expect_code(ErrorCode code, const auto& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(MannKendallS, SmallSeries) {
  EXPECT_EQ(mann_kendall_s(std::vector<double>{1, 2, 3}), 3);
  EXPECT_EQ(mann_kendall_s(std::vector<double>{4, 4, 4}), 0);
  EXPECT_EQ(mann_kendall_s(std::vector<double>{3, 1, 2}), -1);
  EXPECT_EQ(mann_kendall_s(std::vector<double>{2, 1}), -1);
}

TEST(MannKendallS, RejectsShortSeries) {
  expect_code(ErrorCode::SeriesTooShort, [] { mann_kendall_s(std::vector<double>{1.0}); });
  expect_code(ErrorCode::SeriesTooShort, [] { mann_kendall_z(std::vector<double>{}); });
}

TEST(MannKendallZ, IncreasingRun) {
  const auto r = mann_kendall_z(std::vector<double>{1, 2, 3, 4, 5});
  EXPECT_EQ(r.s, 10);
  EXPECT_NEAR(r.var_s, 50.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.z, 2.2045407685048604, 1e-12);
  EXPECT_EQ(r.trend, TrendVerdict::Increasing);
}

TEST(MannKendallZ, DecreasingRun) {
  const auto r = mann_kendall_z(std::vector<double>{5, 4, 3, 2, 1});
  EXPECT_EQ(r.s, -10);
  EXPECT_NEAR(r.z, -2.2045407685048604, 1e-12);
  EXPECT_EQ(r.trend, TrendVerdict::Decreasing);
}

TEST(MannKendallZ, ConstantSeriesIsNeutral) {
  const auto r = mann_kendall_z(std::vector<double>{0.7, 0.7, 0.7, 0.7});
  EXPECT_EQ(r.s, 0);
  EXPECT_DOUBLE_EQ(r.var_s, 0.0);
  EXPECT_DOUBLE_EQ(r.z, 0.0);
  EXPECT_EQ(r.trend, TrendVerdict::Neutral);
}

TEST(MannKendallZ, ShortSeriesNeverSignificantAtFivePercent) {
  // Largest attainable |Z| for n = 2, 3, 4 is 0, 1.0445 and 1.6984.
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto r = mann_kendall_z(iota_times(n));
    EXPECT_EQ(r.trend, TrendVerdict::Neutral) << n;
  }
  EXPECT_NEAR(mann_kendall_z(iota_times(4)).z, 1.6984155512168937, 1e-12);
}

TEST(MannKendallZ, SignificanceLevelMovesTheCut) {
  const std::vector<double> v{0.9, 0.95, 0.99};
  EXPECT_EQ(mann_kendall_z(v, 0.05).trend, TrendVerdict::Neutral);
  EXPECT_EQ(mann_kendall_z(v, 0.3).trend, TrendVerdict::Increasing);
  expect_code(ErrorCode::InvalidConfig, [&] { mann_kendall_z(v, 0.0); });
  expect_code(ErrorCode::InvalidConfig, [&] { mann_kendall_z(v, 1.0); });
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.995), 2.5758293035489004, 1e-12);
  EXPECT_NEAR(normal_quantile(0.001), -3.0902323061678132, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-10), -6.3613409024040557, 1e-10);
  EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
}

TEST(NormalQuantile, MatchesBisection) {
  for (int i = 1; i < 2000; ++i) {
    const double p = i / 2000.0;
    EXPECT_NEAR(normal_quantile(p), oracle::normal_quantile(p), 1e-9) << p;
  }
}

TEST(SenSlope, Examples) {
  EXPECT_DOUBLE_EQ(sen_slope(std::vector<double>{1, 3, 5}, iota_times(3)), 2.0);
  EXPECT_DOUBLE_EQ(sen_slope(std::vector<double>{1, 2, 10}, iota_times(3)), 4.5);
  EXPECT_DOUBLE_EQ(sen_slope(std::vector<double>{2, 2, 2, 2}, iota_times(4)), 0.0);
  EXPECT_NEAR(sen_slope(std::vector<double>{1, 2, 10, 11}, iota_times(4)), 3.916666666666667,
              1e-12);
}

TEST(SenSlope, ConsecutiveMode) {
  const std::vector<double> v{1, 2, 10, 11};
  EXPECT_DOUBLE_EQ(sen_slope(v, iota_times(4), SenMode::Consecutive), 1.0);
  EXPECT_DOUBLE_EQ(sen_slope(std::vector<double>{1, 2, 10}, iota_times(3), SenMode::Consecutive),
                   4.5);
}

TEST(SenSlope, UsesStepTimes) {
  // Same values on a stretched clock: slopes halve.
  const std::vector<double> v{1, 3, 5};
  EXPECT_DOUBLE_EQ(sen_slope(v, std::vector<double>{5, 7, 9}), 1.0);
}

TEST(SenSlope, Errors) {
  expect_code(ErrorCode::SeriesTooShort,
              [] { sen_slope(std::vector<double>{1.0}, std::vector<double>{1.0}); });
  expect_code(ErrorCode::DimensionMismatch,
              [] { sen_slope(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}); });
  expect_code(ErrorCode::NonMonotonicTime,
              [] { sen_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 3}); });
}

TEST(SenSlope, SeriesOverload) {
  LambdaSeries s;
  s.push(0.2, 5);
  s.push(0.4, 8);
  s.push(0.6, 11);
  EXPECT_NEAR(sen_slope(s), 0.2 / 3.0, 1e-15);
  EXPECT_EQ(mann_kendall_z(s).s, 3);
}

TEST(Ensemble, TruthTable) {
  struct Row {
    TrendVerdict mk;
    double sen;
    TrendVerdict expected;
  };
  const Row rows[] = {
      {TrendVerdict::Increasing, 0.1, TrendVerdict::Increasing},
      {TrendVerdict::Increasing, 0.0, TrendVerdict::Neutral},
      {TrendVerdict::Increasing, -0.1, TrendVerdict::Neutral},
      {TrendVerdict::Decreasing, 0.1, TrendVerdict::Neutral},
      {TrendVerdict::Decreasing, 0.0, TrendVerdict::Neutral},
      {TrendVerdict::Decreasing, -0.1, TrendVerdict::Decreasing},
      {TrendVerdict::Neutral, 0.1, TrendVerdict::Neutral},
      {TrendVerdict::Neutral, 0.0, TrendVerdict::Neutral},
      {TrendVerdict::Neutral, -0.1, TrendVerdict::Neutral},
  };
  for (const auto& r : rows) {
    EXPECT_EQ(ensemble_trend(r.mk, r.sen), r.expected)
        << to_string(r.mk) << " sen=" << r.sen;
  }
}

TEST(TrendProperties, AgreesWithBruteForce) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 60);
    const auto v = random_series(rng, n, 0.2);
    const auto times = iota_times(n);
    const auto r = mann_kendall_z(v);
    ASSERT_EQ(r.s, oracle::mann_kendall_s(v));
    ASSERT_NEAR(r.var_s, oracle::mann_kendall_var(v), 1e-9 * std::max(1.0, r.var_s));
    ASSERT_NEAR(r.z, oracle::mann_kendall_z(v), 1e-12);
    ASSERT_NEAR(sen_slope(v, times), oracle::sen_slope(v, times), 1e-12);
  }
}

TEST(TrendProperties, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto v = random_series(rng, 3 + static_cast<std::size_t>(i % 30), 0.2);
    std::vector<double> w;
    for (const double x : v) w.push_back(std::exp(3.0 * x) - 7.0);
    EXPECT_EQ(mann_kendall_s(v), mann_kendall_s(w));
    EXPECT_EQ(mann_kendall_z(v).trend, mann_kendall_z(w).trend);
  }
}

TEST(TrendProperties, ReversalNegatesZ) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    auto v = random_series(rng, 3 + static_cast<std::size_t>(i % 40), 0.0);
    const auto fwd = mann_kendall_z(v);
    std::reverse(v.begin(), v.end());
    const auto rev = mann_kendall_z(v);
    EXPECT_EQ(fwd.s, -rev.s);
    EXPECT_NEAR(fwd.z, -rev.z, 1e-12);
  }
}

TEST(TrendProperties, NeutralWhenAllEqual) {
  for (std::size_t n = 2; n < 40; ++n) {
    const std::vector<double> v(n, 0.25);
    EXPECT_EQ(mann_kendall_z(v).trend, TrendVerdict::Neutral);
    EXPECT_DOUBLE_EQ(sen_slope(v, iota_times(n)), 0.0);
    EXPECT_EQ(ensemble_trend(mann_kendall_z(v).trend, sen_slope(v, iota_times(n))),
              TrendVerdict::Neutral);
  }
}

TEST(TrendProperties, FloatScalar) {
  const std::vector<float> v{1, 2, 3, 4, 5};
  const std::vector<float> t{1, 2, 3, 4, 5};
  EXPECT_EQ(mann_kendall_s(v), 10);
  EXPECT_FLOAT_EQ(sen_slope(v, t), 1.0f);
}
