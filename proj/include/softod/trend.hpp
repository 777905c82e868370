#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softod/error.hpp"
#include "softod/types.hpp"

namespace softod {

// A candidate's magnitude history. `step_times` holds the population size
// (landmark length) at which each value was taken.
template <typename Scalar>
struct BasicLambdaSeries {
  std::vector<Scalar> values;
  std::vector<Scalar> step_times;

  void push(Scalar lambda, Scalar step_time) {
    values.push_back(lambda);
    step_times.push_back(step_time);
  }
  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

using LambdaSeries = BasicLambdaSeries<double>;

struct MkResult {
  std::int64_t s = 0;
  double var_s = 0.0;
  double z = 0.0;
  TrendVerdict trend = TrendVerdict::Neutral;
};

enum class SenMode { AllPairs, Consecutive };

constexpr std::string_view to_string(SenMode m) {
  return m == SenMode::AllPairs ? "all_pairs" : "consecutive";
}

namespace detail {

inline void require_length(std::size_t n) {
  if (n < 2) {
    throw Error(ErrorCode::SeriesTooShort,
                "trend analysis needs at least 2 points, got " + std::to_string(n));
  }
}

// Sorts `v` and returns the number of strictly inverted pairs.
template <typename Scalar>
std::int64_t sort_count_inversions(std::vector<Scalar>& v, std::vector<Scalar>& scratch,
                                   std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = sort_count_inversions(v, scratch, lo, mid) +
                     sort_count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      scratch[out++] = v[j++];
    } else {
      scratch[out++] = v[i++];
    }
  }
  while (i < mid) scratch[out++] = v[i++];
  while (j < hi) scratch[out++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return inv;
}

struct PairCounts {
  std::int64_t inversions = 0;
  std::vector<std::int64_t> tie_groups;  // sizes of groups with more than one member
};

template <typename Scalar>
PairCounts count_pairs(std::span<const Scalar> values) {
  std::vector<Scalar> sorted(values.begin(), values.end());
  std::vector<Scalar> scratch(sorted.size());
  PairCounts out;
  out.inversions = sort_count_inversions(sorted, scratch, 0, sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > 1) out.tie_groups.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return out;
}

template <typename Scalar>
Scalar median_in_place(std::vector<Scalar>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const Scalar upper = v[mid];
  if (n % 2 == 1) return upper;
  const Scalar lower = *std::max_element(v.begin(), v.begin() + mid);
  return (lower + upper) / Scalar(2);
}

}  // namespace detail

// Standard normal quantile. Acklam's rational approximation followed by one
// Halley step against erfc; absolute error is well below 1e-9 on (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "normal quantile requires p in (0,1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

// S = sum over i<j of sign(v[j] - v[i]), computed from a merge-sort inversion
// count: S = pairs - tied_pairs - 2 * inversions.
template <typename Scalar>
std::int64_t mann_kendall_s(std::span<const Scalar> values) {
  detail::require_length(values.size());
  const auto n = static_cast<std::int64_t>(values.size());
  const auto counts = detail::count_pairs(values);
  std::int64_t tied_pairs = 0;
  for (const std::int64_t t : counts.tie_groups) tied_pairs += t * (t - 1) / 2;
  return n * (n - 1) / 2 - tied_pairs - 2 * counts.inversions;
}

template <typename Scalar>
std::int64_t mann_kendall_s(const std::vector<Scalar>& values) {
  return mann_kendall_s(std::span<const Scalar>(values));
}

template <typename Scalar>
MkResult mann_kendall_z(std::span<const Scalar> values, double significance = 0.05) {
  detail::require_length(values.size());
  if (!(significance > 0.0 && significance < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "significance must lie in (0,1)");
  }
  const auto n = static_cast<std::int64_t>(values.size());
  const auto counts = detail::count_pairs(values);

  std::int64_t tied_pairs = 0;
  std::int64_t tie_term = 0;
  for (const std::int64_t t : counts.tie_groups) {
    tied_pairs += t * (t - 1) / 2;
    tie_term += t * (t - 1) * (2 * t + 5);
  }

  MkResult r;
  r.s = n * (n - 1) / 2 - tied_pairs - 2 * counts.inversions;
  r.var_s = static_cast<double>(n * (n - 1) * (2 * n + 5) - tie_term) / 18.0;
  if (r.var_s <= 0.0 || r.s == 0) {
    r.z = 0.0;
  } else if (r.s > 0) {
    r.z = static_cast<double>(r.s - 1) / std::sqrt(r.var_s);
  } else {
    r.z = static_cast<double>(r.s + 1) / std::sqrt(r.var_s);
  }

  const double critical = normal_quantile(1.0 - significance / 2.0);
  if (r.z > critical) {
    r.trend = TrendVerdict::Increasing;
  } else if (r.z < -critical) {
    r.trend = TrendVerdict::Decreasing;
  }
  return r;
}

template <typename Scalar>
MkResult mann_kendall_z(const std::vector<Scalar>& values, double significance = 0.05) {
  return mann_kendall_z(std::span<const Scalar>(values), significance);
}

template <typename Scalar>
MkResult mann_kendall_z(const BasicLambdaSeries<Scalar>& series, double significance = 0.05) {
  return mann_kendall_z(std::span<const Scalar>(series.values), significance);
}

// Median of pairwise slopes (all pairs i<j, or adjacent pairs only).
template <typename Scalar>
Scalar sen_slope(std::span<const Scalar> values, std::span<const Scalar> times,
                 SenMode mode = SenMode::AllPairs) {
  detail::require_length(values.size());
  if (times.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "series values and step times differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::NonMonotonicTime, "series step times must be strictly increasing");
    }
  }

  const std::size_t n = values.size();
  std::vector<Scalar> slopes;
  if (mode == SenMode::Consecutive) {
    slopes.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      slopes.push_back((values[i + 1] - values[i]) / (times[i + 1] - times[i]));
    }
  } else {
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        slopes.push_back((values[j] - values[i]) / (times[j] - times[i]));
      }
    }
  }
  return detail::median_in_place(slopes);
}

template <typename Scalar>
Scalar sen_slope(const std::vector<Scalar>& values, const std::vector<Scalar>& times,
                 SenMode mode = SenMode::AllPairs) {
  return sen_slope(std::span<const Scalar>(values), std::span<const Scalar>(times), mode);
}

template <typename Scalar>
Scalar sen_slope(const BasicLambdaSeries<Scalar>& series, SenMode mode = SenMode::AllPairs) {
  return sen_slope(std::span<const Scalar>(series.values),
                   std::span<const Scalar>(series.step_times), mode);
}

// Conjunctive combination: a direction survives only if both tests agree.
template <typename Scalar>
TrendVerdict ensemble_trend(TrendVerdict mk, Scalar sen) {
  if (mk == TrendVerdict::Increasing && sen > Scalar(0)) return TrendVerdict::Increasing;
  if (mk == TrendVerdict::Decreasing && sen < Scalar(0)) return TrendVerdict::Decreasing;
  return TrendVerdict::Neutral;
}

}  // namespace softod
