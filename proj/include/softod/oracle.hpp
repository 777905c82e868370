#pragma once

// Brute-force reference implementations of the trend statistics. They follow
// the textbook definitions literally (double loops, full sorts, bisection)
// and share no code with trend.hpp, so either can be used to check the other.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace softod::oracle {

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

inline std::int64_t mann_kendall_s(const std::vector<double>& v) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) s += sign(v[j] - v[i]);
  }
  return s;
}

inline double mann_kendall_var(const std::vector<double>& v) {
  std::map<double, std::int64_t> counts;
  for (const double x : v) ++counts[x];
  const auto n = static_cast<double>(v.size());
  double ties = 0.0;
  for (const auto& [value, t] : counts) {
    const auto tp = static_cast<double>(t);
    ties += tp * (tp - 1.0) * (2.0 * tp + 5.0);
  }
  return (n * (n - 1.0) * (2.0 * n + 5.0) - ties) / 18.0;
}

inline double mann_kendall_z(const std::vector<double>& v) {
  const auto s = static_cast<double>(mann_kendall_s(v));
  const double var = mann_kendall_var(v);
  if (s == 0.0 || var <= 0.0) return 0.0;
  return (s > 0.0 ? s - 1.0 : s + 1.0) / std::sqrt(var);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double sen_slope(const std::vector<double>& v, const std::vector<double>& times) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      slopes.push_back((v[j] - v[i]) / (times[j] - times[i]));
    }
  }
  return median(std::move(slopes));
}

// Upper-tail standard normal quantile by bisection on the CDF.
inline double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace softod::oracle
