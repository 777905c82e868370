#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace softod {

// Arrival index of an observation. 1-based; 0 means "nothing seen yet".
using TimeIndex = std::int64_t;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// One M-dimensional observation tagged with its arrival index.
template <typename Scalar>
struct BasicDataVector {
  VectorX<Scalar> values;
  TimeIndex t = 0;

  Eigen::Index dims() const { return values.size(); }
};

using DataVector = BasicDataVector<double>;

enum class TrendVerdict { Increasing, Decreasing, Neutral };

constexpr std::string_view to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::Increasing: return "increasing";
    case TrendVerdict::Decreasing: return "decreasing";
    case TrendVerdict::Neutral: return "neutral";
  }
  return "neutral";
}

enum class CandidateStatus { Candidate, ConfirmedOutlier, Normal };

constexpr std::string_view to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Candidate: return "candidate";
    case CandidateStatus::ConfirmedOutlier: return "confirmed_outlier";
    case CandidateStatus::Normal: return "normal";
  }
  return "candidate";
}

}  // namespace softod
