#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softod {

enum class ErrorCode {
  InvalidConfig,
  DimensionMismatch,
  NonFiniteValue,
  NonMonotonicTime,
  AlreadyInLandmarkMode,
  NotInLandmarkMode,
  IncompleteBlock,
  LandmarkExhausted,
  InsufficientArrivals,
  PopulationTooSmall,
  SeriesTooShort,
  InsufficientSeries,
  MissingLabel,
  NoLabeledOutliers,
  FileNotFound,
  MalformedRow,
  UnknownLabelValue,
  UnsupportedFormat,
  InconsistentReport,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::AlreadyInLandmarkMode: return "AlreadyInLandmarkMode";
    case ErrorCode::NotInLandmarkMode: return "NotInLandmarkMode";
    case ErrorCode::IncompleteBlock: return "IncompleteBlock";
    case ErrorCode::LandmarkExhausted: return "LandmarkExhausted";
    case ErrorCode::InsufficientArrivals: return "InsufficientArrivals";
    case ErrorCode::PopulationTooSmall: return "PopulationTooSmall";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InsufficientSeries: return "InsufficientSeries";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::NoLabeledOutliers: return "NoLabeledOutliers";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownLabelValue: return "UnknownLabelValue";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InconsistentReport: return "InconsistentReport";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures surface as this exception. `code()` is stable and is
// what the CLI prints in its error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Row-level parse failures carry the offending 0-based data row.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, const std::string& message)
      : Error(code, "row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace softod
