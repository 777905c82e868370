#include "softod/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softod/error.hpp"

namespace softod {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

// ceil() with a small guard so that e.g. 2.5 * 5 computed as 12.500000000000002
// or 15 / 3 computed as 5.000000000000001 do not round up spuriously.
std::int64_t safe_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

void validate(const WindowConfig& cfg) {
  if (cfg.window < 2) invalid("window W must be at least 2");
  // k may exceed W - 1; block scoring then uses all W - 1 peers.
  if (cfg.k < 1) invalid("k must be at least 1");
  if (cfg.step < 1) invalid("landmark step w must be at least 1");
  if (!(cfg.xi > 1.0) || !std::isfinite(cfg.xi)) invalid("xi must be a finite value > 1");
  if (!std::isfinite(cfg.alpha) || !(cfg.alpha > 0.0)) invalid("alpha must be finite and > 0");
  if (!std::isfinite(cfg.beta)) invalid("beta must be finite");
  if (!(cfg.lambda_c > 0.0 && cfg.lambda_c < 1.0)) invalid("lambda_c must lie in (0,1)");
  if (cfg.theta && !(*cfg.theta > 0.0)) invalid("theta must be > 0");
  if (!(cfg.theta_quantile >= 0.0 && cfg.theta_quantile <= 1.0)) {
    invalid("theta quantile must lie in [0,1]");
  }
  if (!(cfg.significance > 0.0 && cfg.significance < 1.0)) invalid("significance must lie in (0,1)");
  if (landmark_plan(cfg).steps < 1) invalid("landmark plan admits no expansion step");
}

LandmarkPlan landmark_plan(const WindowConfig& cfg) {
  if (cfg.window < 1 || cfg.step < 1 || !(cfg.xi > 1.0) || !std::isfinite(cfg.xi)) {
    invalid("landmark plan needs W >= 1, w >= 1 and xi > 1");
  }
  const auto w = static_cast<double>(cfg.window);
  return {safe_ceil(cfg.xi * w), safe_ceil((cfg.xi - 1.0) * w / static_cast<double>(cfg.step))};
}

WindowState::WindowState(const WindowConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  plan_ = landmark_plan(cfg_);
  block_.reserve(static_cast<std::size_t>(cfg_.window));
}

void WindowState::push(const DataVector& v) {
  if (v.dims() < 1) throw Error(ErrorCode::DimensionMismatch, "observation has no dimensions");
  if (dims_ != 0 && v.dims() != dims_) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dims_) +
                                                  " dimensions, got " + std::to_string(v.dims()));
  }
  if (!v.values.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "observation t=" + std::to_string(v.t) + " is not finite");
  }
  if (v.t <= last_t_) {
    throw Error(ErrorCode::NonMonotonicTime, "arrival index " + std::to_string(v.t) +
                                                 " does not follow " + std::to_string(last_t_));
  }
  dims_ = v.dims();
  last_t_ = v.t;

  if (block_index_ == 0 || block_complete()) {
    block_.clear();
    ++block_index_;
  }
  block_.push_back(v);

  if (mode_ == WindowMode::Landmark) {
    if (static_cast<std::int64_t>(landmark_.size()) < plan_.capacity) landmark_.push_back(v);
    ++arrivals_since_expansion_;
  }
}

void WindowState::enter_landmark() {
  if (mode_ == WindowMode::Landmark) {
    throw Error(ErrorCode::AlreadyInLandmarkMode, "a landmark episode is already active");
  }
  if (!block_complete()) {
    throw Error(ErrorCode::IncompleteBlock, "landmark must start from a complete block");
  }
  mode_ = WindowMode::Landmark;
  landmark_ = block_;
  h_ = 0;
  arrivals_since_expansion_ = 0;
}

bool WindowState::expansion_ready() const {
  if (mode_ != WindowMode::Landmark || h_ >= plan_.steps) return false;
  if (arrivals_since_expansion_ >= cfg_.step) return true;
  return arrivals_since_expansion_ > 0 &&
         static_cast<std::int64_t>(landmark_.size()) == plan_.capacity;
}

void WindowState::expand_landmark() {
  if (mode_ != WindowMode::Landmark) {
    throw Error(ErrorCode::NotInLandmarkMode, "no landmark episode is active");
  }
  if (h_ >= plan_.steps) {
    throw Error(ErrorCode::LandmarkExhausted,
                "all " + std::to_string(plan_.steps) + " expansion steps already taken");
  }
  if (!expansion_ready()) {
    throw Error(ErrorCode::InsufficientArrivals,
                std::to_string(arrivals_since_expansion_) + " of " + std::to_string(cfg_.step) +
                    " arrivals since the last expansion");
  }
  ++h_;
  if (static_cast<std::int64_t>(landmark_.size()) == plan_.capacity) {
    arrivals_since_expansion_ = 0;
  } else {
    arrivals_since_expansion_ -= cfg_.step;
  }
}

void WindowState::close_landmark() {
  mode_ = WindowMode::Sliding;
  landmark_.clear();
  h_ = 0;
  arrivals_since_expansion_ = 0;
}

bool operator==(const WindowState& a, const WindowState& b) {
  auto same = [](const std::vector<DataVector>& x, const std::vector<DataVector>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].t != y[i].t || x[i].values != y[i].values) return false;
    }
    return true;
  };
  return a.block_index_ == b.block_index_ && a.h_ == b.h_ && a.mode_ == b.mode_ &&
         a.arrivals_since_expansion_ == b.arrivals_since_expansion_ && a.last_t_ == b.last_t_ &&
         same(a.block_, b.block_) && same(a.landmark_, b.landmark_);
}

}  // namespace softod
