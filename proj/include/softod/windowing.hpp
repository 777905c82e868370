#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "softod/scoring.hpp"
#include "softod/trend.hpp"
#include "softod/types.hpp"

namespace softod {

// Detector parameters. Defaults are the benchmark settings
// (W=5, alpha=beta=2, w=3, xi=2.5) plus the chosen lambda_c / theta rules.
struct WindowConfig {
  std::int64_t window = 5;         // W, block length
  std::int64_t k = 2;              // neighbours in the kNN score
  std::int64_t step = 3;           // w, landmark growth per expansion
  double xi = 2.5;                 // landmark capacity factor
  double alpha = 2.0;
  double beta = 2.0;
  double lambda_c = 0.5;           // candidacy threshold on lambda
  std::optional<double> theta;     // absolute distance threshold; unset -> quantile rule
  double theta_quantile = 0.9;     // quantile of the triggering block's kNN scores
  double significance = 0.05;      // two-sided Mann-Kendall level
  Metric metric = Metric::Euclidean;
  NeighborRule neighbor_rule = NeighborRule::Nearest;
  SenMode sen_mode = SenMode::AllPairs;
};

// Throws InvalidConfig on any out-of-range parameter.
void validate(const WindowConfig& cfg);

struct LandmarkPlan {
  std::int64_t capacity = 0;  // ceil(xi * W)
  std::int64_t steps = 0;     // y = ceil((xi - 1) * W / w)
};

LandmarkPlan landmark_plan(const WindowConfig& cfg);

enum class WindowMode { Sliding, Landmark };

// Tumbling block window of length W plus the landmark window that is opened
// from a complete block and grown in steps of w up to its capacity.
//
// push() feeds every observation; while a landmark is open, arrivals are
// also appended to it until it is full. expand_landmark() consumes the
// arrivals that accumulated since the previous step.
class WindowState {
 public:
  explicit WindowState(const WindowConfig& cfg);

  void push(const DataVector& v);
  void enter_landmark();
  void expand_landmark();
  // Returns to Sliding mode, discarding the landmark.
  void close_landmark();

  // True once a full step of w arrivals is available, or the landmark is
  // full and the final (truncated) step has new data.
  bool expansion_ready() const;
  bool block_complete() const { return static_cast<std::int64_t>(block_.size()) == cfg_.window; }
  bool exhausted() const { return mode_ == WindowMode::Landmark && h_ == plan_.steps; }

  std::int64_t block_index() const { return block_index_; }
  const std::vector<DataVector>& block() const { return block_; }
  const std::vector<DataVector>& landmark() const { return landmark_; }
  std::int64_t h() const { return h_; }
  WindowMode mode() const { return mode_; }
  const LandmarkPlan& plan() const { return plan_; }
  const WindowConfig& config() const { return cfg_; }
  TimeIndex last_t() const { return last_t_; }
  std::int64_t arrivals_since_expansion() const { return arrivals_since_expansion_; }

  friend bool operator==(const WindowState& a, const WindowState& b);

 private:
  WindowConfig cfg_;
  LandmarkPlan plan_;
  Eigen::Index dims_ = 0;
  TimeIndex last_t_ = 0;
  std::int64_t block_index_ = 0;
  std::vector<DataVector> block_;
  std::vector<DataVector> landmark_;
  std::int64_t h_ = 0;
  std::int64_t arrivals_since_expansion_ = 0;
  WindowMode mode_ = WindowMode::Sliding;
};

}  // namespace softod
