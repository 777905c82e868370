#pragma once

#include <functional>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "softod/scoring.hpp"
#include "softod/trend.hpp"
#include "softod/types.hpp"
#include "softod/windowing.hpp"

namespace softod {

struct CandidateRecord {
  DataVector vector;
  std::int64_t first_flagged_block = 0;
  LambdaSeries lambda_series;
  double last_d = 0.0;
  CandidateStatus status = CandidateStatus::Candidate;
  // Landmark step whose score is the last entry of lambda_series.
  std::int64_t scored_at_step = 0;
};

struct Decision {
  TimeIndex t = 0;
  CandidateStatus status = CandidateStatus::Normal;
  double d_final = 0.0;
  TrendVerdict trend = TrendVerdict::Neutral;
  TimeIndex resolved_at = 0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

// Receives the scored vector's arrival index and the arrival indices of the
// population it was scored against.
using PopulationObserver = std::function<void(TimeIndex, std::span<const TimeIndex>)>;

// Packs the data vectors into a dims x n matrix, one column per vector.
MatrixX<double> as_columns(std::span<const DataVector> vectors);

// kNN score of every block member against the other members of the block.
std::vector<DistanceScore> score_block(std::span<const DataVector> block, const WindowConfig& cfg,
                                       const PopulationObserver& observer = {});

// Linear-interpolated quantile of the block scores; the default theta.
double score_quantile(std::span<const DistanceScore> scores, double q);

std::vector<CandidateRecord> flag_candidates(std::span<const DataVector> block,
                                             const WindowConfig& cfg,
                                             std::int64_t block_index = 1);

// Same as above when the block scores are already known.
std::vector<CandidateRecord> flag_candidates(std::span<const DataVector> block,
                                             std::span<const DistanceScore> scores,
                                             const WindowConfig& cfg, std::int64_t block_index);

// Re-scores each pending candidate against the landmark (self and evicted
// vectors excluded) and appends the new magnitude. Records already scored at
// `step` are left untouched.
void rescore_candidates(std::span<CandidateRecord> candidates, std::span<const DataVector> landmark,
                        std::int64_t step, const WindowConfig& cfg,
                        const std::unordered_set<TimeIndex>& evicted = {},
                        const PopulationObserver& observer = {});

// nullopt means the candidate stays pending.
std::optional<Decision> resolve_candidate(const CandidateRecord& c, const WindowConfig& cfg,
                                          double theta, bool landmark_exhausted, TimeIndex now);

// One detector per stream. Feed observations in arrival order; each call
// returns the candidates that reached a terminal status on that arrival.
class Detector {
 public:
  explicit Detector(const WindowConfig& cfg);

  std::vector<Decision> observe(const DataVector& v);

  // End of stream: resolves every pending candidate with the landmark treated
  // as exhausted. The trailing partial block is never scored.
  std::vector<Decision> flush();

  void set_population_observer(PopulationObserver obs) { observer_ = std::move(obs); }

  const WindowConfig& config() const { return cfg_; }
  const WindowState& window() const { return window_; }
  const std::vector<CandidateRecord>& pending() const { return pending_; }
  double episode_theta() const { return theta_; }
  bool evicted(TimeIndex t) const { return evicted_.contains(t); }

 private:
  void resolve_pending(bool exhausted, TimeIndex now, std::vector<Decision>& out);

  WindowConfig cfg_;
  WindowState window_;
  std::vector<CandidateRecord> pending_;
  std::unordered_set<TimeIndex> evicted_;
  double theta_ = 0.0;
  PopulationObserver observer_;
};

}  // namespace softod
