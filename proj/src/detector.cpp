#include "softod/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softod/error.hpp"

namespace softod {

namespace {

Eigen::Index effective_k(const WindowConfig& cfg, Eigen::Index population) {
  return std::min<Eigen::Index>(cfg.k, population);
}

struct Population {
  MatrixX<double> columns;
  std::vector<TimeIndex> times;
};

template <typename Keep>
Population gather(std::span<const DataVector> vectors, Keep keep) {
  Population p;
  std::vector<const DataVector*> kept;
  kept.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (keep(v)) kept.push_back(&v);
  }
  if (kept.empty()) return p;
  p.columns.resize(kept.front()->dims(), static_cast<Eigen::Index>(kept.size()));
  p.times.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    p.columns.col(static_cast<Eigen::Index>(i)) = kept[i]->values;
    p.times.push_back(kept[i]->t);
  }
  return p;
}

double score_against(const DataVector& x, const Population& pop, const WindowConfig& cfg,
                     const PopulationObserver& observer) {
  if (pop.times.empty()) {
    throw Error(ErrorCode::PopulationTooSmall,
                "no population left to score t=" + std::to_string(x.t));
  }
  if (observer) observer(x.t, pop.times);
  return knn_score(x, pop.columns, effective_k(cfg, pop.columns.cols()), cfg.metric,
                   cfg.neighbor_rule)
      .d;
}

}  // namespace

MatrixX<double> as_columns(std::span<const DataVector> vectors) {
  return gather(vectors, [](const DataVector&) { return true; }).columns;
}

std::vector<DistanceScore> score_block(std::span<const DataVector> block, const WindowConfig& cfg,
                                       const PopulationObserver& observer) {
  if (static_cast<std::int64_t>(block.size()) != cfg.window) {
    throw Error(ErrorCode::IncompleteBlock, "block holds " + std::to_string(block.size()) +
                                                " of " + std::to_string(cfg.window) + " vectors");
  }
  std::vector<DistanceScore> scores;
  scores.reserve(block.size());
  for (const auto& x : block) {
    const auto pop = gather(block, [&](const DataVector& v) { return v.t != x.t; });
    scores.push_back({score_against(x, pop, cfg, observer), x.t, pop.columns.cols()});
  }
  return scores;
}

double score_quantile(std::span<const DistanceScore> scores, double q) {
  if (scores.empty()) throw Error(ErrorCode::PopulationTooSmall, "no scores for the quantile");
  std::vector<double> d;
  d.reserve(scores.size());
  for (const auto& s : scores) d.push_back(s.d);
  std::sort(d.begin(), d.end());
  const double pos = q * static_cast<double>(d.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, d.size() - 1);
  return d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
}

std::vector<CandidateRecord> flag_candidates(std::span<const DataVector> block,
                                             const WindowConfig& cfg, std::int64_t block_index) {
  const auto scores = score_block(block, cfg);
  return flag_candidates(block, scores, cfg, block_index);
}

std::vector<CandidateRecord> flag_candidates(std::span<const DataVector> block,
                                             std::span<const DistanceScore> scores,
                                             const WindowConfig& cfg, std::int64_t block_index) {
  std::vector<CandidateRecord> out;
  for (std::size_t i = 0; i < block.size(); ++i) {
    const double lambda = magnitude(scores[i].d, cfg.alpha, cfg.beta).lambda;
    if (lambda < cfg.lambda_c) continue;
    CandidateRecord c;
    c.vector = block[i];
    c.first_flagged_block = block_index;
    c.lambda_series.push(lambda, static_cast<double>(scores[i].window_size + 1));
    c.last_d = scores[i].d;
    out.push_back(std::move(c));
  }
  return out;
}

void rescore_candidates(std::span<CandidateRecord> candidates, std::span<const DataVector> landmark,
                        std::int64_t step, const WindowConfig& cfg,
                        const std::unordered_set<TimeIndex>& evicted,
                        const PopulationObserver& observer) {
  for (auto& c : candidates) {
    if (c.status != CandidateStatus::Candidate || c.scored_at_step == step) continue;
    const auto pop = gather(landmark, [&](const DataVector& v) {
      return v.t != c.vector.t && !evicted.contains(v.t);
    });
    c.last_d = score_against(c.vector, pop, cfg, observer);
    c.lambda_series.push(magnitude(c.last_d, cfg.alpha, cfg.beta).lambda,
                         static_cast<double>(landmark.size()));
    c.scored_at_step = step;
  }
}

std::optional<Decision> resolve_candidate(const CandidateRecord& c, const WindowConfig& cfg,
                                          double theta, bool landmark_exhausted, TimeIndex now) {
  const auto& series = c.lambda_series;
  if (series.size() < 2 && !landmark_exhausted) {
    throw Error(ErrorCode::InsufficientSeries,
                "t=" + std::to_string(c.vector.t) + " has no re-scored magnitude yet");
  }
  TrendVerdict trend = TrendVerdict::Neutral;
  if (series.size() >= 2) {
    const auto mk = mann_kendall_z(series, cfg.significance);
    trend = ensemble_trend(mk.trend, sen_slope(series, cfg.sen_mode));
  }

  Decision d{c.vector.t, CandidateStatus::ConfirmedOutlier, c.last_d, trend, now};
  if (trend == TrendVerdict::Increasing) return d;
  if (c.last_d < theta) {
    d.status = CandidateStatus::Normal;
    return d;
  }
  // Still far from the population: wait for more context, or confirm once
  // the landmark cannot grow any further.
  if (landmark_exhausted) return d;
  return std::nullopt;
}

Detector::Detector(const WindowConfig& cfg) : cfg_(cfg), window_(cfg) {}

void Detector::resolve_pending(bool exhausted, TimeIndex now, std::vector<Decision>& out) {
  std::erase_if(pending_, [&](CandidateRecord& c) {
    auto decision = resolve_candidate(c, cfg_, theta_, exhausted, now);
    if (!decision) return false;
    c.status = decision->status;
    if (c.status == CandidateStatus::ConfirmedOutlier) evicted_.insert(c.vector.t);
    out.push_back(*decision);
    return true;
  });
}

std::vector<Decision> Detector::observe(const DataVector& v) {
  window_.push(v);
  std::vector<Decision> out;

  if (window_.expansion_ready()) {
    window_.expand_landmark();
    rescore_candidates(pending_, window_.landmark(), window_.h(), cfg_, evicted_, observer_);
    resolve_pending(window_.exhausted(), v.t, out);
  }
  if (window_.mode() == WindowMode::Landmark && (pending_.empty() || window_.exhausted())) {
    window_.close_landmark();
  }

  if (window_.block_complete()) {
    const auto& block = window_.block();
    const auto scores = score_block(block, cfg_, observer_);
    auto flagged = flag_candidates(block, scores, cfg_, window_.block_index());
    if (!flagged.empty()) {
      if (window_.mode() == WindowMode::Sliding) {
        window_.enter_landmark();
        theta_ = cfg_.theta ? *cfg_.theta : score_quantile(scores, cfg_.theta_quantile);
      }
      for (auto& c : flagged) {
        c.scored_at_step = window_.h();
        pending_.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::vector<Decision> Detector::flush() {
  std::vector<Decision> out;
  resolve_pending(true, window_.last_t(), out);
  if (window_.mode() == WindowMode::Landmark) window_.close_landmark();
  return out;
}

}  // namespace softod
