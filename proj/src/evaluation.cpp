#include "softod/evaluation.hpp"

#include <string>
#include <unordered_set>

#include "softod/error.hpp"

namespace softod {

Confusion confusion(std::span<const Decision> decisions, const std::vector<bool>& labels) {
  std::unordered_set<TimeIndex> confirmed;
  for (const auto& d : decisions) {
    if (d.t < 1 || d.t > static_cast<TimeIndex>(labels.size())) {
      throw Error(ErrorCode::MissingLabel, "no label for t=" + std::to_string(d.t));
    }
    if (d.status == CandidateStatus::ConfirmedOutlier) confirmed.insert(d.t);
  }

  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = confirmed.contains(static_cast<TimeIndex>(i + 1));
    if (labels[i]) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

MetricsReport metrics(const Confusion& c) {
  const std::int64_t outliers = c.tp + c.fn;
  if (outliers <= 0) throw Error(ErrorCode::NoLabeledOutliers, "ground truth has no outliers");

  MetricsReport m;
  m.recall = static_cast<double>(c.tp) / static_cast<double>(outliers);
  m.epsilon = m.recall;
  if (c.tp + c.fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (m.precision + m.recall > 0.0) {
    m.f_measure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  const std::int64_t inliers = c.fp + c.tn;
  const double fpr = inliers > 0 ? static_cast<double>(c.fp) / static_cast<double>(inliers) : 0.0;
  m.roc_auc = (1.0 + m.recall - fpr) / 2.0;
  return m;
}

}  // namespace softod
