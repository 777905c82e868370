#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "softod/detector.hpp"

namespace softod {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct MetricsReport {
  double epsilon = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double roc_auc = 0.0;
  // Set when nothing was predicted positive; precision and F-measure are 0.
  bool precision_undefined = false;
  double throughput_objs_per_sec = 0.0;
  double mean_latency_ms = 0.0;
};

// labels[t - 1] is true when observation t is a labelled outlier. Indices
// without a ConfirmedOutlier decision count as negative predictions.
Confusion confusion(std::span<const Decision> decisions, const std::vector<bool>& labels);

// Accuracy (TP / |O|), precision, recall, F-measure and the single operating
// point ROC AUC (1 + TPR - FPR) / 2. Timing fields are left at zero.
MetricsReport metrics(const Confusion& c);

}  // namespace softod
