#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softod/detector.hpp"
#include "softod/evaluation.hpp"
#include "softod/ingest.hpp"
#include "softod/windowing.hpp"

namespace softod {

enum class ReplayOrder { FileOrder, Shuffled };

struct RunConfig {
  std::vector<std::int64_t> windows{5, 10};
  std::vector<std::int64_t> ks{2, 3, 4, 5};
  // Everything except window / k, which come from the grid.
  WindowConfig base;
  ReplayOrder order = ReplayOrder::FileOrder;
  std::uint64_t seed = 0;
  bool normalize = false;
  // Resolve still-pending candidates at end of stream.
  bool flush_at_end = true;
  // When false, throughput / latency are not measured and are emitted as null.
  bool record_timing = true;
};

void validate(const RunConfig& cfg);

struct GridRow {
  std::int64_t window = 0;
  std::int64_t k = 0;
  Confusion confusion;
  MetricsReport metrics;
  std::int64_t objects = 0;
  bool timing_recorded = false;
  std::optional<std::string> error;  // set when this grid point failed
};

struct ObjectDecision {
  std::int64_t window = 0;
  std::int64_t k = 0;
  Decision decision;
};

struct ExperimentReport {
  std::string dataset;
  std::int64_t instances = 0;
  std::int64_t dims = 0;
  std::int64_t labeled_outliers = 0;
  RunConfig config;
  std::vector<GridRow> rows;
  std::vector<ObjectDecision> per_object;
};

// Replays a stream through a fresh detector; returns every decision in
// emission order.
std::vector<Decision> replay(const LabeledStream& stream, const WindowConfig& cfg, bool flush_at_end);

// One grid point per (W, k) pair, W-major. Failing grid points are recorded
// in their row and do not stop the grid. The stream is reordered / rescaled
// according to `cfg` before replay.
ExperimentReport run_experiment(LabeledStream stream, const RunConfig& cfg);

}  // namespace softod
