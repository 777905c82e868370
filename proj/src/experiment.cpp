#include "softod/experiment.hpp"

#include <chrono>

#include "softod/error.hpp"

namespace softod {

void validate(const RunConfig& cfg) {
  if (cfg.windows.empty() || cfg.ks.empty()) {
    throw Error(ErrorCode::InvalidConfig, "parameter grid is empty");
  }
}

std::vector<Decision> replay(const LabeledStream& stream, const WindowConfig& cfg,
                             bool flush_at_end) {
  Detector detector(cfg);
  std::vector<Decision> decisions;
  for (const auto& v : stream.vectors) {
    auto out = detector.observe(v);
    decisions.insert(decisions.end(), out.begin(), out.end());
  }
  if (flush_at_end) {
    auto out = detector.flush();
    decisions.insert(decisions.end(), out.begin(), out.end());
  }
  return decisions;
}

ExperimentReport run_experiment(LabeledStream stream, const RunConfig& cfg) {
  validate(cfg);
  if (stream.vectors.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  if (cfg.normalize) min_max_rescale(stream);
  if (cfg.order == ReplayOrder::Shuffled) shuffle_stream(stream, cfg.seed);

  ExperimentReport report;
  report.dataset = stream.name;
  report.instances = static_cast<std::int64_t>(stream.vectors.size());
  report.dims = stream.dims;
  report.labeled_outliers = stream.outlier_count();
  report.config = cfg;

  for (const std::int64_t window : cfg.windows) {
    for (const std::int64_t k : cfg.ks) {
      GridRow row;
      row.window = window;
      row.k = k;
      row.objects = report.instances;
      try {
        WindowConfig wc = cfg.base;
        wc.window = window;
        wc.k = k;
        validate(wc);

        const auto start = std::chrono::steady_clock::now();
        const auto decisions = replay(stream, wc, cfg.flush_at_end);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

        row.confusion = confusion(decisions, stream.labels);
        row.metrics = metrics(row.confusion);
        if (cfg.record_timing) {
          const double seconds = std::max(elapsed.count(), 1e-12);
          row.timing_recorded = true;
          row.metrics.mean_latency_ms = 1000.0 * seconds / static_cast<double>(row.objects);
          row.metrics.throughput_objs_per_sec = static_cast<double>(row.objects) / seconds;
        }
        for (const auto& d : decisions) report.per_object.push_back({window, k, d});
      } catch (const Error& e) {
        row.error = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace softod
