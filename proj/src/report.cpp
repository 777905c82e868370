#include "softod/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "softod/error.hpp"

namespace softod {

namespace {

using Json = nlohmann::ordered_json;

template <typename Enum, std::size_t N>
Enum enum_from(std::string_view text, const Enum (&values)[N]) {
  for (const Enum v : values) {
    if (to_string(v) == text) return v;
  }
  throw Error(ErrorCode::MalformedRow, "unknown enum value '" + std::string(text) + "'");
}

constexpr Metric kMetrics[] = {Metric::Euclidean, Metric::Manhattan, Metric::Chebyshev};
constexpr NeighborRule kRules[] = {NeighborRule::Nearest, NeighborRule::Farthest};
constexpr SenMode kSenModes[] = {SenMode::AllPairs, SenMode::Consecutive};
constexpr TrendVerdict kTrends[] = {TrendVerdict::Increasing, TrendVerdict::Decreasing,
                                    TrendVerdict::Neutral};
constexpr CandidateStatus kStatuses[] = {CandidateStatus::Candidate,
                                         CandidateStatus::ConfirmedOutlier,
                                         CandidateStatus::Normal};

std::string_view order_name(ReplayOrder o) { return o == ReplayOrder::FileOrder ? "file" : "shuffle"; }

Json config_json(const RunConfig& cfg) {
  const WindowConfig& b = cfg.base;
  Json j;
  j["windows"] = cfg.windows;
  j["ks"] = cfg.ks;
  j["alpha"] = b.alpha;
  j["beta"] = b.beta;
  j["step_w"] = b.step;
  j["xi"] = b.xi;
  j["lambda_c"] = b.lambda_c;
  j["theta"] = b.theta ? Json(*b.theta) : Json(nullptr);
  j["theta_quantile"] = b.theta_quantile;
  j["significance"] = b.significance;
  j["metric"] = to_string(b.metric);
  j["neighbor_rule"] = to_string(b.neighbor_rule);
  j["sen_mode"] = to_string(b.sen_mode);
  j["order"] = order_name(cfg.order);
  j["seed"] = cfg.seed;
  j["normalize"] = cfg.normalize;
  j["flush_at_end"] = cfg.flush_at_end;
  j["record_timing"] = cfg.record_timing;
  return j;
}

Json row_json(const GridRow& r) {
  Json j;
  j["W"] = r.window;
  j["k"] = r.k;
  j["TP"] = r.confusion.tp;
  j["FP"] = r.confusion.fp;
  j["FN"] = r.confusion.fn;
  j["TN"] = r.confusion.tn;
  j["epsilon"] = r.metrics.epsilon;
  j["precision"] = r.metrics.precision;
  j["recall"] = r.metrics.recall;
  j["f_measure"] = r.metrics.f_measure;
  j["roc_auc"] = r.metrics.roc_auc;
  j["throughput"] = r.timing_recorded ? Json(r.metrics.throughput_objs_per_sec) : Json(nullptr);
  j["mean_latency_ms"] = r.timing_recorded ? Json(r.metrics.mean_latency_ms) : Json(nullptr);
  j["objects"] = r.objects;
  j["precision_undefined"] = r.metrics.precision_undefined;
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  return j;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

bool same_metrics(const MetricsReport& a, const MetricsReport& b) {
  return a.epsilon == b.epsilon && a.precision == b.precision && a.recall == b.recall &&
         a.f_measure == b.f_measure && a.roc_auc == b.roc_auc &&
         a.precision_undefined == b.precision_undefined;
}

}  // namespace

void check_consistency(const ExperimentReport& report) {
  for (const auto& r : report.rows) {
    if (r.error) continue;
    const auto& c = r.confusion;
    if (c.tp + c.fp + c.fn + c.tn != r.objects) {
      throw Error(ErrorCode::InconsistentReport, "confusion counts do not cover every object");
    }
    if (!same_metrics(metrics(c), r.metrics)) {
      throw Error(ErrorCode::InconsistentReport,
                  "metrics for W=" + std::to_string(r.window) + " k=" + std::to_string(r.k) +
                      " do not match their confusion counts");
    }
  }
}

std::string to_json(const ExperimentReport& report) {
  check_consistency(report);
  Json j;
  j["dataset"] = report.dataset;
  j["instances"] = report.instances;
  j["dims"] = report.dims;
  j["labeled_outliers"] = report.labeled_outliers;
  j["config"] = config_json(report.config);
  j["rows"] = Json::array();
  for (const auto& r : report.rows) j["rows"].push_back(row_json(r));
  j["per_object"] = Json::array();
  for (const auto& o : report.per_object) {
    Json e;
    e["W"] = o.window;
    e["k"] = o.k;
    e["t"] = o.decision.t;
    e["status"] = to_string(o.decision.status);
    e["d_final"] = o.decision.d_final;
    e["trend"] = to_string(o.decision.trend);
    e["resolved_at"] = o.decision.resolved_at;
    j["per_object"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const ExperimentReport& report) {
  check_consistency(report);
  std::ostringstream out;
  out << "W,k,TP,FP,FN,TN,epsilon,precision,recall,f_measure,roc_auc,throughput,mean_latency_ms\n";
  for (const auto& r : report.rows) {
    out << r.window << ',' << r.k << ',';
    if (r.error) {
      out << ",,,,,,,,,,\n";
      continue;
    }
    const auto& c = r.confusion;
    const auto& m = r.metrics;
    out << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << ',' << format_double(m.epsilon)
        << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
        << format_double(m.f_measure) << ',' << format_double(m.roc_auc) << ',';
    if (r.timing_recorded) {
      out << format_double(m.throughput_objs_per_sec) << ',' << format_double(m.mean_latency_ms);
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
  out << (format == ReportFormat::Json ? to_json(report) : to_csv(report));
  if (!out) throw Error(ErrorCode::IoError, "failed to write report");
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& destination) {
  // Serialize first so a consistency failure leaves no partial file behind.
  const std::string text = format == ReportFormat::Json ? to_json(report) : to_csv(report);
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + destination.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed to write " + destination.string());
}

ExperimentReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    ExperimentReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.instances = j.at("instances").get<std::int64_t>();
    r.dims = j.at("dims").get<std::int64_t>();
    r.labeled_outliers = j.at("labeled_outliers").get<std::int64_t>();

    const Json& c = j.at("config");
    RunConfig& cfg = r.config;
    cfg.windows = c.at("windows").get<std::vector<std::int64_t>>();
    cfg.ks = c.at("ks").get<std::vector<std::int64_t>>();
    cfg.base.alpha = c.at("alpha").get<double>();
    cfg.base.beta = c.at("beta").get<double>();
    cfg.base.step = c.at("step_w").get<std::int64_t>();
    cfg.base.xi = c.at("xi").get<double>();
    cfg.base.lambda_c = c.at("lambda_c").get<double>();
    if (!c.at("theta").is_null()) cfg.base.theta = c.at("theta").get<double>();
    cfg.base.theta_quantile = c.at("theta_quantile").get<double>();
    cfg.base.significance = c.at("significance").get<double>();
    cfg.base.metric = enum_from(c.at("metric").get<std::string>(), kMetrics);
    cfg.base.neighbor_rule = enum_from(c.at("neighbor_rule").get<std::string>(), kRules);
    cfg.base.sen_mode = enum_from(c.at("sen_mode").get<std::string>(), kSenModes);
    cfg.order = c.at("order").get<std::string>() == "file" ? ReplayOrder::FileOrder
                                                           : ReplayOrder::Shuffled;
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.normalize = c.at("normalize").get<bool>();
    cfg.flush_at_end = c.at("flush_at_end").get<bool>();
    cfg.record_timing = c.at("record_timing").get<bool>();

    for (const Json& row : j.at("rows")) {
      GridRow g;
      g.window = row.at("W").get<std::int64_t>();
      g.k = row.at("k").get<std::int64_t>();
      g.confusion = {row.at("TP").get<std::int64_t>(), row.at("FP").get<std::int64_t>(),
                     row.at("FN").get<std::int64_t>(), row.at("TN").get<std::int64_t>()};
      g.metrics.epsilon = row.at("epsilon").get<double>();
      g.metrics.precision = row.at("precision").get<double>();
      g.metrics.recall = row.at("recall").get<double>();
      g.metrics.f_measure = row.at("f_measure").get<double>();
      g.metrics.roc_auc = row.at("roc_auc").get<double>();
      g.timing_recorded = !row.at("throughput").is_null();
      if (g.timing_recorded) {
        g.metrics.throughput_objs_per_sec = row.at("throughput").get<double>();
        g.metrics.mean_latency_ms = row.at("mean_latency_ms").get<double>();
      }
      g.objects = row.at("objects").get<std::int64_t>();
      g.metrics.precision_undefined = row.at("precision_undefined").get<bool>();
      if (!row.at("error").is_null()) g.error = row.at("error").get<std::string>();
      r.rows.push_back(std::move(g));
    }
    for (const Json& o : j.at("per_object")) {
      ObjectDecision d;
      d.window = o.at("W").get<std::int64_t>();
      d.k = o.at("k").get<std::int64_t>();
      d.decision.t = o.at("t").get<TimeIndex>();
      d.decision.status = enum_from(o.at("status").get<std::string>(), kStatuses);
      d.decision.d_final = o.at("d_final").get<double>();
      d.decision.trend = enum_from(o.at("trend").get<std::string>(), kTrends);
      d.decision.resolved_at = o.at("resolved_at").get<TimeIndex>();
      r.per_object.push_back(d);
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("report does not match the schema: ") + e.what());
  }
}

}  // namespace softod
