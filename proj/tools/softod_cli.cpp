// softod: replay labelled datasets through the soft outlier detector.
//
//   softod run    --dataset data/ionosphere.arff -W 5 -W 10 --k 2 --k 3 --report json
//   softod detect --dataset stream.csv --no-label -W 5 --k 3
//   softod oracle --series lambdas.txt

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "softod/detector.hpp"
#include "softod/error.hpp"
#include "softod/experiment.hpp"
#include "softod/ingest.hpp"
#include "softod/oracle.hpp"
#include "softod/report.hpp"
#include "softod/trend.hpp"

namespace {

using namespace softod;
using Json = nlohmann::ordered_json;

struct DatasetArgs {
  std::string path;
  std::string format;  // empty: from extension
  ParseOptions parse;
  bool no_label = false;
};

struct DetectorArgs {
  WindowConfig cfg;
  double theta = 0.0;
  std::string metric = "euclidean";
  std::string neighbor_rule = "nearest";
  std::string sen_mode = "all_pairs";
  std::string order = "file";
  std::uint64_t seed = 0;
  bool normalize = false;
};

void add_dataset_options(CLI::App& app, DatasetArgs& a, bool required) {
  auto* ds = app.add_option("--dataset", a.path, "ARFF or CSV file ('-' reads CSV from stdin)");
  if (required) ds->required();
  app.add_option("--format", a.format, "arff | csv (default: from extension)")
      ->check(CLI::IsMember({"arff", "csv"}));
  app.add_option("--label-column", a.parse.label_column, "attribute holding the class");
  app.add_option("--outlier-label", a.parse.outlier_label, "class value marking an outlier")
      ->capture_default_str();
  app.add_option("--inlier-label", a.parse.inlier_label, "reject classes other than these two");
  app.add_option("--ignore-column", a.parse.ignore_columns, "numeric column to drop (repeatable)");
}

void add_detector_options(CLI::App& app, DetectorArgs& a) {
  WindowConfig& c = a.cfg;
  app.add_option("--alpha", c.alpha, "sigmoid slope")->capture_default_str();
  app.add_option("--beta", c.beta, "sigmoid offset")->capture_default_str();
  app.add_option("--step-w", c.step, "landmark growth per step")->capture_default_str();
  app.add_option("--xi", c.xi, "landmark capacity factor")->capture_default_str();
  app.add_option("--lambda-c", c.lambda_c, "candidacy threshold on lambda")->capture_default_str();
  auto* theta = app.add_option("--theta", a.theta, "absolute distance threshold");
  auto* quant = app.add_option("--theta-quantile", c.theta_quantile,
                               "theta as this quantile of the triggering block's scores")
                    ->capture_default_str();
  theta->excludes(quant);
  app.add_option("--significance", c.significance, "two-sided Mann-Kendall level")
      ->capture_default_str();
  app.add_option("--metric", a.metric, "euclidean | manhattan | chebyshev")
      ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}))
      ->capture_default_str();
  app.add_option("--neighbor-rule", a.neighbor_rule, "nearest | farthest")
      ->check(CLI::IsMember({"nearest", "farthest"}))
      ->capture_default_str();
  app.add_option("--sen-mode", a.sen_mode, "all_pairs | consecutive")
      ->check(CLI::IsMember({"all_pairs", "consecutive"}))
      ->capture_default_str();
  app.add_option("--order", a.order, "file | shuffle")
      ->check(CLI::IsMember({"file", "shuffle"}))
      ->capture_default_str();
  app.add_option("--seed", a.seed, "shuffle seed")->capture_default_str();
  app.add_flag("--normalize", a.normalize, "min-max rescale every dimension first");
}

LabeledStream load(const DatasetArgs& a) {
  ParseOptions opts = a.parse;
  opts.has_label = !a.no_label;
  if (a.path == "-") return parse_csv(std::cin, "stdin", opts);
  const DatasetFormat fmt = a.format.empty() ? format_from_path(a.path)
                            : a.format == "arff" ? DatasetFormat::Arff
                                                 : DatasetFormat::Csv;
  return parse_dataset(a.path, fmt, opts);
}

void finish_detector_args(DetectorArgs& a, const CLI::App& app) {
  if (app.count("--theta") > 0) a.cfg.theta = a.theta;
  a.cfg.metric = a.metric == "manhattan"   ? Metric::Manhattan
                 : a.metric == "chebyshev" ? Metric::Chebyshev
                                           : Metric::Euclidean;
  a.cfg.neighbor_rule = a.neighbor_rule == "farthest" ? NeighborRule::Farthest : NeighborRule::Nearest;
  a.cfg.sen_mode = a.sen_mode == "consecutive" ? SenMode::Consecutive : SenMode::AllPairs;
}

int run_command(const DatasetArgs& data, DetectorArgs& det, const RunConfig& grid,
                const std::string& report_format, const std::string& out_path) {
  RunConfig cfg = grid;
  cfg.base = det.cfg;
  cfg.order = det.order == "shuffle" ? ReplayOrder::Shuffled : ReplayOrder::FileOrder;
  cfg.seed = det.seed;
  cfg.normalize = det.normalize;

  const auto report = run_experiment(load(data), cfg);
  const ReportFormat fmt = report_format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  if (out_path.empty() || out_path == "-") {
    emit_report(report, fmt, std::cout);
  } else {
    emit_report(report, fmt, std::filesystem::path(out_path));
  }
  return 0;
}

Json decision_json(const Decision& d, const LabeledStream& stream) {
  Json j;
  j["t"] = d.t;
  j["status"] = to_string(d.status);
  j["d_final"] = d.d_final;
  j["trend"] = to_string(d.trend);
  j["resolved_at"] = d.resolved_at;
  j["row"] = stream.source_rows[static_cast<std::size_t>(d.t - 1)];
  return j;
}

int detect_command(const DatasetArgs& data, DetectorArgs& det, bool flush) {
  LabeledStream stream = load(data);
  if (det.normalize) min_max_rescale(stream);
  if (det.order == "shuffle") shuffle_stream(stream, det.seed);

  Detector detector(det.cfg);
  for (const auto& v : stream.vectors) {
    for (const auto& d : detector.observe(v)) std::cout << decision_json(d, stream).dump() << '\n';
  }
  if (flush) {
    for (const auto& d : detector.flush()) std::cout << decision_json(d, stream).dump() << '\n';
  }
  return 0;
}

// One series per file: each line is "value" or "time value" (comma or
// whitespace separated). Missing times default to 1, 2, ...
void read_series(std::istream& in, std::vector<double>& values, std::vector<double>& times) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> nums;
    std::string tok;
    while (fields >> tok) {
      if (tok.front() == '#') break;
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw RowError(ErrorCode::MalformedRow, row, "not a number: '" + tok + "'");
      }
    }
    if (nums.empty()) continue;
    if (nums.size() > 2) throw RowError(ErrorCode::MalformedRow, row, "expected 1 or 2 fields");
    times.push_back(nums.size() == 2 ? nums[0] : static_cast<double>(values.size() + 1));
    values.push_back(nums.back());
    ++row;
  }
}

int oracle_command(const std::string& path, double significance) {
  std::vector<double> values, times;
  if (path == "-") {
    read_series(std::cin, values, times);
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path);
    read_series(in, values, times);
  }
  if (values.size() < 2) {
    throw Error(ErrorCode::SeriesTooShort, "series needs at least 2 points");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::NonMonotonicTime, "series times must be strictly increasing");
    }
  }
  if (!(significance > 0.0 && significance < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "significance must lie in (0,1)");
  }

  const double z = oracle::mann_kendall_z(values);
  const double critical = oracle::normal_quantile(1.0 - significance / 2.0);
  const TrendVerdict mk = z > critical    ? TrendVerdict::Increasing
                          : z < -critical ? TrendVerdict::Decreasing
                                          : TrendVerdict::Neutral;
  const double sen = oracle::sen_slope(values, times);

  Json j;
  j["n"] = values.size();
  j["S"] = oracle::mann_kendall_s(values);
  j["var_S"] = oracle::mann_kendall_var(values);
  j["Z"] = z;
  j["critical"] = critical;
  j["mk_trend"] = to_string(mk);
  j["sen_slope"] = sen;
  j["ensemble"] = to_string(ensemble_trend(mk, sen));
  std::cout << j.dump(2) << '\n';
  return 0;
}

void print_error(std::string_view code, const std::string& message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft outlier detection over sliding and landmark windows"};
  app.require_subcommand(1);

  DatasetArgs run_data;
  DetectorArgs run_det;
  RunConfig grid;
  std::string report_format = "json";
  std::string out_path;
  bool no_timing = false;
  bool no_flush = false;
  auto* run = app.add_subcommand("run", "replay a labelled dataset over a (W, k) grid");
  add_dataset_options(*run, run_data, true);
  add_detector_options(*run, run_det);
  run->add_option("-W,--window", grid.windows, "block length (repeatable)")->capture_default_str();
  run->add_option("--k", grid.ks, "neighbour count (repeatable)")->capture_default_str();
  run->add_option("--report", report_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  run->add_option("--out", out_path, "report destination (default: stdout)");
  run->add_flag("--no-timing", no_timing, "skip timing; throughput and latency are null");
  run->add_flag("--no-flush", no_flush, "leave candidates pending at end of stream undecided");

  DatasetArgs det_data;
  DetectorArgs det_det;
  bool det_no_flush = false;
  auto* detect = app.add_subcommand("detect", "stream a dataset, print one JSON line per decision");
  add_dataset_options(*detect, det_data, true);
  add_detector_options(*detect, det_det);
  detect->add_option("-W,--window", det_det.cfg.window, "block length")->capture_default_str();
  detect->add_option("--k", det_det.cfg.k, "neighbour count")->capture_default_str();
  detect->add_flag("--no-label", det_data.no_label, "CSV input has no class column");
  detect->add_flag("--no-flush", det_no_flush, "do not resolve pending candidates at the end");

  std::string series_path;
  double oracle_significance = 0.05;
  auto* orc = app.add_subcommand("oracle", "brute-force Mann-Kendall / Sen's slope of a series");
  orc->add_option("--series", series_path, "series file ('-' for stdin)")->required();
  orc->add_option("--significance", oracle_significance, "two-sided level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("InvalidArguments", e.what());
    return 2;
  }

  try {
    if (*run) {
      finish_detector_args(run_det, *run);
      grid.record_timing = !no_timing;
      grid.flush_at_end = !no_flush;
      return run_command(run_data, run_det, grid, report_format, out_path);
    }
    if (*detect) {
      finish_detector_args(det_det, *detect);
      return detect_command(det_data, det_det, !det_no_flush);
    }
    return oracle_command(series_path, oracle_significance);
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
}
