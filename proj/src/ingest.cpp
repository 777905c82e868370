#include "softod/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <string_view>

#include "softod/error.hpp"

namespace softod {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Comma-separated fields; commas inside single or double quotes are kept.
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  char quote = 0;
  for (const char ch : line) {
    if (quote) {
      current += ch;
      if (ch == quote) quote = 0;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      current += ch;
    } else if (ch == ',') {
      fields.push_back(unquote(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(unquote(current));
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

enum class ColumnRole { Feature, Label, Ignored };

class RowBuilder {
 public:
  RowBuilder(LabeledStream& stream, std::vector<ColumnRole> roles, const ParseOptions& options)
      : stream_(stream), roles_(std::move(roles)), options_(options) {
    stream_.dims = std::count(roles_.begin(), roles_.end(), ColumnRole::Feature);
    if (stream_.dims < 1) throw Error(ErrorCode::UnsupportedFormat, "dataset has no numeric features");
  }

  void add(const std::vector<std::string>& fields) {
    const std::size_t row = stream_.vectors.size();
    if (fields.size() != roles_.size()) {
      throw RowError(ErrorCode::MalformedRow, row,
                     "expected " + std::to_string(roles_.size()) + " fields, got " +
                         std::to_string(fields.size()));
    }
    DataVector v;
    v.values.resize(stream_.dims);
    v.t = static_cast<TimeIndex>(row + 1);
    Eigen::Index dim = 0;
    bool outlier = false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      switch (roles_[i]) {
        case ColumnRole::Ignored: break;
        case ColumnRole::Label: outlier = classify(fields[i], row); break;
        case ColumnRole::Feature: {
          const auto value = parse_number(fields[i]);
          if (!value || !std::isfinite(*value)) {
            throw RowError(ErrorCode::MalformedRow, row,
                           "field " + std::to_string(i) + " is not a finite number: '" +
                               fields[i] + "'");
          }
          v.values(dim++) = *value;
          break;
        }
      }
    }
    stream_.vectors.push_back(std::move(v));
    stream_.labels.push_back(outlier);
    stream_.source_rows.push_back(row);
  }

  // ARFF declares its classes up front; CSV learns them from the data.
  void declare_labels(std::vector<std::string> labels) { known_ = std::move(labels); declared_ = true; }

 private:
  bool classify(const std::string& label, std::size_t row) {
    if (label == options_.outlier_label) return true;
    if (options_.inlier_label && label != *options_.inlier_label) {
      throw RowError(ErrorCode::UnknownLabelValue, row, "unexpected label '" + label + "'");
    }
    if (std::find(known_.begin(), known_.end(), label) == known_.end()) {
      if (declared_ || !known_.empty()) {
        throw RowError(ErrorCode::UnknownLabelValue, row, "unexpected label '" + label + "'");
      }
      known_.push_back(label);
    }
    return false;
  }

  LabeledStream& stream_;
  std::vector<ColumnRole> roles_;
  const ParseOptions& options_;
  std::vector<std::string> known_;  // inlier label values seen / declared
  bool declared_ = false;
};

bool ignored(const ParseOptions& options, const std::string& name) {
  return std::find(options.ignore_columns.begin(), options.ignore_columns.end(), name) !=
         options.ignore_columns.end();
}

struct ArffAttribute {
  std::string name;
  bool numeric = false;
  std::vector<std::string> nominal_values;
};

ArffAttribute parse_attribute(std::string_view decl) {
  // decl is the text after "@attribute"
  decl = trim(decl);
  ArffAttribute attr;
  std::size_t name_end;
  if (!decl.empty() && (decl.front() == '\'' || decl.front() == '"')) {
    name_end = decl.find(decl.front(), 1);
    if (name_end == std::string_view::npos) {
      throw Error(ErrorCode::UnsupportedFormat, "unterminated attribute name");
    }
    attr.name = std::string(decl.substr(1, name_end - 1));
    ++name_end;
  } else {
    name_end = decl.find_first_of(" \t");
    if (name_end == std::string_view::npos) {
      throw Error(ErrorCode::UnsupportedFormat, "attribute without a type");
    }
    attr.name = std::string(decl.substr(0, name_end));
  }
  const std::string_view type = trim(decl.substr(name_end));
  if (!type.empty() && type.front() == '{') {
    const auto close = type.rfind('}');
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::UnsupportedFormat, "unterminated nominal set for " + attr.name);
    }
    attr.nominal_values = split_fields(type.substr(1, close - 1));
    return attr;
  }
  const std::string t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") {
    attr.numeric = true;
    return attr;
  }
  throw Error(ErrorCode::UnsupportedFormat,
              "attribute '" + attr.name + "' has unsupported type '" + std::string(type) + "'");
}

}  // namespace

std::int64_t LabeledStream::outlier_count() const {
  return std::count(labels.begin(), labels.end(), true);
}

DatasetFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".arff") return DatasetFormat::Arff;
  if (ext == ".csv") return DatasetFormat::Csv;
  throw Error(ErrorCode::UnsupportedFormat, "cannot infer format from '" + path.string() + "'");
}

LabeledStream parse_dataset(const std::filesystem::path& path, DatasetFormat format,
                            const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  const std::string name = path.stem().string();
  return format == DatasetFormat::Arff ? parse_arff(in, name, options)
                                       : parse_csv(in, name, options);
}

LabeledStream parse_arff(std::istream& in, const std::string& name, const ParseOptions& options) {
  LabeledStream stream;
  stream.name = name;
  std::vector<ArffAttribute> attrs;
  std::optional<RowBuilder> rows;
  std::string line;

  while (std::getline(in, line)) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '%') continue;

    if (rows) {
      if (body.front() == '{') throw Error(ErrorCode::UnsupportedFormat, "sparse ARFF rows");
      rows->add(split_fields(body));
      continue;
    }

    const std::string head = lower(body.substr(0, body.find_first_of(" \t")));
    if (head == "@relation") {
      const auto rest = trim(body.substr(head.size()));
      if (!rest.empty()) stream.name = unquote(rest);
    } else if (head == "@attribute") {
      attrs.push_back(parse_attribute(body.substr(head.size())));
    } else if (head == "@data") {
      std::vector<ColumnRole> roles;
      std::optional<std::size_t> label_index;
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        const auto& a = attrs[i];
        const bool is_label = options.label_column.empty() ? !a.numeric
                                                           : a.name == options.label_column;
        if (is_label) {
          if (label_index) {
            throw Error(ErrorCode::UnsupportedFormat, "more than one nominal attribute");
          }
          if (a.numeric) {
            throw Error(ErrorCode::UnsupportedFormat, "label attribute '" + a.name + "' is numeric");
          }
          label_index = i;
          roles.push_back(ColumnRole::Label);
        } else if (ignored(options, a.name)) {
          roles.push_back(ColumnRole::Ignored);
        } else if (!a.numeric) {
          throw Error(ErrorCode::UnsupportedFormat,
                      "nominal attribute '" + a.name + "' besides the label");
        } else {
          roles.push_back(ColumnRole::Feature);
        }
      }
      if (!label_index) {
        throw Error(ErrorCode::MissingLabel,
                    options.label_column.empty() ? "no nominal label attribute"
                                                 : "label attribute '" + options.label_column +
                                                       "' not declared");
      }
      const auto& classes = attrs[*label_index].nominal_values;
      if (std::find(classes.begin(), classes.end(), options.outlier_label) == classes.end()) {
        throw Error(ErrorCode::UnknownLabelValue,
                    "outlier label '" + options.outlier_label + "' is not a declared class");
      }
      rows.emplace(stream, std::move(roles), options);
      std::vector<std::string> inliers;
      for (const auto& c : classes) {
        if (c != options.outlier_label) inliers.push_back(c);
      }
      rows->declare_labels(std::move(inliers));
    } else {
      throw Error(ErrorCode::UnsupportedFormat, "unexpected ARFF header line: " + std::string(body));
    }
  }
  if (!rows) throw Error(ErrorCode::UnsupportedFormat, "ARFF input has no @data section");
  return stream;
}

LabeledStream parse_csv(std::istream& in, const std::string& name, const ParseOptions& options) {
  LabeledStream stream;
  stream.name = name;
  std::string line;
  std::optional<RowBuilder> rows;

  while (std::getline(in, line)) {
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    auto fields = split_fields(body);
    if (rows) {
      rows->add(fields);
      continue;
    }
    std::vector<ColumnRole> roles(fields.size(), ColumnRole::Feature);
    std::size_t label_index = options.has_label ? fields.size() - 1 : fields.size();
    if (options.has_label && !options.label_column.empty()) {
      const auto it = std::find(fields.begin(), fields.end(), options.label_column);
      if (it == fields.end()) {
        throw Error(ErrorCode::MissingLabel, "no column named '" + options.label_column + "'");
      }
      label_index = static_cast<std::size_t>(it - fields.begin());
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == label_index) {
        roles[i] = ColumnRole::Label;
      } else if (ignored(options, fields[i])) {
        roles[i] = ColumnRole::Ignored;
      }
    }
    rows.emplace(stream, std::move(roles), options);
  }
  if (!rows) throw Error(ErrorCode::MalformedRow, "CSV input has no header");
  return stream;
}

void min_max_rescale(LabeledStream& stream) {
  if (stream.vectors.empty()) return;
  const MatrixX<double> data = [&] {
    MatrixX<double> m(stream.dims, static_cast<Eigen::Index>(stream.vectors.size()));
    for (std::size_t i = 0; i < stream.vectors.size(); ++i) {
      m.col(static_cast<Eigen::Index>(i)) = stream.vectors[i].values;
    }
    return m;
  }();
  const VectorX<double> lo = data.rowwise().minCoeff();
  const VectorX<double> range = data.rowwise().maxCoeff() - lo;
  const VectorX<double> scale =
      range.unaryExpr([](double r) { return r > 0.0 ? 1.0 / r : 0.0; });
  for (auto& v : stream.vectors) v.values = (v.values - lo).cwiseProduct(scale);
}

void shuffle_stream(LabeledStream& stream, std::uint64_t seed) {
  std::vector<std::size_t> order(stream.vectors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draw so the order does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }

  LabeledStream out;
  out.name = stream.name;
  out.dims = stream.dims;
  for (std::size_t i = 0; i < order.size(); ++i) {
    DataVector v = stream.vectors[order[i]];
    v.t = static_cast<TimeIndex>(i + 1);
    out.vectors.push_back(std::move(v));
    out.labels.push_back(stream.labels[order[i]]);
    out.source_rows.push_back(stream.source_rows[order[i]]);
  }
  stream = std::move(out);
}

}  // namespace softod
