#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "softod/types.hpp"

namespace softod {

enum class DatasetFormat { Arff, Csv };

struct LabeledStream {
  std::string name;
  Eigen::Index dims = 0;
  std::vector<DataVector> vectors;
  std::vector<bool> labels;  // labels[i] is true for an outlier; aligned with vectors
  // 0-based data row each vector came from (differs from i after a shuffle).
  std::vector<std::size_t> source_rows;

  std::int64_t outlier_count() const;
};

struct ParseOptions {
  // Attribute/column holding the class. Empty: the single nominal attribute
  // (ARFF) or the last column (CSV).
  std::string label_column;
  std::string outlier_label = "yes";
  // When set, any label other than outlier_label / inlier_label is rejected.
  std::optional<std::string> inlier_label;
  // Numeric attributes that are not features (e.g. a row id).
  std::vector<std::string> ignore_columns;
  // CSV only: false treats every column as a feature and labels all rows inlier.
  bool has_label = true;
};

// Guesses the format from the file extension (.arff / .csv).
DatasetFormat format_from_path(const std::filesystem::path& path);

LabeledStream parse_dataset(const std::filesystem::path& path, DatasetFormat format,
                            const ParseOptions& options = {});
LabeledStream parse_arff(std::istream& in, const std::string& name, const ParseOptions& options = {});
LabeledStream parse_csv(std::istream& in, const std::string& name, const ParseOptions& options = {});

// Per-dimension min-max rescaling to [0, 1]; constant dimensions map to 0.
void min_max_rescale(LabeledStream& stream);

// Seeded permutation of the replay order. Arrival indices are reassigned
// 1..n in the new order and labels follow their vectors.
void shuffle_stream(LabeledStream& stream, std::uint64_t seed);

}  // namespace softod
